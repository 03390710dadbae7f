#include "petrovitch/iterate.hpp"

#include "petrovitch/errors.hpp"
#include "petrovitch/rootkit.hpp"
#include "petrovitch/theta.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace petrovitch {

RealPoly iterate_step(const RealPoly& f, const Real& q_in, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  Real q = rebase(q_in);
  Real d = f(Real(-q));
  if (abs(d) < ctx.eps_sign()) {
    throw DegenerateError("iterate_step: f(-q) vanishes at working precision");
  }
  std::vector<Real> c;
  c.reserve(f.size() + 1);
  c.emplace_back(1);
  Real qi = 1;
  for (const auto& a : f.coeffs()) {
    c.push_back(a * qi / d);
    qi *= q;
  }
  return RealPoly(std::move(c));
}

FixedPoint fixed_point(const Real& q_in, int branch, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  Real q = rebase(q_in);
  if (!(q > 0 && q < 1)) throw DomainError("fixed_point: q must lie in (0, 1)");
  if (branch < 1) throw DomainError("fixed_point: branch must be >= 1");
  auto roots = real_roots(q, branch, ctx);
  if (!roots.complete || static_cast<int>(roots.roots.size()) < branch) {
    throw IncompleteEnumeration("fixed_point: branch " + std::to_string(branch) +
                                " is beyond the certified root enumeration");
  }
  FixedPoint fp;
  fp.branch = branch;
  fp.u_hat = roots.roots[static_cast<std::size_t>(branch - 1)];
  // c_j = q^(j(j+1)/2) (-u)^j; |c_{j+1}/c_j| = q^(j+1) |u|.
  Real w = -fp.u_hat;
  Real half_eps = ctx.eps_residual() / 2;
  std::vector<Real> c{Real(1)};
  Real qj = q;
  for (int j = 1;; ++j) {
    c.push_back(c.back() * qj * w);
    qj *= q;
    if (j >= 3 && qj * abs(w) <= 0.5 && abs(c.back()) <= half_eps) break;
    if (j > 1000000) throw ConvergenceError("fixed_point: truncation did not settle", "", "");
  }
  fp.truncation_bound = 2 * abs(c.back());
  fp.poly = RealPoly(std::move(c));
  return fp;
}

namespace {

template <class T>
bool hypothesis_impl(const Polynomial<T>& f1, const T& zero_tol, const PrecisionContext& ctx) {
  if (f1.degree() < 1) return false;
  if (abs(T(f1(T(-1)))) > zero_tol) return false;
  auto [Q, rem] = divmod(f1, Polynomial<T>{T(1), T(1)});
  (void)rem;
  if (Q.degree() == 0) return Q.leading() != 0;
  if (abs(T(Q(T(-1)))) <= zero_tol) return false;
  auto v = is_hyperbolic(Q, ctx);
  if (!v.acceptable()) return false;
  T bound = cauchy_bound(Q) + 1;
  return count_with_multiplicity(Q, T(-1), bound, ctx) == 0;
}

}  // namespace

bool in_hypothesis(const RealPoly& f1, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  Real scale = 0;
  for (const auto& a : f1.coeffs()) scale += abs(a);
  return hypothesis_impl(f1, Real(ctx.eps_residual() * scale), ctx);
}

bool in_hypothesis(const ExactPoly& f1, const PrecisionContext& ctx) {
  return hypothesis_impl(f1, Rational(0), ctx);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Converging:
      return "Converging";
    case Verdict::Diverging:
      return "Diverging";
    case Verdict::Indeterminate:
      break;
  }
  return "Indeterminate";
}

IterationTrace run(const Real& q_in, const RealPoly& f1_in, int steps, int grid_size,
                   const PrecisionContext& ctx, const IterationOptions& opts) {
  PrecisionScope scope(ctx);
  if (steps < 1) throw DomainError("run: steps must be positive");
  if (grid_size < 2) throw DomainError("run: grid_size must be >= 2");
  IterationTrace t;
  t.q = rebase(q_in);
  std::vector<Real> c;
  for (const auto& a : f1_in.coeffs()) c.push_back(rebase(a));
  t.f1 = RealPoly(std::move(c));
  if (abs(t.f1(Real(-t.q))) < ctx.eps_sign()) {
    throw DegenerateError("run: f1(-q) vanishes at working precision");
  }
  t.in_hypothesis = in_hypothesis(t.f1, ctx);
  for (int i = 0; i < grid_size; ++i) t.grid.push_back(Real(-i) / Real(grid_size - 1));

  FixedPoint fp = fixed_point(t.q, opts.branch, ctx);
  t.fixed_point_u = fp.u_hat;
  std::vector<Real> target;
  for (const auto& x : t.grid) target.push_back(fp.poly(x));

  const Real eps = ctx.eps_residual();
  auto measure = [&](const RealPoly& f) {
    Real norm = 0;
    Real dist = 0;
    for (std::size_t i = 0; i < t.grid.size(); ++i) {
      Real v = f(t.grid[i]);
      norm = std::max(norm, Real(abs(v)));
      dist = std::max(dist, Real(abs(v - target[i])));
    }
    t.sup_norm.push_back(norm);
    t.sup_dist.push_back(dist);
  };

  RealPoly f = t.f1;
  t.iterates.push_back(f);
  measure(f);
  for (int j = 2; j <= steps; ++j) {
    RealPoly next;
    try {
      next = iterate_step(f, t.q, ctx);
    } catch (const DegenerateError& e) {
      t.halted = std::string(e.what()) + " at step " + std::to_string(j);
      break;
    }
    Real scale = 0;
    for (const auto& a : next.coeffs()) scale += abs(a);
    Real at0 = abs(next(Real(0)) - 1);
    Real at1 = abs(next(Real(-1))) / std::max(Real(1), scale);
    t.checks.add("normalized_at_0", at0 <= eps, Real(eps - at0), j);
    t.checks.add("vanishes_at_minus_1", at1 <= eps, Real(eps - at1), j);
    bool grows = next.degree() == f.degree() + 1;
    t.checks.add("degree_plus_one", grows, Real(grows ? 0 : -1), j);
    f = std::move(next);
    t.iterates.push_back(f);
    measure(f);
  }
  t.steps = static_cast<int>(t.iterates.size());

  bool diverged = std::any_of(t.sup_norm.begin(), t.sup_norm.end(), [&](const Real& v) {
    return v > opts.divergence_threshold;
  });
  Real floor = 10 * (fp.truncation_bound + eps);
  std::size_t n = t.sup_dist.size();
  std::size_t window = static_cast<std::size_t>(std::ceil(opts.window_fraction * static_cast<double>(n)));
  bool decreasing = n >= 3 && window >= 2;
  for (std::size_t i = n - std::min(window, n) + 1; decreasing && i < n; ++i) {
    decreasing = t.sup_dist[i] < t.sup_dist[i - 1] || t.sup_dist[i] <= floor;
  }
  if (diverged) {
    t.verdict = Verdict::Diverging;
  } else if (decreasing && !t.halted) {
    t.verdict = Verdict::Converging;
  } else {
    t.verdict = Verdict::Indeterminate;
  }
  t.reached_tolerance = !t.sup_dist.empty() && t.sup_dist.back() < opts.tolerance;
  return t;
}

std::string trace_csv(const IterationTrace& t, int digits) {
  std::ostringstream os;
  os << "step,sup_norm,sup_dist\n";
  for (std::size_t i = 0; i < t.sup_dist.size(); ++i) {
    os << i + 1 << ',' << to_decimal(t.sup_norm[i], digits) << ',' << to_decimal(t.sup_dist[i], digits)
       << '\n';
  }
  return os.str();
}

std::string snapshot_csv(const IterationTrace& t, const std::vector<int>& steps, int digits) {
  std::vector<int> keep;
  for (int s : steps) {
    if (s >= 1 && s <= static_cast<int>(t.iterates.size())) keep.push_back(s);
  }
  std::ostringstream os;
  os << 'x';
  for (int s : keep) os << ",f_" << s;
  os << '\n';
  for (const auto& x : t.grid) {
    os << to_decimal(x, digits);
    for (int s : keep) os << ',' << to_decimal(t.iterates[static_cast<std::size_t>(s - 1)](x), digits);
    os << '\n';
  }
  return os.str();
}

nlohmann::json to_json(const IterationTrace& t, int digits) {
  nlohmann::json dist = nlohmann::json::array();
  nlohmann::json norm = nlohmann::json::array();
  for (const auto& v : t.sup_dist) dist.push_back(to_decimal(v, digits));
  for (const auto& v : t.sup_norm) norm.push_back(to_decimal(v, digits));
  nlohmann::json j = {{"q", to_decimal(t.q, digits)},
                      {"steps", t.steps},
                      {"grid_size", t.grid.size()},
                      {"fixed_point_u", to_decimal(t.fixed_point_u, digits)},
                      {"verdict", to_string(t.verdict)},
                      {"reached_tolerance", t.reached_tolerance},
                      {"in_hypothesis", t.in_hypothesis},
                      {"sup_dist", dist},
                      {"sup_norm", norm}};
  j["halted"] = t.halted ? nlohmann::json(*t.halted) : nlohmann::json(nullptr);
  return j;
}

}  // namespace petrovitch
