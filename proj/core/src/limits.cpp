#include "petrovitch/limits.hpp"

#include "petrovitch/errors.hpp"
#include "petrovitch/solve1d.hpp"

namespace petrovitch {

namespace {

/// Least J with lam^(J+1) / (1-lam)^2 <= eps_residual.
int gap_terms(const Real& lam, const PrecisionContext& ctx) {
  Real bound = ctx.eps_residual() * (1 - lam) * (1 - lam);
  Real p = lam * lam;
  int J = 1;
  while (p > bound) {
    p *= lam;
    ++J;
  }
  return J;
}

Real big_phi(const Real& x) { return -1 / x - 2 / (x + 1); }
Real big_phi_dx(const Real& x) { return 1 / (x * x) + 2 / ((x + 1) * (x + 1)); }

Real nest_phi_dx(const Real& r, const Real& x, const PrecisionContext& ctx) {
  Real half_eps = ctx.eps_residual() / 2;
  Real inv = 1 / r;
  Real rj = r;
  Real pj = inv;
  Real s = 0;
  for (int j = 1;; ++j) {
    Real d = x + pj;
    s -= 1 / (d * d);
    if (rj / ((1 - r) * (1 - rj)) <= half_eps) return s;
    rj *= r;
    pj *= inv;
    if (j > 100000) throw ConvergenceError("nest_phi: truncation did not settle", "", "");
  }
}

/// Root of Phi(x) = phi(r, x) on (-1, 0); the difference is increasing there.
Real solve_phi_equation(const Real& r, const PrecisionContext& ctx) {
  auto f = [&](const Real& x) { return Real(big_phi(x) - nest_phi(r, x, ctx)); };
  auto df = [&](const Real& x) { return Real(big_phi_dx(x) - nest_phi_dx(r, x, ctx)); };
  Real lo = Real(-9) / 10;
  Real hi = Real(-1) / 20;
  return safe_newton(f, df, lo, hi, ctx.eps_root(), ctx.max_iter()).x;
}

}  // namespace

GapValue master_gap(const Real& lam_in, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  Real lam = rebase(lam_in);
  if (!(lam > 0 && lam < 1)) throw DomainError("master_gap: lambda must lie in (0, 1)");
  int J = gap_terms(lam, ctx);
  Real psi = 0;
  Real p = lam;
  for (int j = 1; j <= J; ++j) {
    psi += p / (1 - p * lam);
    p *= lam;
  }
  GapValue g;
  g.value = 1 / lam - 2 / (1 - lam) - psi;
  g.tail_bound = p / ((1 - lam) * (1 - lam));
  g.terms = J;
  return g;
}

Real master_gap_derivative(const Real& lam_in, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  Real lam = rebase(lam_in);
  if (!(lam > 0 && lam < 1)) throw DomainError("master_gap: lambda must lie in (0, 1)");
  int J = gap_terms(lam, ctx);
  Real d = 0;
  for (int j = 1; j <= J; ++j) {
    Real a = pow(lam, j);
    Real b = 1 - a * lam;
    // d/dlam lam^j / (1 - lam^(j+1))
    d += (j * pow(lam, j - 1) * b + a * (j + 1) * a) / (b * b);
  }
  return -1 / (lam * lam) - 2 / ((1 - lam) * (1 - lam)) - d;
}

MasterSolution solve_master(const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  auto G = [&](const Real& x) { return master_gap(x, ctx).value; };
  Real lo = Real(28) / 100;
  Real hi = Real(1) / 3;
  MasterSolution out;
  auto br = bisect(G, lo, hi, pow2(-40), ctx.max_iter());
  out.bisection_steps = br.iterations;
  lo = br.lo;
  hi = br.hi;
  Real x = br.x;
  const Real tol = ctx.eps_root();
  bool polished = false;
  for (int it = 0; it < 50; ++it) {
    Real dx = G(x) / master_gap_derivative(x, ctx);
    Real nx = x - dx;
    if (nx < lo || nx > hi) break;
    x = nx;
    ++out.newton_steps;
    if (abs(dx) <= tol * x) {
      polished = true;
      break;
    }
  }
  if (!polished) {
    auto fine = bisect(G, lo, hi, tol, ctx.max_iter());
    out.bisection_steps += fine.iterations;
    x = fine.x;
  }
  out.lambda = x;
  out.gap_residual = abs(G(x));
  return out;
}

LowerBound lower_bound_l0(const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  const Real c = Real(11) / 16;
  auto h = [&](const Real& x) { return Real(big_phi(x) - c); };
  auto dh = [&](const Real& x) { return big_phi_dx(x); };
  auto br = safe_newton(h, dh, Real(Real(-1) / 2), Real(Real(-1) / 10), ctx.eps_root(),
                        ctx.max_iter());
  LowerBound out;
  out.l0 = -br.x;
  out.residual = abs(h(br.x));
  out.checks.add("l0_residual", out.residual <= ctx.eps_residual(),
                 Real(ctx.eps_residual() - out.residual));

  // 1/2 + 1/8 + 1/26 + 1/80 + 2/242 < 11/16, the tail from j = 5 bounded by
  // twice its first term since 3^j - 1 > 2(3^(j-1) - 1).
  Rational four = Rational(1, 2) + Rational(1, 8) + Rational(1, 26) + Rational(1, 80) +
                  Rational(2, 242);
  Rational gap = Rational(11, 16) - four;
  out.checks.add("eleven_sixteenths_four_terms", gap > 0, to_real(gap));

  Real partial = 0;
  Real p3 = 3;
  int J = 0;
  while (true) {
    ++J;
    partial += 1 / (p3 - 1);
    p3 *= 3;
    if (2 / (p3 - 1) <= ctx.eps_residual()) break;
  }
  Real total = partial + 2 / (p3 - 1);
  out.checks.add("eleven_sixteenths_partial_sums", total < c, Real(c - total), J);
  return out;
}

Real nest_phi(const Real& r_in, const Real& x_in, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  Real r = rebase(r_in);
  Real x = rebase(x_in);
  if (!(r > 0 && r < 1)) throw DomainError("nest_phi: r must lie in (0, 1)");
  Real half_eps = ctx.eps_residual() / 2;
  Real inv = 1 / r;
  Real rj = r;
  Real pj = inv;
  Real s = 0;
  for (int j = 1;; ++j) {
    s += 1 / (x + pj);
    // sum_{i>j} 1/(x + r^-i) <= sum r^i/(1 - r^i) <= r^(j+1) / ((1-r)(1-r^(j+1))).
    if (rj * r / ((1 - r) * (1 - rj * r)) <= half_eps) return s;
    rj *= r;
    pj *= inv;
    if (j > 100000) throw ConvergenceError("nest_phi: truncation did not settle", "", "");
  }
}

IntervalNest interval_nest(int i_max, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  if (i_max < 1) throw DomainError("interval_nest: i_max must be >= 1");
  IntervalNest nest;
  Real l0 = lower_bound_l0(ctx).l0;
  Real r0 = Real(1) / 3;
  nest.l.push_back(l0);
  nest.r.push_back(r0);
  nest.widths.push_back(r0 - l0);
  const Real floor = ctx.eps_root() * 64;
  bool contracts = true;
  for (int i = 0; i < i_max; ++i) {
    const Real& li = nest.l.back();
    const Real& ri = nest.r.back();
    Real l_next = -solve_phi_equation(ri, ctx);
    Real r_next = -solve_phi_equation(li, ctx);
    Real w = r_next - l_next;
    const Real& w_prev = nest.widths.back();
    bool ordered = li < l_next && l_next < r_next && r_next < ri;
    bool halves = 2 * w < w_prev;
    if (!(ordered && halves)) {
      if (w_prev <= floor) break;
      throw ContractError("interval_nest: the nest stopped contracting", i + 1);
    }
    contracts = contracts && halves;
    nest.l.push_back(l_next);
    nest.r.push_back(r_next);
    nest.widths.push_back(w);
    if (w <= ctx.eps_root()) break;
  }
  Real inside = std::min(Real(nest.l.back() - l0), Real(r0 - nest.r.back()));
  nest.checks.add("nest_halves", contracts, Real(nest.widths.front() - nest.widths.back()));
  nest.checks.add("nest_inside_I0", inside >= 0, inside);
  return nest;
}

nlohmann::json limits_report(const MasterSolution& master, const IntervalNest& nest,
                             const LowerBound& l0, int digits) {
  nlohmann::json l = nlohmann::json::array();
  nlohmann::json r = nlohmann::json::array();
  for (const auto& x : nest.l) l.push_back(to_decimal(x, digits));
  for (const auto& x : nest.r) r.push_back(to_decimal(x, digits));
  return {{"lambda", to_decimal(master.lambda, digits)},
          {"gap_residual", to_decimal(master.gap_residual, 6)},
          {"nest", {{"l", l}, {"r", r}}},
          {"l0", to_decimal(l0.l0, digits)}};
}

}  // namespace petrovitch
