#include "petrovitch/extremal.hpp"

#include "petrovitch/rootkit.hpp"
#include "petrovitch/solve1d.hpp"

#include <algorithm>

namespace petrovitch {

namespace {

constexpr unsigned kMaxEscalatedBits = 4096;
constexpr int kRootkitDegreeCap = 12;

Real abs_scale(const RealPoly& p, const Real& x) {
  Real ax = abs(x);
  Real acc = 0;
  for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it) {
    acc *= ax;
    acc += abs(*it);
  }
  return acc;
}

Real relative_value(const RealPoly& p, const Real& x) {
  Real s = abs_scale(p, x);
  if (s == 0) return Real(0);
  return Real(abs(p(x)) / s);
}

RealPoly times_x(const RealPoly& p) { return shift_up(p, 1); }

/// Rightmost local minimum of S left of its root R. The scan walks the
/// distance d from R outward geometrically (factor 2^(1/8)) starting at
/// D 2^-(bits/2), stopping at the first point where S' <= 0.
Real rightmost_min_scan(const RealPoly& S, const Real& R, const Real& D,
                        const PrecisionContext& ctx) {
  RealPoly dS = derivative(S);
  RealPoly ddS = derivative(dS);
  Real step = pow(Real(2), Real(1) / 8);
  Real d = D * pow2(-static_cast<long>(ctx.bits() / 2));
  if (!(dS(Real(R - d)) > 0)) {
    throw ConstructionError("next_step: critical point closer to the root than the scan start");
  }
  Real prev = d;
  while (d < D * 4) {
    d *= step;
    if (!(dS(Real(R - d)) > 0)) {
      auto br = safe_newton([&](const Real& x) { return Real(dS(x)); },
                            [&](const Real& x) { return Real(ddS(x)); }, Real(R - d),
                            Real(R - prev), ctx.eps_root(), ctx.max_iter());
      if (ddS(br.x) < 0) {
        throw ConstructionError("next_step: located critical point is not a minimum");
      }
      return br.x;
    }
    prev = d;
  }
  throw ConstructionError("next_step: failed to bracket the rightmost critical point");
}

Real rightmost_min(const RealPoly& S, const Real& R, const Real& D,
                   const std::optional<Real>& xi_prev, const PrecisionContext& ctx) {
  RealPoly dS = derivative(S);
  RealPoly ddS = derivative(dS);
  if (xi_prev) {
    Real a = *xi_prev * Real("0.34");
    Real b = *xi_prev * Real("0.28");
    if (dS(a) < 0 && dS(b) > 0) {
      auto br = safe_newton([&](const Real& x) { return Real(dS(x)); },
                            [&](const Real& x) { return Real(ddS(x)); }, a, b, ctx.eps_root(),
                            ctx.max_iter());
      if (ddS(br.x) > 0) return br.x;
    }
  }
  return rightmost_min_scan(S, R, D, ctx);
}

StepResult finish_step(const RealPoly& S, const Real& xi, const PrecisionContext& ctx) {
  StepResult r;
  r.xi = xi;
  r.A_next = -S(xi);
  if (!(r.A_next > 0)) {
    throw ConstructionError("next_step: minimum value is not negative");
  }
  r.T_next = S + RealPoly::constant(r.A_next);
  r.residual_value = relative_value(r.T_next, xi);
  RealPoly dT = derivative(r.T_next);
  Real s = abs_scale(r.T_next, xi);
  r.residual_slope = s == 0 ? Real(0) : Real(abs(xi * dT(xi)) / s);
  Real worst = std::max(r.residual_value, r.residual_slope);
  if (worst > ctx.eps_residual()) {
    throw PrecisionError("next_step: double-root residual " + to_decimal(worst, 6) +
                             " above eps_residual",
                         ctx.bits() * 2);
  }
  return r;
}

struct RootsInfo {
  Real largest;
  Real scale;
};

/// Largest root of a polynomial with all roots real, and the distance to the
/// next root (or to the Cauchy bound when there is only one).
RootsInfo largest_root(const RealPoly& p, const PrecisionContext& ctx) {
  auto ivs = isolate_all_roots(p, ctx);
  if (ivs.empty()) throw ConstructionError("polynomial has no real roots");
  Real top = refine_root(p, ivs.back(), ctx).value;
  Real scale;
  if (ivs.size() >= 2) {
    scale = top - refine_root(p, ivs[ivs.size() - 2], ctx).value;
  } else {
    scale = cauchy_bound(p);
  }
  return {top, scale};
}

void attach_from_T(ExtremalSequence& seq, const RealPoly& T) {
  seq.A.assign(T.coeffs().rbegin(), T.coeffs().rend());
  seq.degree = T.degree();
  seq.m.clear();
  for (int i = 1; i + 1 < static_cast<int>(seq.A.size()); ++i) {
    seq.m.push_back(seq.A[i] * seq.A[i] / (seq.A[i - 1] * seq.A[i + 1]));
  }
}

/// `steps` canonical steps from T with optional previous double root.
RealPoly run_steps(RealPoly T, std::optional<Real> xi_prev, int steps, ExtremalSequence& seq,
                   const PrecisionContext& ctx) {
  for (int k = 0; k < steps; ++k) {
    auto r = next_step(T, xi_prev, ctx);
    seq.xi.push_back(r.xi);
    seq.residuals.push_back(std::max(r.residual_value, r.residual_slope));
    T = std::move(r.T_next);
    xi_prev = r.xi;
  }
  return T;
}

template <class F>
auto with_escalation(const PrecisionContext& ctx, F&& body) {
  unsigned bits = ctx.bits();
  for (;;) {
    PrecisionContext c = bits == ctx.bits() ? ctx : ctx.with_bits(bits);
    PrecisionScope scope(c);
    try {
      return body(c);
    } catch (const PrecisionError&) {
      if (bits * 2 > kMaxEscalatedBits) throw;
      bits *= 2;
    }
  }
}

}  // namespace

Real xi_ratio_lower_bound() { return (Real(59) - sqrt(Real(2777))) / 22; }

RealPoly ExtremalSequence::T_at(int j) const {
  if (j < seed_degree || j > degree) throw DomainError("T_at: degree out of range");
  std::vector<Real> prefix(A.begin(), A.begin() + j + 1);
  return reverse(RealPoly(std::move(prefix)));
}

RealPoly ExtremalSequence::S_at(int j) const { return times_x(T_at(j)); }

StepResult next_step(const RealPoly& T, const std::optional<Real>& xi_prev,
                     const PrecisionContext& ctx) {
  if (T.degree() < 1) throw DomainError("next_step: T must have degree >= 1");
  for (const auto& a : T.coeffs()) {
    if (!(a > 0)) throw DomainError("next_step: T must have positive coefficients");
  }
  RealPoly S = times_x(T);
  Real D = xi_prev ? Real(abs(*xi_prev)) : cauchy_bound(T);
  Real xi = rightmost_min(S, Real(0), D, xi_prev, ctx);
  return finish_step(S, xi, ctx);
}

ExtremalSequence build_sequence(int n, const PrecisionContext& ctx) {
  if (n < 2) throw DomainError("build_sequence: n must be >= 2");
  return with_escalation(ctx, [n](const PrecisionContext& c) {
    ExtremalSequence seq;
    seq.bits = c.bits();
    seq.seed_degree = 1;
    RealPoly T{Real(1), Real(1)};
    T = run_steps(T, std::nullopt, n - 1, seq, c);
    attach_from_T(seq, T);
    seq.checks = verify_step_invariants(seq, c);
    return seq;
  });
}

GeneralSeed make_seed(const RealPoly& S1, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  if (S1.degree() < 1) throw SeedError("seed must have positive degree");
  if (!(S1.leading() > 0)) throw SeedError("seed must have a positive leading coefficient");
  auto v = is_hyperbolic(S1, ctx);
  if (v.status != HyperbolicStatus::Hyperbolic) {
    throw SeedError("seed must have all roots real and simple (verdict " +
                    to_string(v.status) + ")");
  }
  Real B = cauchy_bound(S1) + 1;
  if (sturm_count(S1, Real(-B), Real(0), ctx) != S1.degree() || S1(Real(0)) == 0) {
    throw SeedError("seed roots must all be negative");
  }
  GeneralSeed seed{S1, true};
  if (S1.degree() < 3) return seed;
  // Compare the rightmost minimum with every other local minimum.
  RealPoly d1 = derivative(S1);
  RealPoly d2 = derivative(d1);
  std::vector<Real> minima_x;
  for (const auto& iv : isolate_all_roots(d1, ctx)) {
    Real c = refine_root(d1, iv, ctx).value;
    if (d2(c) > 0) minima_x.push_back(c);
  }
  if (minima_x.empty()) return seed;
  Real right = S1(minima_x.back());
  Real tol = ctx.eps_residual() * (abs(right) + 1);
  for (std::size_t i = 0; i + 1 < minima_x.size(); ++i) {
    if (S1(minima_x[i]) > right + tol) seed.rightmost_min_ok = false;
  }
  return seed;
}

ExtremalSequence build_from_seed(const GeneralSeed& seed, int steps, const PrecisionContext& ctx) {
  if (!seed.rightmost_min_ok) {
    throw SeedError("seed's rightmost local minimum is not its largest local minimum");
  }
  if (steps < 1) throw DomainError("build_from_seed: steps must be >= 1");
  return with_escalation(ctx, [&](const PrecisionContext& c) {
    ExtremalSequence seq;
    seq.bits = c.bits();
    RealPoly S1 = seed.S1 / seed.S1.leading();
    seq.seed_degree = S1.degree();
    RealPoly T;
    std::optional<Real> xi_prev;
    int remaining = steps;
    if (S1.degree() == 1) {
      T = S1;
    } else {
      seq.seed = S1;
      auto info = largest_root(S1, c);
      Real xi = rightmost_min(S1, info.largest, info.scale, std::nullopt, c);
      auto r = finish_step(S1, xi, c);
      seq.xi.push_back(r.xi);
      seq.residuals.push_back(std::max(r.residual_value, r.residual_slope));
      T = std::move(r.T_next);
      xi_prev = r.xi;
      --remaining;
    }
    T = run_steps(T, xi_prev, remaining, seq, c);
    attach_from_T(seq, T);
    seq.checks = verify_step_invariants(seq, c);
    return seq;
  });
}

RealPoly scaled_reverted(const ExtremalSequence& seq, int i) {
  if (!seq.canonical()) throw DomainError("scaled_reverted needs the canonical sequence");
  if (i < 2 || i > seq.degree) throw DomainError("scaled_reverted: index out of range");
  RealPoly P = seq.T_at(i);
  const Real& zeta = seq.xi_at(i - 1);
  RealPoly scaled = scale_var(P, Real(-zeta));
  return scaled / P(Real(0));
}

CheckReport verify_step_invariants(const ExtremalSequence& seq, const PrecisionContext& ctx) {
  PrecisionScope scope(std::max(ctx.bits(), seq.bits));
  CheckReport rep;
  Real eps = ctx.eps_residual();
  for (std::size_t k = 0; k < seq.residuals.size(); ++k) {
    rep.add("double_root", seq.residuals[k] <= eps, Real(eps - seq.residuals[k]),
            static_cast<int>(k + 1));
  }
  for (std::size_t k = 0; k + 1 < seq.xi.size(); ++k) {
    rep.add("xi_increasing", seq.xi[k + 1] > seq.xi[k],
            Real((seq.xi[k + 1] - seq.xi[k]) / abs(seq.xi[k])), static_cast<int>(k + 1));
  }
  if (!seq.canonical()) return rep;

  const int n = seq.degree;
  Real third = Real(1) / 3;
  Real l0 = xi_ratio_lower_bound();
  for (std::size_t k = 0; k + 1 < seq.xi.size(); ++k) {
    Real ratio = seq.xi[k + 1] / seq.xi[k];
    Real upper = third - ratio;
    int idx = static_cast<int>(k + 1);
    if (k == 0) {
      rep.add("xi_ratio_upper", upper >= -eps, upper, idx,
              abs(upper) <= eps ? "equality at the first step" : "");
    } else {
      rep.add("xi_ratio_upper", upper > eps, upper, idx);
    }
    rep.add("xi_ratio_lower", ratio > l0, Real(ratio - l0), idx);
  }
  for (int j = 2; j < n; ++j) {
    rep.add("A_decreasing", seq.A_at(j + 1) < seq.A_at(j),
            Real((seq.A_at(j) - seq.A_at(j + 1)) / seq.A_at(j)), j);
  }
  for (std::size_t i = 0; i < seq.m.size(); ++i) {
    const Real& mi = seq.m[i];
    Real margin = std::min(Real(mi - 3), Real(4 - mi));
    rep.add("m_bounds", mi > 3 && mi <= 4 + eps, margin, static_cast<int>(i + 1));
    if (i + 1 < seq.m.size()) {
      rep.add("m_decreasing", seq.m[i + 1] < mi, Real(mi - seq.m[i + 1]),
              static_cast<int>(i + 1));
    }
  }
  // sgn S_k(xi_s) = (-1)^(k-s+1) for 1 <= s <= k-2.
  for (int k = 3; k <= n; ++k) {
    RealPoly S = seq.S_at(k);
    for (int s = 1; s <= k - 2; ++s) {
      const Real& x = seq.xi_at(s);
      Real v = S(x);
      int expected = ((k - s + 1) % 2 == 0) ? 1 : -1;
      Real rel = v / abs_scale(S, x) * expected;
      rep.add("signchange", rel > ctx.eps_sign(), rel, k * 1000 + s,
              "k=" + std::to_string(k) + " s=" + std::to_string(s));
    }
  }
  // A_l <= A_m (4|xi_{m-1}|)^(l-m) / 3^((l-m)(l-m+5)/2) for 1 < m < l.
  for (int m = 2; m <= n; ++m) {
    for (int l = m + 1; l <= n; ++l) {
      int d = l - m;
      Real bound = seq.A_at(m) * pow(Real(4 * abs(seq.xi_at(m - 1))), d) /
                   pow(Real(3), d * (d + 5) / 2);
      Real margin = (bound - seq.A_at(l)) / bound;
      rep.add("estimate", margin >= 0, margin, m * 1000 + l,
              "m=" + std::to_string(m) + " l=" + std::to_string(l));
    }
  }
  // Root structure of the first reverted polynomials through the rootkit.
  for (int j = 2; j <= std::min(n, kRootkitDegreeCap); ++j) {
    RealPoly T = seq.T_at(j);
    try {
      auto v = is_hyperbolic(T, ctx);
      Real B = cauchy_bound(T) + 1;
      bool negative = count_with_multiplicity(T, Real(-B), Real(0), ctx) == j;
      bool ok = v.status == HyperbolicStatus::Boundary && v.distinct_real_roots == j - 1 &&
                negative;
      rep.add("T_roots", ok, Real(ok ? 1 : -1), j, to_string(v.status));
    } catch (const Error& e) {
      rep.add("T_roots", false, Real(-1), j, e.what());
    }
  }
  return rep;
}

}  // namespace petrovitch
