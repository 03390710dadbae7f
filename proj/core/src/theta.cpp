#include "petrovitch/theta.hpp"

#include "petrovitch/errors.hpp"
#include "petrovitch/solve1d.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace petrovitch {

namespace {

/// Exponent e(j) = (alpha j^2 + beta j) / 2.
struct QuadExponent {
  int alpha;
  int beta;
  long at(long j) const { return (alpha * j * j + beta * j) / 2; }
};

constexpr QuadExponent kPsi{1, 1};
constexpr QuadExponent kTheta{1, -1};
constexpr QuadExponent kG{2, 0};

constexpr long kMaxTerms = 1000000;

Real falling(long n, int k) {
  Real r = 1;
  for (int i = 0; i < k; ++i) r *= Real(n - i);
  return r;
}

/// sum_j d^a/dw^a d^b/dc^b c^e(j) w^j.
SeriesValue quad_series(const Real& c_in, const Real& w_in, QuadExponent ex, int a, int b,
                        const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  Real c = rebase(c_in);
  Real w = rebase(w_in);
  if (abs(c) >= 1) throw DomainError("theta: |q| must be below 1");
  if (a < 0 || a > 2 || b < 0 || b > 2) throw DomainError("theta: derivative order must be 0..2");

  SeriesValue out;
  out.value = 0;
  out.error_bound = 0;
  if (c == 0) {
    for (long j = a; j <= 4; ++j) {
      if (ex.at(j) == b) out.value += falling(j, a) * falling(b, b) * pow(w, static_cast<int>(j - a));
    }
    out.terms = 5;
    return out;
  }

  const Real half_eps = ctx.eps_residual() / 2;
  const Real aw = abs(w);
  const Real c_alpha = pow(c, ex.alpha);
  const Real c_inv_b = pow(c, -b);
  // cpow = c^e(j), cstep = c^(e(j+1) - e(j)).
  Real cpow = pow(c, static_cast<int>(ex.at(a)));
  Real cstep = pow(c, static_cast<int>(ex.at(a + 1) - ex.at(a)));
  Real wpow = 1;
  Real abs_sum = 0;
  const long j0 = 3 + b;
  for (long j = a;; ++j) {
    long e = ex.at(j);
    Real term = 0;
    if (e >= b) term = falling(j, a) * falling(e, b) * cpow * c_inv_b * wpow;
    out.value += term;
    Real at = abs(term);
    abs_sum += at;
    if (j >= j0) {
      // Bound on |t_{j+1}/t_j|; each factor is non-increasing in j from here on.
      Real growth = Real(j + 1) / Real(j + 1 - a);
      for (int i = 0; i < b; ++i) growth *= Real(ex.at(j + 1) - i) / Real(e - i);
      Real ratio = abs(cstep) * aw * growth;
      if (ratio <= 0.5 && at <= half_eps) {
        out.terms = static_cast<int>(j + 1);
        out.error_bound = 2 * at + abs_sum * Real(j + 2) * pow2(-static_cast<long>(ctx.bits()) + 1);
        return out;
      }
    }
    if (j > kMaxTerms) throw ConvergenceError("theta: series truncation did not settle", "", "");
    cpow *= cstep;
    cstep *= c_alpha;
    wpow *= w;
  }
}

int sgn(const Real& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

Real psi(const Real& q, const Real& u, const PrecisionContext& ctx) {
  return theta_partial(q, u, 0, 0, ctx).value;
}
Real psi_u(const Real& q, const Real& u, const PrecisionContext& ctx) {
  return theta_partial(q, u, 1, 0, ctx).value;
}
Real psi_uu(const Real& q, const Real& u, const PrecisionContext& ctx) {
  return theta_partial(q, u, 2, 0, ctx).value;
}

/// Smallest odd m with 1 + 2 sum_{k<=m} (-1)^k r^(k^2) > 0.
int hjlp_m(const Real& r) {
  Real s = 1;
  for (int m = 1;; m += 2) {
    s = 1;
    for (int k = 1; k <= m; ++k) {
      Real t = 2 * pow(r, k * k);
      s += (k % 2 == 0) ? t : Real(-t);
    }
    if (s > 0) return m;
    if (m > 100000) throw ConvergenceError("sign_certificate: no m found", "", "");
  }
}

}  // namespace

std::string to_string(ThetaForm f) { return f == ThetaForm::Psi ? "psi" : "g"; }

ThetaSection theta_section(const Real& q, int n, ThetaForm form, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  if (n < 0) throw DomainError("theta_section: n must be non-negative");
  if (abs(q) >= 1) throw DomainError("theta_section: |q| must be below 1");
  Real qq = rebase(q);
  QuadExponent ex = form == ThetaForm::Psi ? kPsi : kG;
  std::vector<Real> c;
  c.reserve(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) c.push_back(pow(qq, static_cast<int>(ex.at(k))));
  return {qq, n, RealPoly(std::move(c)), form};
}

SeriesValue theta_partial(const Real& q, const Real& u, int a, int b, const PrecisionContext& ctx) {
  return quad_series(q, u, kPsi, a, b, ctx);
}

SeriesValue theta_eval(const Real& q, const Real& u, const PrecisionContext& ctx) {
  return quad_series(q, u, kPsi, 0, 0, ctx);
}

SeriesValue theta_du(const Real& q, const Real& u, const PrecisionContext& ctx) {
  return quad_series(q, u, kPsi, 1, 0, ctx);
}

SeriesValue theta_dq(const Real& q, const Real& u, const PrecisionContext& ctx) {
  return quad_series(q, u, kPsi, 0, 1, ctx);
}

SeriesValue theta_classic(const Real& q, const Real& v, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  return quad_series(q, Real(-rebase(v)), kTheta, 0, 0, ctx);
}

SeriesValue g_form(const Real& r, const Real& x, const PrecisionContext& ctx) {
  return quad_series(r, x, kG, 0, 0, ctx);
}

FormValues convert_forms(const Real& q_in, const Real& u_in, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  Real q = rebase(q_in);
  Real u = rebase(u_in);
  if (q < 0 || q >= 1) throw DomainError("convert_forms: q must lie in [0, 1)");
  Real sq = sqrt(q);
  FormValues out;
  auto p = theta_eval(q, u, ctx);
  auto t = theta_classic(q, Real(-q * u), ctx);
  auto g = g_form(sq, u, ctx);
  auto t2 = theta_classic(q, Real(-sq * u), ctx);
  out.psi = p.value;
  out.theta_classic = t.value;
  out.g_form = g.value;
  Real eps = ctx.eps_residual();
  Real d1 = abs(p.value - t.value);
  Real d2 = abs(g.value - t2.value);
  Real tol1 = eps + p.error_bound + t.error_bound;
  Real tol2 = eps + g.error_bound + t2.error_bound;
  out.checks.add("psi_equals_theta", d1 <= tol1, Real(tol1 - d1));
  out.checks.add("g_equals_theta", d2 <= tol2, Real(tol2 - d2));
  return out;
}

SignCertificate sign_certificate(const Real& q_in, int n, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  Real q = rebase(q_in);
  if (!(q > 0 && q < 1)) throw DomainError("sign_certificate: q must lie in (0, 1)");
  if (n < 2) throw DomainError("sign_certificate: n must be >= 2");
  SignCertificate out;
  out.m = hjlp_m(q);
  const int m = out.m;
  if (n < 2 * m + 2) return out;
  // (-1)^k q^(k^2) S_n(q, -q^(-2k)) = sum_j (-1)^(j-k) q^((j-k)^2).
  std::vector<Real> pw(static_cast<std::size_t>(n) + 1);
  for (int d = 0; d <= n; ++d) pw[static_cast<std::size_t>(d)] = pow(q, d * d);
  bool ok = true;
  for (int k = m + 1; k <= n - m - 1 && ok; ++k) {
    Real s = 0;
    for (int j = 0; j <= n; ++j) {
      int d = std::abs(j - k);
      const Real& t = pw[static_cast<std::size_t>(d)];
      if (d % 2 == 0) {
        s += t;
      } else {
        s -= t;
      }
    }
    ok = s > 0;
  }
  out.ok = ok;
  out.certified_real_roots = ok ? n - 2 * m - 2 : 0;
  return out;
}

CriticalPoints critical_points(const Real& q_in, int count, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  Real q = rebase(q_in);
  if (!(q > 0 && q < 1)) throw DomainError("critical_points: q must lie in (0, 1)");
  if (count < 1) throw DomainError("critical_points: count must be positive");
  CriticalPoints out;
  Real window = pow(q, -2 * (count + 2));
  Real rho = pow(q, Real(-1) / 32);
  if (rho > 1.08) rho = 1.08;
  if (rho < 1.0005) rho = 1.0005;

  Real prev_u = Real(-1) / 8;
  int prev_s = sgn(psi_u(q, prev_u, ctx));
  while (static_cast<int>(out.points.size()) < count) {
    Real u = prev_u * rho;
    if (-u > window) break;
    int s = sgn(psi_u(q, u, ctx));
    if (s != prev_s && s != 0 && prev_s != 0) {
      auto br = safe_newton([&](const Real& x) { return psi_u(q, x, ctx); },
                            [&](const Real& x) { return psi_uu(q, x, ctx); }, u, prev_u,
                            ctx.eps_root(), ctx.max_iter());
      CriticalPoint cp;
      cp.u = br.x;
      cp.value = psi(q, br.x, ctx);
      cp.is_min = psi_uu(q, br.x, ctx) > 0;
      out.points.push_back(std::move(cp));
    }
    if (s != 0) prev_s = s;
    prev_u = u;
  }
  out.complete = static_cast<int>(out.points.size()) >= count;
  if (!out.complete) out.note = "search window exhausted before `count` critical points";
  out.values_alternate = true;
  for (std::size_t i = 1; i < out.points.size(); ++i) {
    if (sgn(out.points[i].value) * sgn(out.points[i - 1].value) >= 0) out.values_alternate = false;
  }
  return out;
}

RootEnumeration real_roots(const Real& q_in, int count, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  Real q = rebase(q_in);
  if (!(q > 0 && q < 1)) throw DomainError("real_roots: q must lie in (0, 1)");
  if (count < 1) throw DomainError("real_roots: count must be positive");
  RootEnumeration out;
  const Real eps = ctx.eps_residual();

  CriticalPoints cps;
  for (int want = count + 1; want <= 4 * count + 8; want *= 2) {
    out.roots.clear();
    cps = critical_points(q, want, ctx);
    Real prev_u = 0;
    Real prev_v = 1;
    for (const auto& cp : cps.points) {
      auto ev = theta_eval(q, cp.u, ctx);
      Real tol = eps + ev.error_bound;
      bool prev_zero = abs(prev_v) <= tol && prev_u != 0;
      if (abs(cp.value) <= tol) {
        out.roots.push_back(cp.u);
        out.roots.push_back(cp.u);
      } else if (!prev_zero && sgn(cp.value) != sgn(prev_v)) {
        auto br = safe_newton([&](const Real& x) { return psi(q, x, ctx); },
                              [&](const Real& x) { return psi_u(q, x, ctx); }, cp.u, prev_u,
                              ctx.eps_root(), ctx.max_iter());
        out.roots.push_back(br.x);
      }
      prev_u = cp.u;
      prev_v = cp.value;
    }
    if (static_cast<int>(out.roots.size()) >= count || !cps.complete) break;
  }

  bool found = static_cast<int>(out.roots.size()) >= count;
  // Psi(q, -q^-(k+1/2)) has sign (-1)^k for k > m, m from the g-form with r = sqrt(q);
  // each such window must hold a root.
  int m = hjlp_m(sqrt(q));
  bool ok = true;
  if (!out.roots.empty()) {
    Real reach = -out.roots.back();
    for (int k = m + 1;; ++k) {
      Real lo = pow(q, -(Real(k) + Real(0.5)));
      Real hi = lo / q;
      if (hi > reach) break;
      int s = sgn(psi(q, Real(-lo), ctx));
      if (s != ((k % 2 == 0) ? 1 : -1)) {
        ok = false;
        break;
      }
      bool has_root = std::any_of(out.roots.begin(), out.roots.end(),
                                  [&](const Real& r) { return -r > lo && -r < hi; });
      if (!has_root) {
        ok = false;
        break;
      }
    }
  }
  out.complete = found && ok;
  if (!found) out.note = "fewer real roots than requested inside the search window";
  if (!ok) out.note = "alternation certificate failed inside the search window";
  if (static_cast<int>(out.roots.size()) > count) out.roots.resize(static_cast<std::size_t>(count));
  return out;
}

ConjectureProbe conjecture_probe(const Real& q, int count, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  ConjectureProbe out;
  auto roots = real_roots(q, count, ctx);
  for (std::size_t i = 1; i < roots.roots.size(); ++i) {
    out.root_ratios.push_back(roots.roots[i] / roots.roots[i - 1]);
  }
  auto cps = critical_points(q, count, ctx);
  for (std::size_t i = 1; i < cps.points.size(); ++i) {
    out.critical_ratios.push_back(cps.points[i].u / cps.points[i - 1].u);
    out.value_ratios.push_back(cps.points[i].value / cps.points[i - 1].value);
  }
  return out;
}

namespace {

constexpr double kTrackStart = 0.05;
constexpr double kTrackEnd = 0.999;

/// Newton on dPsi/du from u0 at fixed q; the result must be a local minimum
/// within `max_rel` of u0.
std::optional<Real> newton_min(const Real& q, const Real& u0, const Real& max_rel,
                               const PrecisionContext& ctx) {
  Real u = u0;
  Real tol = pow2(-static_cast<long>(ctx.bits() / 2));
  for (int it = 0; it < 12; ++it) {
    Real d2 = psi_uu(q, u, ctx);
    if (!(d2 > 0)) return std::nullopt;
    Real du = psi_u(q, u, ctx) / d2;
    u -= du;
    if (abs(u - u0) > max_rel * abs(u0)) return std::nullopt;
    if (abs(du) <= tol * abs(u)) {
      if (!(psi_uu(q, u, ctx) > 0)) return std::nullopt;
      return u;
    }
  }
  return std::nullopt;
}

struct Event {
  Real q_lo, q_hi, u_lo, u_hi;
};

/// Tangent predictor for the minimum at q_to, taken in log|u| from (q, u).
Real predict_min(const Real& q, const Real& u, const Real& q_to, const PrecisionContext& ctx) {
  Real slope = -theta_partial(q, u, 1, 1, ctx).value / psi_uu(q, u, ctx);
  return u * exp((q_to - q) * slope / u);
}

/// Follows one negative local minimum upward in q until its value turns
/// non-negative; nullopt if it survives to q = kTrackEnd.
std::optional<Event> track_minimum(Real q, Real u, const PrecisionContext& ctx) {
  const Real max_rel = 0.01;
  Real h = 1e-3;
  const Real h_max = 0.02;
  const Real h_min = 1e-14;
  while (q < kTrackEnd) {
    Real step = std::min(h, Real(Real(kTrackEnd) - q));
    Real q_next = q + step;
    Real u_pred = predict_min(q, u, q_next, ctx);
    auto u_next = newton_min(q_next, u_pred, max_rel, ctx);
    if (!u_next) {
      h /= 2;
      if (h < h_min) throw TrackingError("spectrum: extremum track collapsed", q.str());
      continue;
    }
    Real v = psi(q_next, *u_next, ctx);
    if (v >= 0) return Event{q, q_next, u, *u_next};
    q = q_next;
    u = *u_next;
    h = std::min(Real(h * 1.5), h_max);
  }
  return std::nullopt;
}

/// Bisects the sign change of the tracked minimum value on [q_lo, q_hi].
Event bisect_event(Event e, const Real& width, const PrecisionContext& ctx) {
  while (e.q_hi - e.q_lo > width * e.q_hi) {
    Real qm = (e.q_lo + e.q_hi) / 2;
    auto u = newton_min(qm, predict_min(e.q_lo, e.u_lo, qm, ctx), Real(0.01), ctx);
    if (!u) throw TrackingError("spectrum: lost the minimum while bisecting", e.q_lo.str());
    if (psi(qm, *u, ctx) < 0) {
      e.q_lo = qm;
      e.u_lo = *u;
    } else {
      e.q_hi = qm;
      e.u_hi = *u;
    }
  }
  return e;
}

}  // namespace

namespace {

/// Newton on (Psi, dPsi/du) = 0 at the precision of ctx. Stops at eps_root or
/// once the step stops shrinking below the 2^-(bits/2) noise floor.
std::optional<std::pair<Real, Real>> newton_pair(const Real& q0, const Real& u0,
                                                 const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  Real q = rebase(q0);
  Real u = rebase(u0);
  const Real tol = ctx.eps_root();
  const Real floor = pow2(-static_cast<long>(ctx.bits() / 2));
  Real prev_step = 1;
  for (unsigned it = 0; it < 60; ++it) {
    Real f1 = psi(q, u, ctx);
    Real f2 = psi_u(q, u, ctx);
    Real j11 = theta_partial(q, u, 0, 1, ctx).value;
    Real j21 = theta_partial(q, u, 1, 1, ctx).value;
    Real j22 = psi_uu(q, u, ctx);
    Real det = j11 * j22 - f2 * j21;
    if (det == 0) return std::nullopt;
    Real dq = (f1 * j22 - f2 * f2) / det;
    Real du = (j11 * f2 - j21 * f1) / det;
    q -= dq;
    u -= du;
    Real step = std::max(Real(abs(dq) / abs(q)), Real(abs(du) / abs(u)));
    if (step <= tol) return std::make_pair(q, u);
    if (it >= 2 && step <= floor && step > prev_step / 4) return std::make_pair(q, u);
    prev_step = step;
  }
  return std::nullopt;
}

}  // namespace

CriticalPair polish_pair(const Real& q0, const Real& u0, int index, const PrecisionContext& ctx) {
  PrecisionScope outer(ctx);
  const Real eps = ctx.eps_residual();
  for (unsigned bits = ctx.bits(); bits <= 4 * ctx.bits(); bits *= 2) {
    PrecisionContext c = ctx.with_bits(bits);
    PrecisionScope scope(c);
    auto r = newton_pair(q0, u0, c);
    if (!r) continue;
    CriticalPair p;
    p.q_hat = r->first;
    p.u_hat = r->second;
    p.index = index;
    p.residual_psi = abs(psi(p.q_hat, p.u_hat, c));
    p.residual_dpsi = abs(psi_u(p.q_hat, p.u_hat, c));
    p.extrapolated = index > 25;
    if (p.residual_psi <= eps && p.residual_dpsi <= eps) return p;
  }
  throw PrecisionError("polish_pair: residuals above eps_residual after escalation",
                       8 * ctx.bits());
}

std::vector<CriticalPair> spectrum(int k_max, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  if (k_max < 1) throw DomainError("spectrum: k_max must be positive");
  const int tracks = k_max + 2;
  Real q0 = kTrackStart;
  auto cps = critical_points(q0, 2 * tracks + 1, ctx);
  std::vector<Real> minima;
  for (const auto& cp : cps.points) {
    if (cp.is_min && cp.value < 0) minima.push_back(cp.u);
    if (static_cast<int>(minima.size()) == tracks) break;
  }
  if (static_cast<int>(minima.size()) < tracks) {
    throw TrackingError("spectrum: not enough negative minima at the start", q0.str());
  }

  std::vector<CriticalPair> events;
  for (const auto& u0 : minima) {
    auto e = track_minimum(q0, u0, ctx);
    if (!e) continue;
    Event b = bisect_event(*e, pow2(-40), ctx);
    CriticalPair p = polish_pair((b.q_lo + b.q_hi) / 2, (b.u_lo + b.u_hi) / 2, 0, ctx);
    if (p.q_hat < b.q_lo || p.q_hat > b.q_hi) {
      throw TrackingError("spectrum: polished pair left the bisection bracket", b.q_lo.str());
    }
    events.push_back(std::move(p));
  }
  std::sort(events.begin(), events.end(),
            [](const CriticalPair& a, const CriticalPair& b) { return a.q_hat < b.q_hat; });
  if (static_cast<int>(events.size()) < k_max) {
    throw TrackingError("spectrum: fewer merging minima than requested", q0.str());
  }
  events.resize(static_cast<std::size_t>(k_max));
  for (int k = 0; k < k_max; ++k) {
    auto& p = events[static_cast<std::size_t>(k)];
    p.index = k + 1;
    p.extrapolated = k + 1 > 25;
  }
  return events;
}

Real functional_residual(const Real& q_in, const Real& u_hat_in, const std::vector<Real>& grid,
                         const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  Real q = rebase(q_in);
  Real uh = rebase(u_hat_in);
  auto F = [&](const Real& x) { return psi(q, Real(-uh * x), ctx); };
  Real d = F(Real(-q));
  if (abs(d) < ctx.eps_sign()) {
    throw DegenerateError("functional_residual: F(-q) vanishes at working precision");
  }
  Real worst = 0;
  for (const auto& x_in : grid) {
    Real x = rebase(x_in);
    if (x < -1 || x > 0) throw DomainError("functional_residual: grid must lie in [-1, 0]");
    Real r = abs(F(x) - 1 - x * F(Real(q * x)) / d);
    if (r > worst) worst = r;
  }
  return worst;
}

std::vector<std::pair<Real, Real>> theta_samples(const Real& q_in, const Real& from_in,
                                                 const Real& to_in, int samples,
                                                 const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  if (samples < 1) throw DomainError("theta_samples: samples must be positive");
  Real q = rebase(q_in);
  Real from = rebase(from_in);
  Real to = rebase(to_in);
  std::vector<std::pair<Real, Real>> rows;
  rows.reserve(static_cast<std::size_t>(samples) + 1);
  for (int i = 0; i <= samples; ++i) {
    Real u = from + (to - from) * Real(i) / Real(samples);
    rows.emplace_back(u, psi(q, u, ctx));
  }
  return rows;
}

std::string samples_csv(const std::vector<std::pair<Real, Real>>& rows, int digits) {
  std::ostringstream os;
  os << "u,psi\n";
  for (const auto& [u, v] : rows) os << to_decimal(u, digits) << ',' << to_decimal(v, digits) << '\n';
  return os.str();
}

nlohmann::json to_json(const CriticalPair& p, int digits) {
  return {{"k", p.index},
          {"q_hat", to_decimal(p.q_hat, digits)},
          {"u_hat", to_decimal(p.u_hat, digits)},
          {"residual_psi", to_decimal(p.residual_psi, 6)},
          {"residual_dpsi", to_decimal(p.residual_dpsi, 6)},
          {"extrapolated", p.extrapolated}};
}

nlohmann::json to_json(const std::vector<CriticalPair>& pairs, int digits) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : pairs) arr.push_back(to_json(p, digits));
  return arr;
}

CriticalPair critical_pair_from_json(const nlohmann::json& j) {
  try {
    CriticalPair p;
    p.index = j.at("k").get<int>();
    p.q_hat = parse_real(j.at("q_hat").get<std::string>());
    p.u_hat = parse_real(j.at("u_hat").get<std::string>());
    p.residual_psi = parse_real(j.at("residual_psi").get<std::string>());
    p.residual_dpsi = parse_real(j.at("residual_dpsi").get<std::string>());
    p.extrapolated = j.value("extrapolated", p.index > 25);
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("critical pair: malformed document: ") + e.what());
  }
}

}  // namespace petrovitch
