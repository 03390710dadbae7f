#include "petrovitch/cones.hpp"

#include "petrovitch/errors.hpp"
#include "petrovitch/rootkit.hpp"

#include <sstream>

namespace petrovitch {

namespace {

Real real_of(const Rational& x) { return to_real(x); }
Real real_of(const Real& x) { return rebase(x); }

/// value >= bound, exact for rationals and with relative slack eps_sign otherwise.
template <class T>
bool at_least(const T& value, const T& bound, const PrecisionContext& ctx) {
  if constexpr (std::is_same_v<T, Rational>) {
    return value >= bound;
  } else {
    return value >= bound - abs(bound) * ctx.eps_sign();
  }
}

template <class T>
T rational_bound(long num, long den) {
  if constexpr (std::is_same_v<T, Rational>) {
    return Rational(num, den);
  } else {
    return Real(num) / Real(den);
  }
}

template <class T>
void require_positive(const Polynomial<T>& p, const char* who) {
  if (p.is_zero()) throw DomainError(std::string(who) + ": zero polynomial");
  for (const auto& a : p.coeffs()) {
    if (!(a > 0)) throw DomainError(std::string(who) + ": coefficients must be positive");
  }
}

}  // namespace

template <class T>
ConeReport<T> cone_report(const Polynomial<T>& p, int n, const std::vector<Real>& m_table,
                          const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  require_positive(p, "cone_report");
  const int d = p.degree();
  if (n < d) throw DomainError("cone_report: n must be at least the degree");
  ConeReport<T> r;
  for (int k = 1; k <= d; ++k) r.gamma.push_back(T(p[k - 1] / p[k]));
  for (int i = 1; i < d; ++i) r.ratios.push_back(T(p[i] * p[i] / (p[i - 1] * p[i + 1])));
  for (int k = 2; k <= d; ++k) {
    r.delta.push_back(T(r.gamma[static_cast<std::size_t>(k - 1)] / r.gamma[static_cast<std::size_t>(k - 2)]));
  }
  for (const auto& a : p.coeffs()) r.log_image.push_back(log(real_of(a)));

  r.hutchinson_ok = r.newton_ok = r.petrovitch_ok = true;
  const T four = rational_bound<T>(4, 1);
  for (int i = 1; i < d; ++i) {
    const T& ratio = r.ratios[static_cast<std::size_t>(i - 1)];
    Real rr = real_of(ratio);
    bool h = at_least(ratio, four, ctx);
    r.hutchinson_ok = r.hutchinson_ok && h;
    r.checks.add("hutchinson", h, Real(rr - 4), i);

    T nb = rational_bound<T>(static_cast<long>(n - i + 1) * (i + 1), static_cast<long>(n - i) * i);
    bool nw = at_least(ratio, nb, ctx);
    r.newton_ok = r.newton_ok && nw;
    r.checks.add("newton", nw, Real(rr - real_of(nb)), i);

    if (static_cast<std::size_t>(i) <= m_table.size()) {
      Real m = rebase(m_table[static_cast<std::size_t>(i - 1)]);
      bool pv = rr >= m - abs(m) * ctx.eps_sign();
      r.petrovitch_ok = r.petrovitch_ok && pv;
      r.checks.add("petrovitch", pv, Real(rr - m), i);
    }
  }
  return r;
}

template <class T>
DeltaReport delta_inequality_check(const Polynomial<T>& p, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  require_positive(p, "delta_inequality_check");
  DeltaReport out;
  out.section_hyperbolic = all_sections_hyperbolic(is_section_hyperbolic(p, ctx));
  out.checks.add("section_hyperbolic", out.section_hyperbolic, Real(out.section_hyperbolic ? 0 : -1));
  const int d = p.degree();
  std::vector<T> delta;
  for (int k = 2; k <= d; ++k) delta.push_back(T(p[k - 1] * p[k - 1] / (p[k - 2] * p[k])));
  out.min_delta = 0;
  for (std::size_t i = 0; i < delta.size(); ++i) {
    Real dv = real_of(delta[i]);
    if (i == 0 || dv < out.min_delta) out.min_delta = dv;
    bool ge3 = at_least(delta[i], rational_bound<T>(3, 1), ctx);
    out.falsified = out.falsified || !ge3;
    out.checks.add("delta_at_least_3", ge3, Real(dv - 3), static_cast<int>(i) + 2);
  }
  for (std::size_t i = 1; i < delta.size(); ++i) {
    // k = i + 2: delta_k delta_{k-1} - 4 delta_{k-1} + 3
    T margin = delta[i] * delta[i - 1] - 4 * delta[i - 1] + 3;
    Real mv = real_of(margin);
    out.margins.push_back(mv);
    bool ok = at_least(margin, T(0), ctx) ||
              abs(mv) <= real_of(T(delta[i] * delta[i - 1])) * ctx.eps_sign();
    out.checks.add("delta_margin", ok, mv, static_cast<int>(i) + 2);
  }
  return out;
}

Counterexample hutchinson_counterexample(int n, int k, const Rational& eps_in,
                                         const PrecisionContext& ctx, const Rational& a_km1,
                                         const Rational& a_k, const Rational& a_kp1) {
  PrecisionScope scope(ctx);
  if (n < 2 || k < 1 || k > n - 1) throw DomainError("hutchinson_counterexample: need 1 <= k <= n-1");
  if (!(eps_in > 0 && eps_in <= 1)) throw DomainError("hutchinson_counterexample: eps must lie in (0, 1]");
  if (!(a_km1 > 0 && a_k > 0 && a_kp1 > 0)) {
    throw DomainError("hutchinson_counterexample: the middle triple must be positive");
  }
  if (!(a_k * a_k < 4 * a_km1 * a_kp1)) {
    throw DomainError("hutchinson_counterexample: the middle triple must violate a_k^2 >= 4 a_{k-1} a_{k+1}");
  }
  // b at eps = 1, indices 0..n.
  std::vector<Rational> b(static_cast<std::size_t>(n) + 1);
  auto at = [&](int i) -> Rational& { return b[static_cast<std::size_t>(i)]; };
  at(k - 1) = a_km1;
  at(k) = a_k;
  at(k + 1) = a_kp1;
  for (int i = k + 2; i <= n; ++i) at(i) = at(i - 1) * at(i - 1) / (8 * at(i - 2));
  for (int i = k - 2; i >= 0; --i) at(i) = at(i + 1) * at(i + 1) / (8 * at(i + 2));

  auto build = [&](const Rational& eps) {
    std::vector<Rational> c(b.size());
    for (int i = 0; i <= n; ++i) {
      int e = 0;
      if (i > k + 1) e = i - k - 1;
      if (i < k - 1) e = k - 1 - i;
      Rational pe = 1;
      for (int j = 0; j < e; ++j) pe *= eps;
      c[static_cast<std::size_t>(i)] = at(i) * pe;
    }
    return ExactPoly(std::move(c));
  };

  Counterexample out;
  Rational eps = eps_in;
  for (int h = 0; h <= 64; ++h, eps /= 2) {
    ExactPoly p = build(eps);
    Rational bound = cauchy_bound(p) + 1;
    int real = count_with_multiplicity(p, Rational(-bound), bound, ctx);
    if (real < n) {
      out.poly = std::move(p);
      out.eps = eps;
      out.halvings = h;
      out.real_roots = real;
      break;
    }
  }
  if (out.poly.is_zero()) {
    throw ConstructionError("hutchinson_counterexample: no conjugate pair certified; retry with a smaller eps");
  }
  const ExactPoly& p = out.poly;
  for (int i = 1; i < n; ++i) {
    Rational lhs = p[i] * p[i];
    Rational rhs = 4 * p[i - 1] * p[i + 1];
    bool ok = (i == k) ? lhs < rhs : lhs >= rhs;
    out.checks.add(i == k ? "hutchinson_violated" : "hutchinson_holds", ok,
                   to_real(i == k ? Rational(rhs - lhs) : Rational(lhs - rhs)), i);
  }
  out.checks.add("conjugate_pair", out.real_roots < n, Real(n - out.real_roots));
  return out;
}

template <class T>
nlohmann::json to_json(const ConeReport<T>& r, int digits) {
  auto arr = [&](const auto& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& x : v) a.push_back(to_decimal(real_of(x), digits));
    return a;
  };
  return {{"ratios", arr(r.ratios)},         {"gamma", arr(r.gamma)},
          {"delta", arr(r.delta)},           {"hutchinson_ok", r.hutchinson_ok},
          {"newton_ok", r.newton_ok},        {"petrovitch_ok", r.petrovitch_ok},
          {"log_image", arr(r.log_image)}};
}

nlohmann::json to_json(const DeltaReport& r, int digits) {
  nlohmann::json m = nlohmann::json::array();
  for (const auto& x : r.margins) m.push_back(to_decimal(x, digits));
  return {{"margins", m},
          {"min_delta", to_decimal(r.min_delta, digits)},
          {"falsified", r.falsified},
          {"section_hyperbolic", r.section_hyperbolic}};
}

std::string log_image_csv(const std::vector<Real>& log_image, int digits) {
  std::ostringstream os;
  os << "i,log_a\n";
  for (std::size_t i = 0; i < log_image.size(); ++i) os << i << ',' << to_decimal(log_image[i], digits) << '\n';
  return os.str();
}

#define PETROVITCH_INSTANTIATE_CONES(T)                                                        \
  template ConeReport<T> cone_report(const Polynomial<T>&, int, const std::vector<Real>&,      \
                                     const PrecisionContext&);                                 \
  template DeltaReport delta_inequality_check(const Polynomial<T>&, const PrecisionContext&); \
  template nlohmann::json to_json(const ConeReport<T>&, int);

PETROVITCH_INSTANTIATE_CONES(Rational)
PETROVITCH_INSTANTIATE_CONES(Real)

}  // namespace petrovitch
