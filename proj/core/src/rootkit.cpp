#include "petrovitch/rootkit.hpp"

#include "petrovitch/solve1d.hpp"

#include <algorithm>

namespace petrovitch {

namespace {

template <class T>
constexpr bool is_exact = std::is_same_v<T, Rational>;

template <class T>
T max_abs_coeff(const Polynomial<T>& p) {
  T m(0);
  for (const auto& a : p.coeffs()) {
    T v = abs(a);
    if (v > m) m = v;
  }
  return m;
}

/// Float: Σ|a_i||x|^i, the scale against which a computed value is judged.
template <class T>
T eval_scale(const Polynomial<T>& p, const T& x) {
  T ax = abs(x);
  T acc(0);
  for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it) {
    acc *= ax;
    acc += abs(*it);
  }
  return acc;
}

/// Sign of p(x); Float values within eps_sign of zero relative to the
/// evaluation scale count as zero.
template <class T>
int value_sign(const Polynomial<T>& p, const T& x, const PrecisionContext& ctx) {
  T v = p(x);
  if constexpr (is_exact<T>) {
    return v > 0 ? 1 : (v < 0 ? -1 : 0);
  } else {
    if (abs(v) <= eval_scale(p, x) * ctx.eps_sign()) return 0;
    return v > 0 ? 1 : -1;
  }
}

template <class T>
T width_tol(const PrecisionContext& ctx) {
  return pow2_neg<T>(ctx.root_exponent());
}

template <class T>
std::string text(const T& x) {
  if constexpr (is_exact<T>) {
    return to_fraction(x);
  } else {
    return to_decimal(x, 30);
  }
}

/// Moves lo/hi inward by eps_root (relative) until p is nonzero there.
template <class T>
void nudge_endpoints(const Polynomial<T>& p, T& lo, T& hi, const PrecisionContext& ctx) {
  T tol = width_tol<T>(ctx);
  for (int tries = 0; tries < 64 && value_sign(p, lo, ctx) == 0; ++tries) {
    lo += detail::stop_width(tol, lo);
  }
  for (int tries = 0; tries < 64 && value_sign(p, hi, ctx) == 0; ++tries) {
    hi -= detail::stop_width(tol, hi);
  }
}

/// The last element is gcd(p, p') up to scale.
template <class T>
std::vector<Polynomial<T>> build_chain(const Polynomial<T>& p, const PrecisionContext& ctx) {
  std::vector<Polynomial<T>> chain;
  auto normalize = [](Polynomial<T> q) {
    if constexpr (!is_exact<T>) {
      T m = max_abs_coeff(q);
      if (m > 0) q /= m;
    }
    return q;
  };
  chain.push_back(normalize(p));
  if (p.degree() < 1) return chain;
  chain.push_back(normalize(derivative(p)));
  while (chain.back().degree() > 0) {
    const auto& a = chain[chain.size() - 2];
    const auto& b = chain.back();
    Polynomial<T> r = -divmod(a, b).second;
    if constexpr (!is_exact<T>) {
      T eps = ctx.eps_sign();
      if (max_abs_coeff(r) <= eps) break;
      r = normalize(r);
      if (abs(r.leading()) < eps) {
        throw IndeterminateError("sturm chain leading coefficient below eps_sign at index " +
                                     std::to_string(chain.size()),
                                 static_cast<int>(chain.size()));
      }
    } else {
      if (r.is_zero()) break;
    }
    chain.push_back(std::move(r));
  }
  return chain;
}

template <class T>
int count_distinct(const std::vector<Polynomial<T>>& chain, const T& lo, const T& hi,
                   const PrecisionContext& ctx) {
  return sign_variations(chain, lo, ctx) - sign_variations(chain, hi, ctx);
}

/// Square-free tower p = g_0, g_1 = gcd(g_0, g_0'), ... down to a constant.
template <class T>
std::vector<Polynomial<T>> gcd_tower(const Polynomial<T>& p, const PrecisionContext& ctx) {
  std::vector<Polynomial<T>> tower{p};
  while (tower.back().degree() > 0) {
    auto chain = build_chain(tower.back(), ctx);
    const auto& g = chain.back();
    if (g.degree() < 1) break;
    tower.push_back(g);
  }
  return tower;
}

template <class T>
void isolate_rec(const std::vector<Polynomial<T>>& chain, const Polynomial<T>& p, T lo, T hi,
                 int count, const PrecisionContext& ctx, std::vector<RootInterval<T>>& out,
                 unsigned depth) {
  if (count <= 0) return;
  T tol = width_tol<T>(ctx);
  if (count == 1) {
    out.push_back({lo, hi, 1, true});
    return;
  }
  T mid = (lo + hi) / 2;
  if (hi - lo <= detail::stop_width(tol, mid) || depth > ctx.max_iter()) {
    // Unresolvable cluster at this precision.
    out.push_back({lo, hi, count, false});
    return;
  }
  // Avoid splitting exactly on a root of p.
  for (int k = 3; value_sign(p, mid, ctx) == 0 && k < 40; ++k) {
    mid = lo + (hi - lo) * T(k) / T(2 * k + 1);
  }
  int left = count_distinct(chain, lo, mid, ctx);
  isolate_rec(chain, p, lo, mid, left, ctx, out, depth + 1);
  isolate_rec(chain, p, mid, hi, count - left, ctx, out, depth + 1);
}

}  // namespace

std::string to_string(HyperbolicStatus s) {
  switch (s) {
    case HyperbolicStatus::Hyperbolic:
      return "Hyperbolic";
    case HyperbolicStatus::NotHyperbolic:
      return "NotHyperbolic";
    case HyperbolicStatus::Boundary:
      return "Boundary";
    case HyperbolicStatus::Indeterminate:
      return "Indeterminate";
  }
  return "Indeterminate";
}

template <class T>
T pow2_neg(unsigned exp) {
  if constexpr (is_exact<T>) {
    boost::multiprecision::mpz_int d = 1;
    d <<= exp;
    return Rational(boost::multiprecision::mpz_int(1), d);
  } else {
    return pow2(-static_cast<long>(exp));
  }
}

template <class T>
std::vector<Polynomial<T>> sturm_chain(const Polynomial<T>& p, const PrecisionContext& ctx) {
  if (p.is_zero()) throw DomainError("sturm_chain of the zero polynomial");
  return build_chain(p, ctx);
}

template <class T>
int sign_variations(const std::vector<Polynomial<T>>& chain, const T& x,
                    const PrecisionContext& ctx) {
  int variations = 0;
  int last = 0;
  for (const auto& q : chain) {
    int s = value_sign(q, x, ctx);
    if (s == 0) continue;
    if (last != 0 && s != last) ++variations;
    last = s;
  }
  return variations;
}

template <class T>
int sturm_count(const Polynomial<T>& p, const T& lo, const T& hi, const PrecisionContext& ctx) {
  if (p.is_zero()) throw DomainError("sturm_count of the zero polynomial");
  if (!(lo < hi)) return 0;
  T a = lo, b = hi;
  nudge_endpoints(p, a, b, ctx);
  auto chain = build_chain(p, ctx);
  return count_distinct(chain, a, b, ctx);
}

template <class T>
int count_with_multiplicity(const Polynomial<T>& p, const T& lo, const T& hi,
                            const PrecisionContext& ctx) {
  if (p.is_zero()) throw DomainError("count_with_multiplicity of the zero polynomial");
  T a = lo, b = hi;
  nudge_endpoints(p, a, b, ctx);
  int total = 0;
  for (const auto& g : gcd_tower(p, ctx)) {
    if (g.degree() < 1) break;
    total += count_distinct(build_chain(g, ctx), a, b, ctx);
  }
  return total;
}

template <class T>
T cauchy_bound(const Polynomial<T>& p) {
  if (p.degree() < 1) return T(1);
  T lead = abs(p.leading());
  T m(0);
  for (int i = 0; i < p.degree(); ++i) {
    T v = abs(p[i]) / lead;
    if (v > m) m = v;
  }
  return T(1) + m;
}

template <class T>
std::vector<RootInterval<T>> isolate_roots(const Polynomial<T>& p, const T& lo, const T& hi,
                                           const PrecisionContext& ctx) {
  if (p.is_zero()) throw DomainError("isolate_roots of the zero polynomial");
  std::vector<RootInterval<T>> out;
  if (p.degree() < 1 || !(lo < hi)) return out;
  T a = lo, b = hi;
  nudge_endpoints(p, a, b, ctx);
  auto chain = build_chain(p, ctx);
  isolate_rec(chain, p, a, b, count_distinct(chain, a, b, ctx), ctx, out, 0);
  // Multiplicity hint: how many tower members vanish inside each interval.
  auto tower = gcd_tower(p, ctx);
  std::vector<std::vector<Polynomial<T>>> chains;
  for (std::size_t i = 1; i < tower.size(); ++i) chains.push_back(build_chain(tower[i], ctx));
  for (auto& iv : out) {
    if (!iv.certified) continue;
    int hint = 1;
    for (const auto& c : chains) {
      if (count_distinct(c, iv.lo, iv.hi, ctx) > 0) ++hint;
    }
    iv.multiplicity_hint = hint;
  }
  return out;
}

template <class T>
std::vector<RootInterval<T>> isolate_all_roots(const Polynomial<T>& p,
                                               const PrecisionContext& ctx) {
  T b = cauchy_bound(p);
  return isolate_roots(p, T(-b), b, ctx);
}

template <class T>
RefinedRoot<T> refine_root(const Polynomial<T>& p, const RootInterval<T>& iv,
                           const PrecisionContext& ctx) {
  if (!iv.certified) throw DomainError("refine_root needs a certified interval");
  T tol = width_tol<T>(ctx);
  T lo = iv.lo, hi = iv.hi;
  int iterations = 0;
  // f is the lowest derivative in which the root is simple.
  Polynomial<T> f = p;
  for (int k = 1; k < iv.multiplicity_hint; ++k) f = derivative(f);
  auto chain_p = build_chain(p, ctx);
  auto chain_f = build_chain(f, ctx);
  auto ready = [&] {
    return value_sign(f, lo, ctx) * value_sign(f, hi, ctx) < 0 &&
           count_distinct(chain_f, lo, hi, ctx) == 1;
  };
  while (!ready()) {
    T mid = (lo + hi) / 2;
    if (hi - lo <= detail::stop_width(tol, mid)) break;
    if (++iterations > static_cast<int>(ctx.max_iter())) {
      throw ConvergenceError("refine_root: max_iter exceeded", text(lo), text(hi));
    }
    for (int k = 3; value_sign(p, mid, ctx) == 0 && k < 40; ++k) {
      mid = lo + (hi - lo) * T(k) / T(2 * k + 1);
    }
    if (value_sign(p, mid, ctx) == 0) {
      lo = hi = mid;
      break;
    }
    if (count_distinct(chain_p, lo, mid, ctx) >= 1) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  RefinedRoot<T> out;
  if (lo == hi || !(hi - lo > detail::stop_width(tol, lo))) {
    out.value = (lo + hi) / 2;
    out.width = hi - lo;
  } else {
    auto eval_f = [&](const T& x) { return f(x); };
    Bracket<T> br;
    try {
      if constexpr (is_exact<T>) {
        br = bisect(eval_f, lo, hi, tol, ctx.max_iter());
      } else {
        auto df = derivative(f);
        br = safe_newton(eval_f, [&](const T& x) { return df(x); }, lo, hi, tol, ctx.max_iter());
      }
    } catch (const ConvergenceError& e) {
      throw ConvergenceError(std::string("refine_root: ") + e.what(), e.last_lo(), e.last_hi());
    }
    out.value = br.x;
    out.width = br.hi - br.lo;
    iterations += br.iterations;
  }
  out.residual = abs(p(out.value));
  out.iterations = iterations;
  return out;
}

template <class T>
Polynomial<T> poly_gcd(const Polynomial<T>& a, const Polynomial<T>& b,
                       const PrecisionContext& ctx) {
  Polynomial<T> x = a, y = b;
  if (x.degree() < y.degree()) std::swap(x, y);
  while (!y.is_zero()) {
    auto r = divmod(x, y).second;
    if constexpr (!is_exact<T>) {
      T scale = max_abs_coeff(x);
      if (max_abs_coeff(r) <= scale * ctx.eps_sign()) r = {};
    }
    x = std::move(y);
    y = std::move(r);
  }
  if (!x.is_zero()) x /= x.leading();
  return x;
}

namespace {

template <class T>
HyperbolicityVerdict<T> hyperbolic_verdict(const Polynomial<T>& p, const PrecisionContext& ctx) {
  HyperbolicityVerdict<T> v;
  v.degree = p.degree();
  T bound = cauchy_bound(p) + 1;
  T lo = -bound;
  try {
    auto chain = build_chain(p, ctx);
    v.distinct_real_roots = count_distinct(chain, lo, bound, ctx);
    v.real_roots_with_multiplicity = count_with_multiplicity(p, lo, bound, ctx);
  } catch (const IndeterminateError& e) {
    v.status = HyperbolicStatus::Indeterminate;
    v.indeterminate_index = e.index();
    return v;
  }
  if (v.real_roots_with_multiplicity != v.degree) {
    v.status = HyperbolicStatus::NotHyperbolic;
    // A local extremum on the wrong side of zero witnesses a missing pair.
    auto dp = derivative(p);
    auto ddp = derivative(dp);
    if (dp.degree() >= 1) {
      try {
        for (auto& c : isolate_roots(dp, lo, bound, ctx)) {
          if (!c.certified || c.multiplicity_hint % 2 == 0) continue;
          auto r = refine_root(dp, c, ctx);
          int s = value_sign(p, r.value, ctx);
          int s2 = value_sign(ddp, r.value, ctx);
          if (s != 0 && s == s2) {
            v.witness = c;
            break;
          }
        }
      } catch (const Error&) {
        // Witness is optional.
      }
    }
    return v;
  }
  if (v.distinct_real_roots == v.degree) {
    v.status = HyperbolicStatus::Hyperbolic;
    return v;
  }
  v.status = HyperbolicStatus::Boundary;
  for (const auto& iv : isolate_roots(p, lo, bound, ctx)) {
    if (iv.multiplicity_hint > 1) {
      v.witness = iv;
      break;
    }
  }
  return v;
}

}  // namespace

template <class T>
HyperbolicityVerdict<T> is_hyperbolic(const Polynomial<T>& p, const PrecisionContext& ctx) {
  if (p.degree() < 1) throw DomainError("is_hyperbolic needs degree >= 1");
  auto v = hyperbolic_verdict(p, ctx);
  if constexpr (mode_of<T> == ScalarMode::Float) {
    if (v.status != HyperbolicStatus::Indeterminate) return v;
    // Retry on p(c y), c a power of two that evens out the extreme
    // coefficients; a chain that lost its leading term to scale alone recovers.
    PrecisionScope scope(ctx);
    std::size_t low = 0;
    while (p[low] == 0) ++low;
    const int span = p.degree() - static_cast<int>(low);
    if (span < 1) return v;
    Real l2 = (log2(Real(abs(p[low]))) - log2(Real(abs(p.leading())))) / span;
    long k = lround(l2);
    if (k == 0) return v;
    Real c = pow2(k);
    auto w = hyperbolic_verdict(scale_var(p, c), ctx);
    if (w.witness) {
      w.witness->lo *= c;
      w.witness->hi *= c;
    }
    return w;
  }
  return v;
}

template <class T>
std::vector<HyperbolicityVerdict<T>> is_section_hyperbolic(const Polynomial<T>& p,
                                                           const PrecisionContext& ctx) {
  for (const auto& a : p.coeffs()) {
    if (!(a > 0)) throw DomainError("is_section_hyperbolic: coefficients must be positive");
  }
  std::vector<HyperbolicityVerdict<T>> out;
  for (int i = 1; i <= p.degree(); ++i) {
    auto v = is_hyperbolic(section(p, i), ctx);
    v.section = i;
    out.push_back(std::move(v));
  }
  return out;
}

template <class T>
bool all_sections_hyperbolic(const std::vector<HyperbolicityVerdict<T>>& verdicts) {
  return std::all_of(verdicts.begin(), verdicts.end(),
                     [](const auto& v) { return v.acceptable(); });
}

#define PETROVITCH_INSTANTIATE_ROOTKIT(T)                                                        \
  template T pow2_neg<T>(unsigned);                                                            \
  template std::vector<Polynomial<T>> sturm_chain<T>(const Polynomial<T>&,                     \
                                                     const PrecisionContext&);                 \
  template int sign_variations<T>(const std::vector<Polynomial<T>>&, const T&,                 \
                                  const PrecisionContext&);                                    \
  template int sturm_count<T>(const Polynomial<T>&, const T&, const T&,                        \
                              const PrecisionContext&);                                        \
  template int count_with_multiplicity<T>(const Polynomial<T>&, const T&, const T&,            \
                                          const PrecisionContext&);                            \
  template T cauchy_bound<T>(const Polynomial<T>&);                                            \
  template std::vector<RootInterval<T>> isolate_roots<T>(const Polynomial<T>&, const T&,       \
                                                         const T&, const PrecisionContext&);   \
  template std::vector<RootInterval<T>> isolate_all_roots<T>(const Polynomial<T>&,             \
                                                             const PrecisionContext&);         \
  template RefinedRoot<T> refine_root<T>(const Polynomial<T>&, const RootInterval<T>&,         \
                                         const PrecisionContext&);                             \
  template Polynomial<T> poly_gcd<T>(const Polynomial<T>&, const Polynomial<T>&,               \
                                     const PrecisionContext&);                                 \
  template HyperbolicityVerdict<T> is_hyperbolic<T>(const Polynomial<T>&,                      \
                                                    const PrecisionContext&);                  \
  template std::vector<HyperbolicityVerdict<T>> is_section_hyperbolic<T>(                      \
      const Polynomial<T>&, const PrecisionContext&);                                          \
  template bool all_sections_hyperbolic<T>(const std::vector<HyperbolicityVerdict<T>>&);

PETROVITCH_INSTANTIATE_ROOTKIT(Rational)
PETROVITCH_INSTANTIATE_ROOTKIT(Real)

#undef PETROVITCH_INSTANTIATE_ROOTKIT

}  // namespace petrovitch
