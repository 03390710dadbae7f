#pragma once

#include "petrovitch/poly.hpp"

#include <optional>
#include <string>
#include <vector>

namespace petrovitch {

template <class T>
struct RootInterval {
  T lo;
  T hi;
  int multiplicity_hint = 1;
  /// Exactly one distinct real root lies in [lo, hi].
  bool certified = false;
};

enum class HyperbolicStatus { Hyperbolic, NotHyperbolic, Boundary, Indeterminate };

std::string to_string(HyperbolicStatus s);

template <class T>
struct HyperbolicityVerdict {
  HyperbolicStatus status = HyperbolicStatus::Indeterminate;
  int degree = 0;
  int distinct_real_roots = 0;
  int real_roots_with_multiplicity = 0;
  /// Multiple-root location for Boundary; a critical point where p does not
  /// reach zero for NotHyperbolic, when one exists.
  std::optional<RootInterval<T>> witness;
  /// Chain index whose leading coefficient fell below eps_sign.
  std::optional<int> indeterminate_index;
  /// Section degree when produced by is_section_hyperbolic, else 0.
  int section = 0;

  bool acceptable() const {
    return status == HyperbolicStatus::Hyperbolic || status == HyperbolicStatus::Boundary;
  }
};

template <class T>
struct RefinedRoot {
  T value;
  /// |p(value)|.
  T residual;
  /// Width of the final bracket around value.
  T width;
  int iterations = 0;
};

/// Sturm chain p, p', -rem(p, p'), ... ending at gcd(p, p').
///
/// Float mode scales each element to unit max-abs coefficient. A remainder
/// whose coefficients all fall below eps_sign ends the chain (numerical gcd);
/// a remainder whose leading coefficient alone does throws IndeterminateError
/// carrying the chain index.
template <class T>
std::vector<Polynomial<T>> sturm_chain(const Polynomial<T>& p, const PrecisionContext& ctx);

/// Sign variations of the chain at x, ignoring zeros.
template <class T>
int sign_variations(const std::vector<Polynomial<T>>& chain, const T& x,
                    const PrecisionContext& ctx);

/// Number of distinct real roots in (lo, hi). Endpoints where p vanishes are
/// moved inward by eps_root.
template <class T>
int sturm_count(const Polynomial<T>& p, const T& lo, const T& hi, const PrecisionContext& ctx);

/// Real roots in (lo, hi) counted with multiplicity, via the square-free tower
/// p, gcd(p, p'), gcd of that with its derivative, ...
template <class T>
int count_with_multiplicity(const Polynomial<T>& p, const T& lo, const T& hi,
                            const PrecisionContext& ctx);

/// 1 + max|a_i| / |a_n|; every root lies strictly inside (-bound, bound).
template <class T>
T cauchy_bound(const Polynomial<T>& p);

/// Disjoint intervals, one per distinct real root in (lo, hi), increasing.
template <class T>
std::vector<RootInterval<T>> isolate_roots(const Polynomial<T>& p, const T& lo, const T& hi,
                                           const PrecisionContext& ctx);

/// All distinct real roots, isolated inside the Cauchy bound.
template <class T>
std::vector<RootInterval<T>> isolate_all_roots(const Polynomial<T>& p, const PrecisionContext& ctx);

/// Shrinks a certified interval to width <= eps_root * max(1, |x|): bisection,
/// then safeguarded Newton (Float) on the (m-1)-th derivative for a root of
/// multiplicity hint m. Exact mode bisects only.
template <class T>
RefinedRoot<T> refine_root(const Polynomial<T>& p, const RootInterval<T>& iv,
                           const PrecisionContext& ctx);

template <class T>
HyperbolicityVerdict<T> is_hyperbolic(const Polynomial<T>& p, const PrecisionContext& ctx);

/// Verdicts for the sections of degree 1 .. degree(p); requires positive coefficients.
template <class T>
std::vector<HyperbolicityVerdict<T>> is_section_hyperbolic(const Polynomial<T>& p,
                                                           const PrecisionContext& ctx);

/// True iff no verdict is NotHyperbolic or Indeterminate.
template <class T>
bool all_sections_hyperbolic(const std::vector<HyperbolicityVerdict<T>>& verdicts);

template <class T>
Polynomial<T> poly_gcd(const Polynomial<T>& a, const Polynomial<T>& b, const PrecisionContext& ctx);

/// 2^-exp as a value of T (exact dyadic rational in Exact mode).
template <class T>
T pow2_neg(unsigned exp);

}  // namespace petrovitch
