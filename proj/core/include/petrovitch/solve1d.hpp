#pragma once

#include "petrovitch/errors.hpp"
#include "petrovitch/precision.hpp"

#include <algorithm>

namespace petrovitch {

template <class T>
struct Bracket {
  T x;
  T lo;
  T hi;
  int iterations = 0;
};

namespace detail {

template <class T>
T stop_width(const T& tol, const T& x) {
  T ax = abs(x);
  return ax > 1 ? T(tol * ax) : tol;
}

template <class T>
int sgn(const T& v) {
  return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

}  // namespace detail

/// Bisection on a sign change of f over [lo, hi] until the bracket is no wider
/// than tol * max(1, |x|).
template <class T, class F>
Bracket<T> bisect(F&& f, T lo, T hi, const T& tol, unsigned max_iter) {
  if (hi < lo) std::swap(lo, hi);
  int slo = detail::sgn(T(f(lo)));
  int shi = detail::sgn(T(f(hi)));
  if (slo == 0) return {lo, lo, lo, 0};
  if (shi == 0) return {hi, hi, hi, 0};
  if (slo == shi) throw BracketError("bisect: no sign change on the bracket");
  for (unsigned it = 1; it <= max_iter; ++it) {
    T mid = (lo + hi) / 2;
    if (hi - lo <= detail::stop_width(tol, mid)) return {mid, lo, hi, static_cast<int>(it)};
    int s = detail::sgn(T(f(mid)));
    if (s == 0) return {mid, mid, mid, static_cast<int>(it)};
    if (s == slo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw ConvergenceError("bisect: max_iter exceeded", lo.str(), hi.str());
}

/// Newton's method kept inside a sign-change bracket; falls back to bisection
/// whenever the Newton step leaves the bracket or stalls.
template <class T, class F, class DF>
Bracket<T> safe_newton(F&& f, DF&& df, T lo, T hi, const T& tol, unsigned max_iter) {
  if (hi < lo) std::swap(lo, hi);
  T flo = f(lo);
  T fhi = f(hi);
  if (flo == 0) return {lo, lo, lo, 0};
  if (fhi == 0) return {hi, hi, hi, 0};
  if (detail::sgn(flo) == detail::sgn(fhi)) {
    throw BracketError("safe_newton: no sign change on the bracket");
  }
  // xl carries f < 0, xh carries f > 0.
  T xl = flo < 0 ? lo : hi;
  T xh = flo < 0 ? hi : lo;
  T x = (lo + hi) / 2;
  T dxold = abs(hi - lo);
  T dx = dxold;
  T fx = f(x);
  T dfx = df(x);
  for (unsigned it = 1; it <= max_iter; ++it) {
    if (fx == 0) return {x, x, x, static_cast<int>(it)};
    bool newton_leaves = ((x - xh) * dfx - fx) * ((x - xl) * dfx - fx) > 0;
    bool too_slow = abs(T(2 * fx)) > abs(T(dxold * dfx));
    if (newton_leaves || too_slow || dfx == 0) {
      dxold = dx;
      dx = (xh - xl) / 2;
      x = xl + dx;
    } else {
      dxold = dx;
      dx = fx / dfx;
      x -= dx;
    }
    if (abs(dx) <= detail::stop_width(tol, x)) {
      // Certify a bracket of a few step lengths around x when possible.
      T w = abs(dx) * 2;
      T fa = f(T(x - w));
      T fb = f(T(x + w));
      if (detail::sgn(fa) * detail::sgn(fb) <= 0) {
        return {x, T(x - w), T(x + w), static_cast<int>(it)};
      }
      T a = std::min(xl, xh);
      T b = std::max(xl, xh);
      return {x, a, b, static_cast<int>(it)};
    }
    fx = f(x);
    dfx = df(x);
    if (fx < 0) {
      xl = x;
    } else {
      xh = x;
    }
  }
  T a = std::min(xl, xh);
  T b = std::max(xl, xh);
  throw ConvergenceError("safe_newton: max_iter exceeded", a.str(), b.str());
}

}  // namespace petrovitch
