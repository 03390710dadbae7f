#pragma once

#include "petrovitch/errors.hpp"
#include "petrovitch/precision.hpp"

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace petrovitch {

enum class ScalarMode { Exact, Float };

template <class T>
inline constexpr ScalarMode mode_of = std::is_same_v<T, Rational> ? ScalarMode::Exact
                                                                   : ScalarMode::Float;

/// Dense univariate polynomial, coefficient i holds a_i (ascending order).
///
/// Trailing zero coefficients are trimmed on construction, so the leading
/// coefficient is nonzero unless the polynomial is identically zero.
template <class T>
class Polynomial {
 public:
  using value_type = T;

  Polynomial() = default;
  Polynomial(std::initializer_list<T> coeffs) : coeffs_(coeffs) { trim(); }
  explicit Polynomial(std::vector<T> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

  static Polynomial constant(const T& c) { return Polynomial(std::vector<T>{c}); }

  /// c * x^k
  static Polynomial monomial(const T& c, std::size_t k) {
    std::vector<T> v(k + 1, T(0));
    v[k] = c;
    return Polynomial(std::move(v));
  }

  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  std::size_t size() const noexcept { return coeffs_.size(); }

  std::span<const T> coeffs() const noexcept { return coeffs_; }
  const std::vector<T>& coeff_vector() const noexcept { return coeffs_; }

  /// a_i, or zero beyond the degree.
  T coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : T(0); }
  const T& operator[](std::size_t i) const { return coeffs_.at(i); }

  const T& leading() const {
    if (coeffs_.empty()) throw DomainError("leading coefficient of the zero polynomial");
    return coeffs_.back();
  }

  /// Horner evaluation.
  T operator()(const T& x) const {
    T acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
      acc *= x;
      acc += *it;
    }
    return acc;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.coeffs_ == b.coeffs_;
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), T(0));
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    trim();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), T(0));
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    trim();
    return *this;
  }
  Polynomial& operator*=(const T& c) {
    for (auto& a : coeffs_) a *= c;
    trim();
    return *this;
  }
  Polynomial& operator/=(const T& c) {
    if (c == 0) throw DomainError("polynomial divided by zero");
    for (auto& a : coeffs_) a /= c;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const T& c) { return a *= c; }
  friend Polynomial operator*(const T& c, Polynomial a) { return a *= c; }
  friend Polynomial operator/(Polynomial a, const T& c) { return a /= c; }
  friend Polynomial operator-(Polynomial a) { return a *= T(-1); }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<T> out(a.size() + b.size() - 1, T(0));
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return Polynomial(std::move(out));
  }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }

  std::vector<T> coeffs_;
};

using ExactPoly = Polynomial<Rational>;
using RealPoly = Polynomial<Real>;

template <class T>
T eval(const Polynomial<T>& p, const T& x) {
  return p(x);
}

template <class T>
Polynomial<T> derivative(const Polynomial<T>& p) {
  if (p.degree() < 1) return {};
  std::vector<T> d(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) d[i - 1] = p[i] * T(static_cast<long>(i));
  return Polynomial<T>(std::move(d));
}

/// P(x) = x^n p(1/x) with n = degree(p).
template <class T>
Polynomial<T> reverse(const Polynomial<T>& p) {
  if (p.is_zero()) throw DomainError("reverse of the zero polynomial");
  std::vector<T> v(p.coeffs().rbegin(), p.coeffs().rend());
  return Polynomial<T>(std::move(v));
}

/// p(c x).
template <class T>
Polynomial<T> scale_var(const Polynomial<T>& p, const T& c) {
  if (c == 0) throw DomainError("scale_var: scale factor must be nonzero");
  std::vector<T> v(p.coeffs().begin(), p.coeffs().end());
  T power(1);
  for (auto& a : v) {
    a *= power;
    power *= c;
  }
  return Polynomial<T>(std::move(v));
}

/// x^k p(x).
template <class T>
Polynomial<T> shift_up(const Polynomial<T>& p, std::size_t k) {
  if (p.is_zero()) return {};
  std::vector<T> v(k, T(0));
  v.insert(v.end(), p.coeffs().begin(), p.coeffs().end());
  return Polynomial<T>(std::move(v));
}

/// Terms of degree <= i.
template <class T>
Polynomial<T> section(const Polynomial<T>& p, int i) {
  if (i < 0) return {};
  auto n = std::min<std::size_t>(p.size(), static_cast<std::size_t>(i) + 1);
  return Polynomial<T>(std::vector<T>(p.coeffs().begin(), p.coeffs().begin() + n));
}

/// a_i^2 / (a_{i-1} a_{i+1}) for i = 1 .. degree-1.
template <class T>
std::vector<T> consecutive_ratios(const Polynomial<T>& p) {
  for (const auto& a : p.coeffs()) {
    if (!(a > 0)) throw DomainError("consecutive_ratios: coefficients must be strictly positive");
  }
  std::vector<T> out;
  for (int i = 1; i < p.degree(); ++i) {
    out.push_back(p[i] * p[i] / (p[i - 1] * p[i + 1]));
  }
  return out;
}

/// Quotient and remainder of a by b (b nonzero).
template <class T>
std::pair<Polynomial<T>, Polynomial<T>> divmod(const Polynomial<T>& a, const Polynomial<T>& b) {
  if (b.is_zero()) throw DomainError("polynomial division by zero");
  if (a.degree() < b.degree()) return {Polynomial<T>{}, a};
  std::vector<T> r(a.coeffs().begin(), a.coeffs().end());
  std::vector<T> q(a.size() - b.size() + 1, T(0));
  const T& lead = b.leading();
  for (int k = a.degree() - b.degree(); k >= 0; --k) {
    T c = r[k + b.degree()] / lead;
    q[k] = c;
    for (int j = 0; j <= b.degree(); ++j) r[k + j] -= c * b[j];
    r[k + b.degree()] = T(0);
  }
  return {Polynomial<T>(std::move(q)), Polynomial<T>(std::move(r))};
}

inline RealPoly promote(const ExactPoly& p) {
  std::vector<Real> v;
  v.reserve(p.size());
  for (const auto& a : p.coeffs()) v.push_back(to_real(a));
  return RealPoly(std::move(v));
}

inline const RealPoly& promote(const RealPoly& p) { return p; }

/// Human-readable ascending form, e.g. "1 + x + 1/4*x^2".
std::string to_string(const ExactPoly& p);
std::string to_string(const RealPoly& p, int digits = 20);

}  // namespace petrovitch
