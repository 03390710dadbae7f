#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <string>

namespace petrovitch {

using Rational = boost::multiprecision::mpq_rational;
using Real = boost::multiprecision::mpfr_float;

/// Working precision plus the tolerances every numeric decision reads.
///
/// All three tolerances are powers of two chosen from `bits` once, at
/// construction:
///   eps_root      = 2^-(3*bits/4)  stopping width for root refinement (relative
///                                  to max(1, |x|))
///   eps_residual  = 2^-(bits/2)    acceptable |value| at a claimed zero
///   eps_sign      = 2^-(bits/2)    below this a computed sign is not trusted
/// Each lies in (0, 2^-(bits/4)). Powers of two are exact at any MPFR precision.
class PrecisionContext {
 public:
  static constexpr unsigned kMinBits = 64;
  static constexpr unsigned kDefaultBits = 256;

  explicit PrecisionContext(unsigned bits = kDefaultBits, unsigned max_iter = 20000);

  /// Context with explicit tolerance exponents (eps = 2^-exp). Throws DomainError
  /// unless every exponent exceeds bits/4.
  PrecisionContext(unsigned bits, unsigned root_exp, unsigned residual_exp, unsigned sign_exp,
                   unsigned max_iter);

  unsigned bits() const noexcept { return bits_; }
  unsigned max_iter() const noexcept { return max_iter_; }
  unsigned root_exponent() const noexcept { return root_exp_; }
  unsigned residual_exponent() const noexcept { return residual_exp_; }
  unsigned sign_exponent() const noexcept { return sign_exp_; }

  Real eps_root() const;
  Real eps_residual() const;
  Real eps_sign() const;

  /// Decimal digits that are meaningful at this precision.
  int decimal_digits() const noexcept;

  PrecisionContext with_bits(unsigned bits) const;

 private:
  unsigned bits_;
  unsigned root_exp_;
  unsigned residual_exp_;
  unsigned sign_exp_;
  unsigned max_iter_;
};

/// Sets the MPFR default precision for every Real constructed while the scope
/// is alive and restores the previous value on exit.
///
/// Boost 1.74 keeps this default process-wide, so scopes with different
/// precisions must not overlap across threads.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits);
  explicit PrecisionScope(const PrecisionContext& ctx) : PrecisionScope(ctx.bits()) {}
  ~PrecisionScope();

  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_digits10_;
};

/// 2^e as a Real at the current default precision.
Real pow2(long e);

/// Copy of x carried at the current default precision (a plain copy keeps the
/// precision of its source).
Real rebase(const Real& x);

/// Parses a decimal literal ("0.25", "-7.5e3") at the current precision.
Real parse_real(const std::string& text);

/// Parses "p/q", an integer, or a finite decimal literal exactly.
Rational parse_rational(const std::string& text);

/// Scientific-notation decimal string with `digits` significant digits.
/// digits <= 0 uses every digit the value's precision supports.
std::string to_decimal(const Real& x, int digits = 0);

/// "p/q" (or "p" for integers).
std::string to_fraction(const Rational& x);

/// Fixed-point rendering truncated (not rounded) to `places` decimals.
std::string truncate_decimal(const Real& x, int places);

Real to_real(const Rational& x);

}  // namespace petrovitch
