#include "petrovitch/precision.hpp"

#include "petrovitch/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace petrovitch {

namespace {

unsigned digits10_for_bits(unsigned bits) {
  // Boost converts digits10 back to bits as d*1000/301 + 1 or 2, so this
  // guarantees at least `bits` of mantissa.
  return static_cast<unsigned>(std::ceil(bits * 0.30103)) + 1;
}

void check_exponent(unsigned bits, unsigned e, const char* name) {
  if (4 * e <= bits) {
    throw DomainError(std::string("PrecisionContext: ") + name + " must be below 2^-(bits/4)");
  }
}

}  // namespace

PrecisionContext::PrecisionContext(unsigned bits, unsigned max_iter)
    : PrecisionContext(bits, (3 * bits) / 4, bits / 2, bits / 2, max_iter) {}

PrecisionContext::PrecisionContext(unsigned bits, unsigned root_exp, unsigned residual_exp,
                                   unsigned sign_exp, unsigned max_iter)
    : bits_(bits),
      root_exp_(root_exp),
      residual_exp_(residual_exp),
      sign_exp_(sign_exp),
      max_iter_(max_iter) {
  if (bits < kMinBits) {
    throw DomainError("PrecisionContext: bits must be >= 64");
  }
  if (max_iter == 0) {
    throw DomainError("PrecisionContext: max_iter must be positive");
  }
  check_exponent(bits, root_exp, "eps_root");
  check_exponent(bits, residual_exp, "eps_residual");
  check_exponent(bits, sign_exp, "eps_sign");
}

Real PrecisionContext::eps_root() const { return pow2(-static_cast<long>(root_exp_)); }
Real PrecisionContext::eps_residual() const { return pow2(-static_cast<long>(residual_exp_)); }
Real PrecisionContext::eps_sign() const { return pow2(-static_cast<long>(sign_exp_)); }

int PrecisionContext::decimal_digits() const noexcept {
  return static_cast<int>(std::floor(bits_ * 0.30103));
}

PrecisionContext PrecisionContext::with_bits(unsigned bits) const {
  return PrecisionContext(bits, max_iter_);
}

PrecisionScope::PrecisionScope(unsigned bits) : saved_digits10_(Real::default_precision()) {
  Real::default_precision(digits10_for_bits(bits));
}

PrecisionScope::~PrecisionScope() { Real::default_precision(saved_digits10_); }

Real pow2(long e) {
  Real one = 1;
  return ldexp(one, static_cast<int>(e));
}

Real rebase(const Real& x) {
  Real r(0);
  r += x;
  return r;
}

Real parse_real(const std::string& text) {
  try {
    return Real(text);
  } catch (const std::exception&) {
    throw DomainError("not a real number: '" + text + "'");
  }
}

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw DomainError("empty rational literal");
  if (text.find('/') != std::string::npos) {
    auto slash = text.find('/');
    try {
      Rational n = parse_rational(text.substr(0, slash));
      Rational d = parse_rational(text.substr(slash + 1));
      if (d == 0) throw DomainError("zero denominator in '" + text + "'");
      return n / d;
    } catch (const DomainError&) {
      throw DomainError("not a rational number: '" + text + "'");
    }
  }
  // Finite decimal: split mantissa and exponent, build num / 10^k exactly.
  std::string s = text;
  long exp10 = 0;
  if (auto e = s.find_first_of("eE"); e != std::string::npos) {
    try {
      exp10 = std::stol(s.substr(e + 1));
    } catch (const std::exception&) {
      throw DomainError("bad exponent in '" + text + "'");
    }
    s = s.substr(0, e);
  }
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    s = s.substr(1);
  }
  std::string digits = s;
  if (auto dot = s.find('.'); dot != std::string::npos) {
    exp10 -= static_cast<long>(s.size() - dot - 1);
    digits.erase(dot, 1);
  }
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(),
                                     [](char c) { return c >= '0' && c <= '9'; })) {
    throw DomainError("not a rational number: '" + text + "'");
  }
  // mpz parsing treats a leading 0 as an octal prefix.
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
  boost::multiprecision::mpz_int num(digits);
  boost::multiprecision::mpz_int scale = 1;
  for (long i = 0; i < std::labs(exp10); ++i) scale *= 10;
  Rational r = exp10 >= 0 ? Rational(num * scale) : Rational(num, scale);
  return negative ? Rational(-r) : r;
}

std::string to_decimal(const Real& x, int digits) {
  if (digits <= 0) {
    digits = static_cast<int>(std::floor(x.precision() * 1.0)) + 1;
  }
  return x.str(digits, std::ios_base::scientific);
}

std::string to_fraction(const Rational& x) {
  if (denominator(x) == 1) return numerator(x).str();
  return numerator(x).str() + "/" + denominator(x).str();
}

std::string truncate_decimal(const Real& x, int places) {
  Real scale = pow(Real(10), places);
  Real scaled = trunc(x * scale);
  boost::multiprecision::mpz_int n(scaled.convert_to<boost::multiprecision::mpz_int>());
  bool negative = n < 0;
  if (negative) n = -n;
  std::string s = n.str();
  if (static_cast<int>(s.size()) <= places) s.insert(0, places + 1 - s.size(), '0');
  s.insert(s.size() - places, ".");
  if (negative) s.insert(0, "-");
  return s;
}

Real to_real(const Rational& x) {
  Real n(numerator(x));
  Real d(denominator(x));
  return n / d;
}

}  // namespace petrovitch
