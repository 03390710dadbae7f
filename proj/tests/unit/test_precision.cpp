#include "petrovitch/errors.hpp"
#include "petrovitch/poly_io.hpp"
#include "petrovitch/precision.hpp"

#include <gtest/gtest.h>

using namespace petrovitch;

TEST(Precision, TolerancesArePowersOfTwoInsideTheAllowedBand) {
  for (unsigned bits : {64u, 128u, 256u, 512u}) {
    PrecisionContext ctx(bits);
    PrecisionScope scope(ctx);
    EXPECT_EQ(ctx.eps_root(), pow2(-static_cast<long>(3 * bits / 4)));
    EXPECT_EQ(ctx.eps_residual(), pow2(-static_cast<long>(bits / 2)));
    EXPECT_EQ(ctx.eps_sign(), ctx.eps_residual());
    Real ceiling = pow2(-static_cast<long>(bits / 4));
    EXPECT_LT(ctx.eps_root(), ceiling);
    EXPECT_LT(ctx.eps_residual(), ceiling);
    EXPECT_GT(ctx.eps_root(), 0);
  }
}

TEST(Precision, RejectsTooFewBitsAndLooseTolerances) {
  EXPECT_THROW(PrecisionContext(32), DomainError);
  EXPECT_THROW(PrecisionContext(128, 96, 32, 64, 100), DomainError);
  EXPECT_NO_THROW(PrecisionContext(128, 96, 64, 64, 100));
}

TEST(Precision, ScopeRestoresThePreviousDefault) {
  PrecisionScope outer(128);
  auto before = Real::default_precision();
  {
    PrecisionScope inner(512);
    EXPECT_GT(Real::default_precision(), before);
  }
  EXPECT_EQ(Real::default_precision(), before);
}

TEST(Precision, RebaseLiftsACopyToTheCurrentPrecision) {
  Real low;
  {
    PrecisionScope s(64);
    low = Real(1) / 3;
  }
  PrecisionScope s(512);
  Real copy = low;
  Real lifted = rebase(low);
  EXPECT_LT(copy.precision(), lifted.precision());
}

TEST(Precision, RationalParsingIsExact) {
  EXPECT_EQ(parse_rational("27/8"), Rational(27, 8));
  EXPECT_EQ(parse_rational("-0.125"), Rational(-1, 8));
  EXPECT_EQ(parse_rational("1e-3"), Rational(1, 1000));
  EXPECT_EQ(parse_rational("12"), Rational(12));
  EXPECT_THROW(parse_rational("1/0"), DomainError);
  EXPECT_THROW(parse_rational("abc"), DomainError);
  EXPECT_EQ(to_fraction(Rational(1, 54)), "1/54");
  EXPECT_EQ(to_fraction(Rational(-3)), "-3");
}

TEST(Precision, TruncationDiffersFromRounding) {
  PrecisionScope s(256);
  Real x = parse_real("3.23363666526511");
  EXPECT_EQ(truncate_decimal(x, 10), "3.2336366652");
  EXPECT_EQ(truncate_decimal(Real(-parse_real("0.30924933869")), 6), "-0.309249");
  EXPECT_EQ(truncate_decimal(Real(0), 3), "0.000");
}

TEST(Precision, DecimalRoundTripAtFullPrecision) {
  PrecisionScope s(256);
  Real x = sqrt(Real(33));
  Real back = parse_real(to_decimal(x));
  EXPECT_LE(abs(back - x), pow2(-250));
}

TEST(PolyIo, ExactAndFloatRoundTrip) {
  PrecisionScope s(256);
  ExactPoly p{Rational(1), Rational(1), Rational(1, 4), Rational(1, 54)};
  auto back = exact_poly_from_json(to_json(p));
  EXPECT_EQ(back, p);

  RealPoly r{Real(1), sqrt(Real(2)), Real(1) / 3};
  AnyPoly any = poly_from_json(to_json(r, 256));
  ASSERT_TRUE(std::holds_alternative<RealPoly>(any));
  const auto& rr = std::get<RealPoly>(any);
  for (int i = 0; i <= 2; ++i) EXPECT_LE(abs(rr[i] - r[i]), pow2(-250));

  EXPECT_THROW(exact_poly_from_json(to_json(r, 256)), DomainError);
}
