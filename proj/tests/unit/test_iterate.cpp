#include "petrovitch/iterate.hpp"
#include "petrovitch/theta.hpp"

#include <gtest/gtest.h>

using namespace petrovitch;

TEST(Iterate, OneStepFromTheLinearSeed) {
  PrecisionContext ctx(256);
  PrecisionScope s(ctx);
  Real q = Real(1) / 4;
  RealPoly f2 = iterate_step(RealPoly{Real(1), Real(1)}, q, ctx);
  // 1 + x (1 + q x) / (1 - q)
  RealPoly expect{Real(1), 1 / (1 - q), q / (1 - q)};
  ASSERT_EQ(f2.degree(), 2);
  for (int i = 0; i <= 2; ++i) EXPECT_LE(abs(f2[i] - expect[i]), pow2(-200));
}

TEST(Iterate, DegenerateDenominatorIsReported) {
  PrecisionContext ctx(256);
  PrecisionScope s(ctx);
  // f(-q) = 0 for f = 1 + 4x at q = 1/4.
  EXPECT_THROW(iterate_step(RealPoly{Real(1), Real(4)}, Real(1) / 4, ctx), DegenerateError);
}

TEST(Iterate, FixedPointIsStationary) {
  PrecisionContext ctx(256);
  PrecisionScope s(ctx);
  Real q = Real(1) / 4;
  FixedPoint fp = fixed_point(q, 1, ctx);
  RealPoly next = iterate_step(fp.poly, q, ctx);
  for (int i = 0; i <= 100; ++i) {
    Real x = Real(-i) / 100;
    EXPECT_LE(abs(next(x) - fp.poly(x)), 4 * fp.truncation_bound + pow2(-120));
  }
  EXPECT_LE(abs(fp.poly(Real(-1))), 2 * fp.truncation_bound + pow2(-120));
  EXPECT_LE(abs(theta_eval(q, fp.u_hat, ctx).value), pow2(-120));
}

TEST(Iterate, HypothesisClass) {
  PrecisionContext ctx(256);
  PrecisionScope s(ctx);
  EXPECT_TRUE(in_hypothesis(ExactPoly{Rational(1), Rational(1)}, ctx));
  // (x + 1)(x/3 + 1): extra root at -3.
  EXPECT_TRUE(in_hypothesis(ExactPoly{Rational(1), Rational(4, 3), Rational(1, 3)}, ctx));
  // (x + 1)(2x + 1): extra root at -1/2 lies inside [-1, 0].
  EXPECT_FALSE(in_hypothesis(ExactPoly{Rational(1), Rational(3), Rational(2)}, ctx));
  // Does not vanish at -1.
  EXPECT_FALSE(in_hypothesis(ExactPoly{Rational(1), Rational(2)}, ctx));
  // (x + 1)(x^2 + 1) has complex roots.
  EXPECT_FALSE(in_hypothesis(ExactPoly{Rational(1), Rational(1), Rational(1), Rational(1)}, ctx));
}

TEST(Iterate, ConvergesAtAQuarter) {
  PrecisionContext ctx(256);
  PrecisionScope s(ctx);
  IterationTrace t = run(Real(1) / 4, RealPoly{Real(1), Real(1)}, 60, 101, ctx);
  EXPECT_EQ(t.verdict, Verdict::Converging);
  EXPECT_TRUE(t.reached_tolerance);
  EXPECT_TRUE(t.in_hypothesis);
  EXPECT_FALSE(t.halted.has_value());
  EXPECT_EQ(t.sup_dist.size(), 60u);
  EXPECT_LT(t.sup_dist.back(), Real(1e-8));
  for (const auto& c : t.checks.checks) EXPECT_TRUE(c.pass) << c.name << " " << c.index;
}

TEST(Iterate, LargeThresholdIsNeverCrossedBelowIt) {
  PrecisionContext ctx(128);
  PrecisionScope s(ctx);
  IterationOptions opts;
  opts.divergence_threshold = 0.5;
  IterationTrace t = run(Real(1) / 4, RealPoly{Real(1), Real(1)}, 5, 21, ctx, opts);
  // sup |f_j| >= f_j(0) = 1 exceeds the threshold immediately.
  EXPECT_EQ(t.verdict, Verdict::Diverging);
}

TEST(Iterate, CsvAndJsonShapes) {
  PrecisionContext ctx(128);
  IterationTrace t = run(Real(1) / 4, RealPoly{Real(1), Real(1)}, 8, 11, ctx);
  std::string csv = trace_csv(t, 10);
  EXPECT_EQ(csv.rfind("step,sup_norm,sup_dist\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 9);
  std::string snap = snapshot_csv(t, {1, 8}, 10);
  EXPECT_EQ(snap.rfind("x,f_1,f_8\n", 0), 0u);
  auto j = to_json(t, 10);
  EXPECT_EQ(j["verdict"], "Converging");
}
