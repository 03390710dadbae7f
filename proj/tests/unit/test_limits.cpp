#include "petrovitch/errors.hpp"
#include "petrovitch/limits.hpp"

#include <gtest/gtest.h>

using namespace petrovitch;

namespace {

Real direct_gap(const Real& l, int terms) {
  Real s = 1 / l - 2 / (1 - l);
  for (int j = 1; j <= terms; ++j) s -= pow(l, j) / (1 - pow(l, j + 1));
  return s;
}

}  // namespace

TEST(Limits, GapMatchesALongDirectSum) {
  PrecisionContext ctx(256);
  PrecisionScope s(ctx);
  for (double l : {0.1, 0.25, 0.3, 0.5}) {
    GapValue g = master_gap(Real(l), ctx);
    Real oracle = direct_gap(Real(l), 4 * g.terms + 20);
    EXPECT_LE(abs(g.value - oracle), g.tail_bound + pow2(-200)) << l;
  }
  EXPECT_THROW(master_gap(Real(0), ctx), DomainError);
  EXPECT_THROW(master_gap(Real(1), ctx), DomainError);
}

TEST(Limits, GapDerivativeMatchesDifferences) {
  PrecisionContext ctx(256);
  PrecisionScope s(ctx);
  Real l(0.3), h = pow2(-60);
  Real fd = (master_gap(l + h, ctx).value - master_gap(l - h, ctx).value) / (2 * h);
  EXPECT_LE(abs(master_gap_derivative(l, ctx) - fd), pow2(-100));
}

TEST(Limits, MasterRootIsAZeroOfTheGap) {
  PrecisionContext ctx(256);
  PrecisionScope s(ctx);
  MasterSolution m = solve_master(ctx);
  EXPECT_GT(m.lambda, Real(0.28));
  EXPECT_LT(m.lambda, Real(1) / 3);
  EXPECT_LE(abs(direct_gap(m.lambda, 600)), pow2(-100));
  EXPECT_GT(m.bisection_steps, 0);
}

TEST(Limits, LowerBoundMatchesTheClosedForm) {
  PrecisionContext ctx(256);
  PrecisionScope s(ctx);
  LowerBound lb = lower_bound_l0(ctx);
  Real closed = (59 - sqrt(Real(2777))) / 22;
  EXPECT_LE(abs(lb.l0 - closed), pow2(-150));
  EXPECT_EQ(truncate_decimal(lb.l0, 10), "0.2864887043");
  for (const auto& c : lb.checks.checks) EXPECT_TRUE(c.pass) << c.name;
}

TEST(Limits, NestShrinksAroundTheMasterRoot) {
  PrecisionContext ctx(256);
  PrecisionScope s(ctx);
  IntervalNest nest = interval_nest(20, ctx);
  MasterSolution m = solve_master(ctx);
  for (std::size_t i = 1; i < nest.widths.size(); ++i) {
    EXPECT_LE(nest.widths[i], nest.widths[i - 1] / 2);
    EXPECT_GE(nest.l[i], nest.l[i - 1] - ctx.eps_root());
    EXPECT_LE(nest.r[i], nest.r[i - 1] + ctx.eps_root());
  }
  EXPECT_LE(nest.l.back(), m.lambda + ctx.eps_root());
  EXPECT_GE(nest.r.back(), m.lambda - ctx.eps_root());
  for (const auto& c : nest.checks.checks) EXPECT_TRUE(c.pass) << c.name;
}

TEST(Limits, NestPhiTailIsGeometric) {
  PrecisionContext ctx(256);
  PrecisionScope s(ctx);
  Real r(0.3), x(-0.3);
  Real direct = 0;
  for (int j = 1; j <= 600; ++j) direct += 1 / (x + pow(r, -j));
  EXPECT_LE(abs(nest_phi(r, x, ctx) - direct), pow2(-120));
}

TEST(Limits, ReportHasDecimalStrings) {
  PrecisionContext ctx(128);
  auto j = limits_report(solve_master(ctx), interval_nest(5, ctx), lower_bound_l0(ctx), 20);
  EXPECT_TRUE(j["lambda"].is_string());
  EXPECT_TRUE(j["nest"]["l"].is_array());
  EXPECT_TRUE(j["l0"].is_string());
}
