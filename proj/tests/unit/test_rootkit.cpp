#include "petrovitch/rootkit.hpp"
#include "petrovitch/solve1d.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace petrovitch;

namespace {

ExactPoly from_roots(const std::vector<Rational>& roots) {
  ExactPoly p{Rational(1)};
  for (const auto& r : roots) p = p * ExactPoly{Rational(-r), Rational(1)};
  return p;
}

}  // namespace

TEST(Rootkit, SturmCountsKnownRoots) {
  PrecisionContext ctx(128);
  auto p = from_roots({Rational(-3), Rational(-1, 2), Rational(2), Rational(7, 3)});
  EXPECT_EQ(sturm_count(p, Rational(-10), Rational(10), ctx), 4);
  EXPECT_EQ(sturm_count(p, Rational(0), Rational(10), ctx), 2);
  EXPECT_EQ(sturm_count(p, Rational(-1), Rational(0), ctx), 1);
  EXPECT_EQ(sturm_count(ExactPoly{Rational(1), Rational(0), Rational(1)}, Rational(-5), Rational(5), ctx), 0);
}

TEST(Rootkit, MultiplicityTowerCountsRepeatedRoots) {
  PrecisionContext ctx(128);
  auto p = from_roots({Rational(-1), Rational(-1), Rational(-1), Rational(2), Rational(2)});
  EXPECT_EQ(sturm_count(p, Rational(-10), Rational(10), ctx), 2);
  EXPECT_EQ(count_with_multiplicity(p, Rational(-10), Rational(10), ctx), 5);
}

TEST(Rootkit, CauchyBoundEnclosesAllRoots) {
  auto p = from_roots({Rational(-9), Rational(4), Rational(1, 7)});
  Rational b = cauchy_bound(p);
  EXPECT_GT(b, 9);
}

TEST(Rootkit, HyperbolicityVerdicts) {
  PrecisionContext ctx(128);
  EXPECT_EQ(is_hyperbolic(from_roots({Rational(-1), Rational(-2), Rational(-3)}), ctx).status,
            HyperbolicStatus::Hyperbolic);
  EXPECT_EQ(is_hyperbolic(from_roots({Rational(-1), Rational(-1)}), ctx).status, HyperbolicStatus::Boundary);
  auto v = is_hyperbolic(ExactPoly{Rational(1), Rational(1), Rational(1)}, ctx);
  EXPECT_EQ(v.status, HyperbolicStatus::NotHyperbolic);
  EXPECT_EQ(v.distinct_real_roots, 0);

  RealPoly boundary{Real(1), Real(2), Real(1)};
  EXPECT_EQ(is_hyperbolic(boundary, ctx).status, HyperbolicStatus::Boundary);
}

TEST(Rootkit, SectionHyperbolicityOfTheExponentialFails) {
  // Sections of e^x beyond degree 1 have complex roots.
  PrecisionContext ctx(128);
  ExactPoly e{Rational(1), Rational(1), Rational(1, 2), Rational(1, 6)};
  auto secs = is_section_hyperbolic(e, ctx);
  ASSERT_EQ(secs.size(), 3u);
  EXPECT_TRUE(secs[0].acceptable());
  EXPECT_EQ(secs[1].status, HyperbolicStatus::NotHyperbolic);
  EXPECT_FALSE(all_sections_hyperbolic(secs));
}

TEST(Rootkit, RefinedRootsMatchTheQuadraticFormula) {
  PrecisionContext ctx(256);
  PrecisionScope s(ctx);
  // x^2 - 2: roots +-sqrt(2).
  RealPoly p{Real(-2), Real(0), Real(1)};
  auto ivs = isolate_all_roots(p, ctx);
  ASSERT_EQ(ivs.size(), 2u);
  auto r = refine_root(p, ivs[1], ctx);
  EXPECT_LE(abs(r.value - sqrt(Real(2))), ctx.eps_root() * 4);

  ExactPoly q{Rational(-2), Rational(0), Rational(1)};
  auto qivs = isolate_all_roots(q, ctx);
  ASSERT_EQ(qivs.size(), 2u);
  auto qr = refine_root(q, qivs[0], ctx);
  EXPECT_LE(abs(to_real(qr.value) + sqrt(Real(2))), ctx.eps_root() * 4);
}

TEST(Rootkit, DoubleRootRefinesThroughTheDerivative) {
  PrecisionContext ctx(256);
  PrecisionScope s(ctx);
  Real a = Real(1) / 3;
  // (x + 1/3)^2 (x - 5)
  RealPoly p = RealPoly{a, Real(1)} * RealPoly{a, Real(1)} * RealPoly{Real(-5), Real(1)};
  auto ivs = isolate_all_roots(p, ctx);
  ASSERT_EQ(ivs.size(), 2u);
  EXPECT_EQ(ivs[0].multiplicity_hint, 2);
  auto r = refine_root(p, ivs[0], ctx);
  EXPECT_LE(abs(r.value + a), pow2(-static_cast<long>(ctx.bits() / 2)));
}

TEST(Rootkit, ExactAndFloatCountsAgreeOnRandomProducts) {
  PrecisionContext ctx(256);
  PrecisionScope s(ctx);
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> num(-40, 40), den(1, 9), deg(1, 8);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Rational> roots;
    int d = deg(rng);
    for (int i = 0; i < d; ++i) roots.emplace_back(num(rng), den(rng));
    ExactPoly p = from_roots(roots);
    RealPoly rp = promote(p);
    Rational b = cauchy_bound(p) + 1;
    int exact = count_with_multiplicity(p, Rational(-b), b, ctx);
    EXPECT_EQ(exact, d);
    EXPECT_EQ(sturm_count(rp, to_real(Rational(-b)), to_real(b), ctx),
              sturm_count(p, Rational(-b), b, ctx));
  }
}

TEST(Solve1d, NewtonAndBisectionFindTheSameRoot) {
  PrecisionScope s(256);
  auto f = [](const Real& x) { return Real(x * x * x - 2); };
  auto df = [](const Real& x) { return Real(3 * x * x); };
  Real tol = pow2(-200);
  auto b = bisect(f, Real(0), Real(2), tol, 1000);
  auto n = safe_newton(f, df, Real(0), Real(2), tol, 1000);
  Real cbrt2 = pow(Real(2), Real(1) / 3);
  EXPECT_LE(abs(b.x - cbrt2), pow2(-195));
  EXPECT_LE(abs(n.x - cbrt2), pow2(-195));
  EXPECT_LT(n.iterations, b.iterations);
  EXPECT_THROW(bisect(f, Real(2), Real(3), tol, 100), BracketError);
}

TEST(Rootkit, WideCoefficientRangeStaysDecidable) {
  // Hutchinson ratios growing from 4 + 5/8; coefficients span ~80 decades.
  PrecisionContext ctx(256);
  std::vector<Rational> a{Rational(1), Rational(15, 4)};
  for (int i = 1; i < 12; ++i) a.push_back(a[i] * a[i] / (a[i - 1] * (4 + Rational(i * 5, 8))));
  ExactPoly p(a);
  EXPECT_EQ(is_hyperbolic(p, ctx).status, HyperbolicStatus::Hyperbolic);
  EXPECT_EQ(is_hyperbolic(promote(p), ctx).status, HyperbolicStatus::Hyperbolic);
}
