#include "petrovitch/extremal.hpp"
#include "petrovitch/rootkit.hpp"
#include "petrovitch/theta.hpp"

#include <benchmark/benchmark.h>

using namespace petrovitch;

static void BM_ThetaEval(benchmark::State& state) {
  PrecisionContext ctx(static_cast<unsigned>(state.range(0)));
  PrecisionScope scope(ctx);
  Real q(0.3), u(-7.5);
  for (auto _ : state) benchmark::DoNotOptimize(theta_eval(q, u, ctx));
}
BENCHMARK(BM_ThetaEval)->Arg(128)->Arg(256)->Arg(512);

static void BM_BuildSequence(benchmark::State& state) {
  PrecisionContext ctx(256);
  for (auto _ : state) benchmark::DoNotOptimize(build_sequence(static_cast<int>(state.range(0)), ctx));
}
BENCHMARK(BM_BuildSequence)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_Spectrum(benchmark::State& state) {
  PrecisionContext ctx(256);
  for (auto _ : state) benchmark::DoNotOptimize(spectrum(static_cast<int>(state.range(0)), ctx));
}
BENCHMARK(BM_Spectrum)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond)->Iterations(2);

static void BM_SturmCount(benchmark::State& state) {
  PrecisionContext ctx(256);
  const int d = static_cast<int>(state.range(0));
  ExactPoly p{Rational(1)};
  for (int i = 1; i <= d; ++i) p = p * ExactPoly{Rational(i), Rational(1)};
  Rational b = cauchy_bound(p) + 1;
  for (auto _ : state) benchmark::DoNotOptimize(sturm_count(p, Rational(-b), b, ctx));
}
BENCHMARK(BM_SturmCount)->Arg(6)->Arg(12)->Arg(20)->Unit(benchmark::kMicrosecond);

static void BM_SturmCountFloat(benchmark::State& state) {
  PrecisionContext ctx(256);
  PrecisionScope scope(ctx);
  const int d = static_cast<int>(state.range(0));
  RealPoly p{Real(1)};
  for (int i = 1; i <= d; ++i) p = p * RealPoly{Real(i), Real(1)};
  Real b = cauchy_bound(p) + 1;
  for (auto _ : state) benchmark::DoNotOptimize(sturm_count(p, Real(-b), b, ctx));
}
BENCHMARK(BM_SturmCountFloat)->Arg(6)->Arg(12)->Arg(20)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
