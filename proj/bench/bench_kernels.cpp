// Serial reference vs OpenMP kernels. Both variants compute identical results;
// only wall time differs.
#include "nncalc/approx.hpp"
#include "nncalc/census.hpp"
#include "nncalc/gadgets.hpp"
#include "nncalc/verify.hpp"

#include <benchmark/benchmark.h>

using namespace nncalc;

static void BM_SegmentCosts(benchmark::State& state) {
  bool parallel = state.range(0) != 0;
  unsigned resolution = static_cast<unsigned>(state.range(1));
  PiecewisePoly f = sawtooth_pw(6);
  auto knots = knot_candidates(f, resolution);
  for (auto _ : state) benchmark::DoNotOptimize(segment_costs(f, knots, 1, 1, parallel));
  state.SetLabel(parallel ? "openmp" : "serial");
}
BENCHMARK(BM_SegmentCosts)->ArgsProduct({{0, 1}, {6, 8}})->Unit(benchmark::kMillisecond);

static void BM_Census(benchmark::State& state) {
  CensusSpec spec;
  spec.r = 1;
  spec.L = 4;
  spec.lo = 8;
  spec.hi = 24;
  spec.trials = 4;
  spec.parallel = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_census(spec));
  state.SetLabel(spec.parallel ? "openmp" : "serial");
}
BENCHMARK(BM_Census)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_VerifyCalculus(benchmark::State& state) {
  SuiteOptions opt;
  opt.trials = 20;
  opt.parallel = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_suite("calculus", opt).checks());
  state.SetLabel(opt.parallel ? "openmp" : "serial");
}
BENCHMARK(BM_VerifyCalculus)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
