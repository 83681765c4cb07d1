// Serial reference vs OpenMP path for the data-parallel kernels.
// Arg 0 selects Exec::serial, 1 selects Exec::parallel.

#include <benchmark/benchmark.h>

#include "optseq/criteria.hpp"
#include "optseq/fundidx.hpp"
#include "optseq/optimal.hpp"

using namespace optseq;

namespace {

Exec exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Exec::serial : Exec::parallel;
}

void BM_Dilation(benchmark::State& state) {
  const auto space = SpaceDescriptor::lorentz(1, WeightGenerator::inv_log());
  DilationOptions opts;
  opts.exec = exec_of(state);
  opts.tail_log2 = 100;
  for (auto _ : state) benchmark::DoNotOptimize(dilation_functions(space, 1024, 1 << 16, opts));
}

void BM_FundamentalIndices(benchmark::State& state) {
  const auto space = SpaceDescriptor::lorentz(2, WeightGenerator::inv_log());
  IndexOptions opts;
  opts.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(fundamental_indices(space, opts));
}

void BM_OrliczIndices(benchmark::State& state) {
  const auto n = OrliczGenerator::power_log(2, 1);
  OrliczIndexOptions opts;
  opts.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(orlicz_indices(n, opts));
}

void BM_OrliczCriterionGrid(benchmark::State& state) {
  const auto n = OrliczGenerator::power_log(2, -1);
  CriteriaConfig cfg;
  cfg.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(orlicz_submultiplicative_constant(n, cfg));
}

void BM_UpperSearch(benchmark::State& state) {
  const auto space = parse_space("orlicz:powerlog(p=2,a=1)");
  const FiniteSeq a({1.0, 0.7, 0.4, 0.4, 0.1});
  SearchConfig cfg;
  cfg.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(upper_norm_estimate(space, a, cfg));
}

void BM_LowerSearch(benchmark::State& state) {
  const auto space = parse_space("lpq:p=2,q=1");
  const FiniteSeq a({1.0, 0.8, 0.5, 0.2});
  SearchConfig cfg;
  cfg.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(lower_norm_estimate(space, a, cfg));
}

}  // namespace

BENCHMARK(BM_Dilation)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FundamentalIndices)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OrliczIndices)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OrliczCriterionGrid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_UpperSearch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LowerSearch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
