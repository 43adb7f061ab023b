#include <benchmark/benchmark.h>

#include <vector>

#include "landbubble/exuberance.hpp"
#include "landbubble/hedonic.hpp"
#include "landbubble/synthkit.hpp"

using namespace landbubble;

namespace {

void BM_BsadfSeries(benchmark::State& state, exuberance::Method method) {
  const auto T = static_cast<std::size_t>(state.range(0));
  const auto walk = synth::gen_random_walk(T, 0.0, 1.0, 1);
  const std::size_t r0 = exuberance::rule_of_thumb_window(T);
  for (auto _ : state) {
    benchmark::DoNotOptimize(exuberance::bsadf_series(walk, r0, exuberance::AdfSpec{}, method));
  }
  state.SetComplexityN(state.range(0));
}

void BM_BsadfIncremental(benchmark::State& state) { BM_BsadfSeries(state, exuberance::Method::incremental); }
void BM_BsadfNaive(benchmark::State& state) { BM_BsadfSeries(state, exuberance::Method::naive); }

void BM_CriticalValues(benchmark::State& state) {
  const auto T = static_cast<std::size_t>(state.range(0));
  const std::vector<double> alphas{0.95};
  for (auto _ : state) {
    benchmark::DoNotOptimize(exuberance::mc_critical_values(T, exuberance::rule_of_thumb_window(T),
                                                            exuberance::AdfSpec{}, alphas, 200, 7));
  }
}

void BM_HedonicFit(benchmark::State& state) {
  const std::vector<double> deltas(84, 0.1);
  const auto panel = synth::gen_hedonic_panel(deltas, static_cast<std::size_t>(state.range(0)), 0.9,
                                              -0.1, 0.3, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hedonic::build_hpi(panel.transactions, Frequency::weekly));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(panel.transactions.size()));
}

}  // namespace

BENCHMARK(BM_BsadfIncremental)->Arg(100)->Arg(300)->Arg(600)->Complexity()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BsadfNaive)->Arg(100)->Arg(300)->Complexity()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CriticalValues)->Arg(300)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HedonicFit)->Arg(20)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
