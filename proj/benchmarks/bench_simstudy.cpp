#include <benchmark/benchmark.h>

#include "ncc/simstudy.hpp"

namespace {

void BM_FrequentistStudy(benchmark::State& state) {
  ncc::Scenario s;
  s.id = "bench";
  s.config.num_arms = 2;
  s.config.entry_times = {0, 100};
  s.config.effects = {1.0, 1.0};
  s.config.lambda = {0.5, 0.5, 0.5};
  s.config.n_arm = 200;
  s.arms = {2};
  s.methods = {ncc::Method::fixmodel, ncc::Method::sepmodel, ncc::Method::poolmodel};
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ncc::sim_study_par({s}, 100, 1, workers));
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_FrequentistStudy)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace
