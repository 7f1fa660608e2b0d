#include <benchmark/benchmark.h>

#include "ncc/freq_analysis.hpp"
#include "ncc/simulate.hpp"

namespace {

ncc::TrialData make_data(ncc::Endpoint e, int n_arm) {
  ncc::TrialConfig c;
  c.endpoint = e;
  c.num_arms = 3;
  c.entry_times = {0, n_arm / 2, n_arm};
  c.effects = e == ncc::Endpoint::binary ? std::vector<double>{1.2, 1.0, 1.5}
                                         : std::vector<double>{0.2, 0.0, 0.3};
  c.lambda = {0.5, 0.5, 0.5, 0.5};
  c.n_arm = n_arm;
  if (e == ncc::Endpoint::continuous) c.control_response = 0.0;
  ncc::Rng rng(3);
  return ncc::simulate_trial(c, rng).data;
}

void BM_FixModelBinary(benchmark::State& state) {
  const auto data = make_data(ncc::Endpoint::binary, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ncc::analyze_fix(data, 3));
}
BENCHMARK(BM_FixModelBinary)->Arg(200)->Arg(2000);

void BM_FixModelContinuous(benchmark::State& state) {
  const auto data = make_data(ncc::Endpoint::continuous, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ncc::analyze_fix(data, 3));
}
BENCHMARK(BM_FixModelContinuous)->Arg(200)->Arg(2000);

void BM_PoolModelBinary(benchmark::State& state) {
  const auto data = make_data(ncc::Endpoint::binary, 200);
  for (auto _ : state) benchmark::DoNotOptimize(ncc::analyze_pool(data, 3));
}
BENCHMARK(BM_PoolModelBinary);

}  // namespace
