#include <benchmark/benchmark.h>

#include <sstream>

#include "ncc/simulate.hpp"
#include "ncc/trial_io.hpp"

namespace {

ncc::TrialConfig staggered(int n_arm) {
  ncc::TrialConfig c;
  c.num_arms = 3;
  c.entry_times = {0, n_arm / 2, n_arm};
  c.effects = {1.2, 1.0, 1.5};
  c.lambda = {0.5, 0.5, 0.5, 0.5};
  c.n_arm = n_arm;
  return c;
}

void BM_SimulateBinary(benchmark::State& state) {
  const auto cfg = staggered(static_cast<int>(state.range(0)));
  ncc::Rng rng(1);
  std::size_t n = 0;
  for (auto _ : state) {
    auto data = ncc::datasim_bin(cfg, rng);
    n = data.size();
    benchmark::DoNotOptimize(data);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_SimulateBinary)->Arg(100)->Arg(1000)->Arg(10000);

void BM_CsvRoundTrip(benchmark::State& state) {
  ncc::Rng rng(2);
  const auto data = ncc::datasim_bin(staggered(static_cast<int>(state.range(0))), rng);
  for (auto _ : state) {
    std::istringstream in(ncc::trial_to_csv(data));
    benchmark::DoNotOptimize(ncc::read_trial_csv(in));
  }
}
BENCHMARK(BM_CsvRoundTrip)->Arg(1000);

}  // namespace
