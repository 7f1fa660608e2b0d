#include <benchmark/benchmark.h>

#include "ncc/map_prior.hpp"
#include "ncc/simulate.hpp"
#include "ncc/time_machine.hpp"

namespace {

const ncc::TrialData& data() {
  static const ncc::TrialData d = [] {
    ncc::TrialConfig c;
    c.num_arms = 2;
    c.entry_times = {0, 150};
    c.effects = {1.0, 1.6};
    c.lambda = {0.3, 0.3, 0.3};
    c.n_arm = 250;
    ncc::Rng rng(4);
    return ncc::datasim_bin(c, rng);
  }();
  return d;
}

const ncc::mcmc::ChainSettings kChain{1000, 2000};

void BM_MapPrior(benchmark::State& state) {
  ncc::MapSettings s;
  s.chain = kChain;
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(ncc::analyze_map(data(), 2, 0.025, s, ++seed));
}
BENCHMARK(BM_MapPrior)->Unit(benchmark::kMillisecond);

void BM_TimeMachine(benchmark::State& state) {
  ncc::TimeMachineSettings s;
  s.chain = kChain;
  s.bucket_size = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(ncc::analyze_timemachine(data(), 2, 0.025, s, ++seed));
}
BENCHMARK(BM_TimeMachine)->Arg(25)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_PolyaGamma(benchmark::State& state) {
  ncc::Rng rng(5);
  for (auto _ : state) benchmark::DoNotOptimize(ncc::mcmc::polya_gamma(static_cast<int>(state.range(0)), 1.3, rng));
}
BENCHMARK(BM_PolyaGamma)->Arg(1)->Arg(50);

}  // namespace
