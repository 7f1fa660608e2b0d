#include "ncc/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "ncc/timetrends.hpp"

namespace ncc {

std::vector<int> permuted_block(std::span<const int> active_arms, int period_blocks, Rng& rng) {
  std::vector<int> block;
  block.reserve(active_arms.size() * static_cast<std::size_t>(period_blocks));
  for (int rep = 0; rep < period_blocks; ++rep)
    block.insert(block.end(), active_arms.begin(), active_arms.end());
  // Fisher-Yates
  for (std::size_t i = block.size(); i > 1; --i) {
    const auto r = static_cast<std::size_t>(rng.below(i));
    std::swap(block[i - 1], block[r]);
  }
  return block;
}

std::vector<int> block_randomize(std::span<const int> active_arms, int period_blocks, int count,
                                 Rng& rng) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(count));
  while (static_cast<int>(out.size()) < count) {
    for (int a : permuted_block(active_arms, period_blocks, rng)) {
      if (static_cast<int>(out.size()) == count) break;
      out.push_back(a);
    }
  }
  return out;
}

std::vector<int> simulate_allocation(const TrialConfig& config, Rng& rng) {
  const int k_arms = config.num_arms;
  std::vector<int> counts(static_cast<std::size_t>(k_arms) + 1, 0);

  auto active_for = [&](int j) {
    std::vector<int> set{0};
    for (int k = 1; k <= k_arms; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      if (j > config.entry_times[kk - 1] && counts[kk] < config.n_arm) set.push_back(k);
    }
    return set;
  };
  auto unfinished = [&] {
    for (int k = 1; k <= k_arms; ++k)
      if (counts[static_cast<std::size_t>(k)] < config.n_arm) return true;
    return false;
  };

  std::vector<int> seq;
  std::vector<int> block_active;
  std::vector<int> block;
  std::size_t pos = 0;
  while (unfinished()) {
    const int j = static_cast<int>(seq.size()) + 1;
    auto active = active_for(j);
    // a changed active set opens a new period; any partial block is dropped
    if (active != block_active || pos == block.size()) {
      block = permuted_block(active, config.period_blocks, rng);
      block_active = std::move(active);
      pos = 0;
    }
    const int arm = block[pos++];
    seq.push_back(arm);
    ++counts[static_cast<std::size_t>(arm)];
  }
  return seq;
}

SimulationOutput simulate_trial(const TrialConfig& config, Rng& rng) {
  config.check();
  const auto alloc = simulate_allocation(config, rng);
  const auto exits = exit_events_from(alloc, config.num_arms);
  const PeriodMap periods = derive_periods(alloc, config.entry_times, exits);
  const int n = static_cast<int>(alloc.size());
  const int s = static_cast<int>(periods.size());
  if (config.trend == TrendKind::inv_u && config.n_peak > n) {
    throw ConfigError("N_peak", "peak " + std::to_string(config.n_peak) +
                                    " exceeds the realized trial size " + std::to_string(n));
  }
  if (n < 2) throw Error("degenerate trend window");

  const bool binary = config.endpoint == Endpoint::binary;
  const double base = binary ? std::log(config.control_response / (1.0 - config.control_response))
                             : config.control_response;

  SimulationOutput out;
  out.model_values.reserve(alloc.size());
  out.trend_values.reserve(alloc.size());
  std::vector<ParticipantRecord> rows;
  rows.reserve(alloc.size());
  for (int j = 1; j <= n; ++j) {
    const int arm = alloc[static_cast<std::size_t>(j - 1)];
    const int period = periods.period_of(j);
    const TrendSpec spec{config.trend, config.lambda[static_cast<std::size_t>(arm)], config.n_peak,
                         config.n_wave};
    const double f = trend_value(spec, j, period, n, s);
    const double effect = arm == 0 ? 0.0 : true_effect(config, arm);
    const double eta = base + effect + f;
    double y;
    double model;
    if (binary) {
      model = 1.0 / (1.0 + std::exp(-eta));
      y = rng.bernoulli(model) ? 1.0 : 0.0;
    } else {
      model = eta;
      y = eta + config.sigma * rng.normal();
    }
    rows.push_back({j, y, arm, period});
    out.model_values.push_back(model);
    out.trend_values.push_back(f);
  }
  out.data = TrialData::from_simulation(std::move(rows), config.endpoint, config.entry_times);
  return out;
}

TrialData datasim_bin(const TrialConfig& config, Rng& rng) {
  if (config.endpoint != Endpoint::binary)
    throw ConfigError("endpoint", "datasim_bin requires a binary configuration");
  return simulate_trial(config, rng).data;
}

TrialData datasim_cont(const TrialConfig& config, Rng& rng) {
  if (config.endpoint != Endpoint::continuous)
    throw ConfigError("endpoint", "datasim_cont requires a continuous configuration");
  return simulate_trial(config, rng).data;
}

double true_effect(const TrialConfig& config, int arm) {
  if (arm < 1 || arm > config.num_arms) throw Error("arm " + std::to_string(arm) + " out of range");
  const double e = config.effects.at(static_cast<std::size_t>(arm - 1));
  return config.endpoint == Endpoint::binary ? std::log(e) : e;
}

}  // namespace ncc
