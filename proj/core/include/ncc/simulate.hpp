#pragma once

#include <span>
#include <vector>

#include "ncc/rng.hpp"
#include "ncc/trial_model.hpp"

namespace ncc {

/// One permuted block: each arm of `active_arms` appears `period_blocks`
/// times, in uniformly random order.
std::vector<int> permuted_block(std::span<const int> active_arms, int period_blocks, Rng& rng);

/// `count` consecutive assignments from back-to-back permuted blocks over a
/// fixed active set. A trailing partial block is cut off.
std::vector<int> block_randomize(std::span<const int> active_arms, int period_blocks, int count,
                                 Rng& rng);

/// Allocation sequence of a whole trial (treatment of participant j at index
/// j-1). Blocks restart whenever the active-arm set changes; arms exit right
/// after their n_arm-th allocation and the trial ends with the last exit.
std::vector<int> simulate_allocation(const TrialConfig& config, Rng& rng);

/// Everything the generator knows about one simulated trial.
struct SimulationOutput {
  TrialData data;
  std::vector<double> model_values;  // response probability (binary) or mean
  std::vector<double> trend_values;  // f_k(j) on the linear-predictor scale
};

/// Simulates allocation and responses. Validates the config first.
SimulationOutput simulate_trial(const TrialConfig& config, Rng& rng);

/// Binary endpoint: logit P(y=1) = logit(p0) + log(OR_k) + f_k(j).
TrialData datasim_bin(const TrialConfig& config, Rng& rng);

/// Continuous endpoint: y = mu0 + theta_k + f_k(j) + N(0, sigma^2).
TrialData datasim_cont(const TrialConfig& config, Rng& rng);

/// True effect of `arm` on the analysis scale: log(OR) or theta.
double true_effect(const TrialConfig& config, int arm);

}  // namespace ncc
