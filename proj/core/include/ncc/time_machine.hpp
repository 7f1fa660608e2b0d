#pragma once

#include <cstdint>
#include <vector>

#include "ncc/mcmc.hpp"
#include "ncc/trial_model.hpp"

namespace ncc {

struct TimeMachineSettings {
  double prec_theta = 0.001;
  double prec_eta = 0.001;
  double tau_a = 0.1;
  double tau_b = 0.01;
  int bucket_size = 25;
  double prec_a = 0.001;  // continuous only: Gamma prior on response precision
  double prec_b = 0.001;
  mcmc::ChainSettings chain{};

  void check() const;
};

/// Bucket of each participant 1..n (index j-1), counted backward from the
/// most recent participant: the last `bucket_size` form bucket 1, the oldest
/// bucket may be partial.
std::vector<int> bucketize(int n, int bucket_size);

inline int bucket_count(int n, int bucket_size) { return (n + bucket_size - 1) / bucket_size; }

struct BucketEffect {
  int bucket = 0;
  double mean = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

struct TimeMachineAnalysis {
  AnalysisResult result;
  std::vector<int> arms;                // arms with a theta coefficient
  std::vector<BucketEffect> bucket_effects;
  mcmc::PosteriorSamples samples;
};

/// Bayesian Time Machine: linear predictor eta0 + theta_k + alpha_c(j) with
/// a second-order random-walk prior on the bucket effects, alpha_1 = 0.
TimeMachineAnalysis analyze_timemachine_detailed(const TrialData& data, int arm, double alpha,
                                                 const TimeMachineSettings& settings,
                                                 std::uint64_t seed);

AnalysisResult analyze_timemachine(const TrialData& data, int arm, double alpha = 0.025,
                                   const TimeMachineSettings& settings = {},
                                   std::uint64_t seed = 1);

/// Draws from the Time Machine prior alone (no data) for `n_buckets`
/// buckets: parameters alpha_1..alpha_C and tau.
mcmc::PosteriorSamples sample_time_machine_prior(int n_buckets,
                                                 const TimeMachineSettings& settings,
                                                 std::uint64_t seed);

/// JSON array of per-bucket posterior effect summaries.
std::string bucket_effects_to_json(const std::vector<BucketEffect>& effects);

}  // namespace ncc
