#pragma once

#include <cstdint>
#include <vector>

#include "ncc/mcmc.hpp"
#include "ncc/mixture.hpp"
#include "ncc/trial_model.hpp"

namespace ncc {

struct MapSettings {
  int opt = 2;                  // 1: pool NCC into one source, 2: one source per period
  double prior_prec_tau = 4.0;  // half-normal precision for between-period sd
  double prior_prec_eta = 0.001;
  bool robustify = true;
  double weight = 0.1;
  int max_components = 3;
  mcmc::ChainSettings chain{};

  void check() const;
};

/// Control data of one historical source (a period, or all NCC pooled).
/// Binary sources use events/n; continuous sources use mean/sd/n.
struct SourceSummary {
  int period = 0;   // 0 when pooled
  int n = 0;
  double events = 0.0;
  double mean = 0.0;
  double sd = 0.0;
};

/// Per-period (opt = 2) or pooled (opt = 1) summaries of the controls
/// recruited strictly before `arm` entered.
std::vector<SourceSummary> ncc_sources(const TrialData& data, int arm, int opt);

struct MapPriorFit {
  MixturePrior prior;           // fitted mixture, before robustification
  std::vector<double> predictive;  // eta* draws the mixture was fitted to
  mcmc::PosteriorSamples samples;  // hierarchical model draws (mu, tau, eta_s)
};

/// Meta-analytic predictive prior from historical control sources:
/// eta_s ~ N(mu, tau^2), mu ~ N(0, 1/prior_prec_eta), tau ~ half-normal with
/// precision prior_prec_tau; predictive eta* ~ N(mu, tau^2) per draw, then
/// an AIC-selected normal mixture fitted to eta*.
MapPriorFit derive_map_prior(const std::vector<SourceSummary>& sources, Endpoint endpoint,
                             const MapSettings& settings, std::uint64_t seed);

struct MapAnalysis {
  AnalysisResult result;
  MixturePrior map_prior;   // as fitted
  MixturePrior used_prior;  // after robustification (if enabled)
};

/// Treatment vs concurrent controls with the (robustified) MAP prior on the
/// control parameter. p_val is the posterior probability of effect <= 0.
MapAnalysis analyze_map_detailed(const TrialData& data, int arm, double alpha,
                                 const MapSettings& settings, std::uint64_t seed);

AnalysisResult analyze_map(const TrialData& data, int arm, double alpha = 0.025,
                           const MapSettings& settings = {}, std::uint64_t seed = 1);

/// Concurrent-data comparison with a fixed control prior; used by the MAP
/// analysis and, with a single vague component, as a no-borrowing reference.
AnalysisResult analyze_concurrent_with_prior(const TrialData& data, int arm, double alpha,
                                             const MixturePrior& control_prior,
                                             double treatment_prec,
                                             const mcmc::ChainSettings& chain,
                                             std::uint64_t seed);

}  // namespace ncc
