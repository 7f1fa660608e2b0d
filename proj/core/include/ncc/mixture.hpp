#pragma once

#include <span>
#include <string>
#include <vector>

namespace ncc {

struct MixtureComponent {
  double weight = 1.0;
  double mean = 0.0;
  double sd = 1.0;
};

/// Finite normal mixture on the control log-odds (binary) or mean
/// (continuous) scale. Weights are positive and sum to one.
class MixturePrior {
 public:
  MixturePrior() = default;
  explicit MixturePrior(std::vector<MixtureComponent> components);

  const std::vector<MixtureComponent>& components() const { return components_; }
  std::size_t size() const { return components_.size(); }

  double log_density(double x) const;
  double mean() const;
  double variance() const;

  std::string to_json() const;

 private:
  std::vector<MixtureComponent> components_;
};

/// Appends a vague N(0, vague_sd^2) component with weight `weight` and
/// scales the existing weights by 1 - weight. weight = 0 leaves the prior
/// unchanged; weight = 1 leaves only the vague component.
MixturePrior robustify(const MixturePrior& prior, double weight, double vague_sd);

/// Conjugate update of every component by one normal observation
/// (estimate `obs` with standard error `obs_se`).
MixturePrior posterior_mixture(const MixturePrior& prior, double obs, double obs_se);

struct MixtureFit {
  MixturePrior mixture;
  double log_likelihood = 0.0;
  double aic = 0.0;
  int iterations = 0;
  std::vector<double> log_likelihood_trace;
};

/// Maximum-likelihood fit of a k-component normal mixture by EM, started
/// from equal-count slices of the sorted sample.
MixtureFit fit_normal_mixture(std::span<const double> x, int k, int max_iterations = 1000,
                              double tolerance = 1e-10);

/// Fits 1..max_components mixtures and keeps the one with the lowest AIC.
MixtureFit fit_mixture_aic(std::span<const double> x, int max_components = 3);

}  // namespace ncc
