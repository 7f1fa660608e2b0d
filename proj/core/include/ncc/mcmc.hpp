#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ncc/rng.hpp"

namespace ncc::mcmc {

/// Log density (up to a constant) of whatever part of the posterior an
/// update touches, evaluated at the full parameter state.
using LogDensity = std::function<double(std::span<const double> state)>;

/// Draws a block from its full conditional, in place.
using GibbsUpdate = std::function<void(std::span<double> state, Rng& rng)>;

/// Applies a scalar perturbation `delta` to the state and returns the log
/// Jacobian of the move (0 for a plain shift of one coordinate).
using Perturbation = std::function<double(std::span<double> state, double delta)>;

using Derived = std::function<double(std::span<const double> state)>;

/// Block-structured target: named parameters plus an ordered sweep of
/// updates. Each sweep applies every block once in insertion order.
class Model {
 public:
  /// Registers a parameter; returns its index in the state vector.
  std::size_t add_parameter(std::string name, double init, bool monitored = true);

  void add_gibbs(std::string block, GibbsUpdate update);

  /// Adaptive random-walk Metropolis on one coordinate.
  void add_metropolis(std::string block, std::size_t index, LogDensity log_density,
                      double initial_scale = 1.0);

  /// Adaptive random-walk Metropolis along a one-dimensional move through
  /// several coordinates (e.g. shifting a level and its children together).
  void add_metropolis_move(std::string block, Perturbation move, LogDensity log_density,
                           double initial_scale = 1.0);

  /// Quantity computed from each retained state and stored alongside draws.
  void add_derived(std::string name, Derived fn);

  std::size_t index_of(const std::string& name) const;
  const std::vector<std::string>& parameter_names() const { return names_; }

 private:
  friend class Chain;
  struct Block {
    std::string name;
    bool gibbs = false;
    GibbsUpdate update;
    Perturbation move;
    LogDensity log_density;
    double scale = 1.0;
  };
  std::vector<std::string> names_;
  std::vector<double> init_;
  std::vector<bool> monitored_;
  std::vector<Block> blocks_;
  std::vector<std::pair<std::string, Derived>> derived_;
};

struct ChainSettings {
  int burn_in = 5000;
  int draws = 10000;
  int thin = 1;
  double target_acceptance = 0.44;
  int adapt_batch = 50;
};

struct BlockStats {
  std::string block;
  double acceptance = 0.0;  // post burn-in
  double final_scale = 0.0;
};

/// Retained draws of monitored parameters and derived quantities.
class PosteriorSamples {
 public:
  const std::vector<std::string>& names() const { return names_; }
  bool contains(const std::string& name) const;
  const std::vector<double>& operator[](const std::string& name) const;
  std::size_t size() const { return draws_.empty() ? 0 : draws_.front().size(); }

  std::uint64_t seed = 0;
  int burn_in = 0;
  int iterations = 0;
  int thin = 1;
  std::vector<BlockStats> blocks;

  void write_csv(std::ostream& os) const;

 private:
  friend class Chain;
  std::vector<std::string> names_;
  std::vector<std::vector<double>> draws_;
};

/// Runs one chain. Proposal scales adapt toward the target acceptance rate
/// during burn-in only and are frozen afterwards.
PosteriorSamples run_chain(const Model& model, const ChainSettings& settings, std::uint64_t seed);

struct Summary {
  double tail_prob = 0.0;  // fraction of draws <= 0
  double mean = 0.0;
  double lower = 0.0;      // alpha quantile
  double upper = 0.0;      // 1 - alpha quantile
};

Summary summarize(std::span<const double> draws, double alpha);
Summary summarize(const PosteriorSamples& samples, const std::string& parameter, double alpha);

/// Empirical quantile with linear interpolation between order statistics.
double quantile(std::span<const double> draws, double prob);

double mean(std::span<const double> draws);
double variance(std::span<const double> draws);

/// Monte Carlo standard error of the mean by non-overlapping batch means.
double mc_standard_error(std::span<const double> draws);

/// Effective sample size implied by the batch-means standard error.
double effective_draws(std::span<const double> draws);

struct ChainAgreement {
  double mean_first = 0.0;
  double mean_second = 0.0;
  double combined_se = 0.0;
  bool agree = false;  // |difference| < 3 combined MC standard errors
};

/// Runs a second chain from a seed derived from `seed` and compares the
/// posterior means of `parameter`.
ChainAgreement check_chain_agreement(const Model& model, const ChainSettings& settings,
                                     std::uint64_t seed, const std::string& parameter);

/// Draw from PG(1, z) by Devroye's alternating-series method.
double polya_gamma_1(double z, Rng& rng);

/// Draw from PG(n, z) as a sum of n independent PG(1, z) draws.
double polya_gamma(int n, double z, Rng& rng);

/// Draw from N(Q^{-1} b, Q^{-1}) given the precision Q (symmetric positive
/// definite) and the linear term b. Returns false if Q is not SPD.
bool sample_gaussian_canonical(const Eigen::MatrixXd& precision, const Eigen::VectorXd& linear,
                               Rng& rng, Eigen::VectorXd& out);

}  // namespace ncc::mcmc
