#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ncc/map_prior.hpp"
#include "ncc/time_machine.hpp"
#include "ncc/trial_model.hpp"

namespace ncc {

/// Chain lengths used for Bayesian methods inside simulation studies.
inline constexpr mcmc::ChainSettings kStudyChain{2000, 4000, 1, 0.44, 50};

struct MethodSettings {
  bool fix_ncc = true;
  MapSettings map{.chain = kStudyChain};
  TimeMachineSettings timemachine{.chain = kStudyChain};
};

/// One row of the scenario grid.
struct Scenario {
  std::string id;
  TrialConfig config;
  std::vector<int> arms;
  std::vector<Method> methods;
  MethodSettings settings;
  double alpha = 0.025;

  void check() const;
};

struct CellOutcome {
  int arm = 0;
  Method method = Method::fixmodel;
  bool failed = false;
  bool reject = false;
  double estimate = 0.0;
  std::string error;
};

struct ReplicationResult {
  std::uint64_t seed = 0;
  std::vector<CellOutcome> cells;  // arms x methods, in scenario order
};

/// Seed of one replication, a pure function of its inputs.
std::uint64_t replication_seed(std::uint64_t master_seed, const std::string& scenario_id,
                               int replication_index);

/// Simulates one trial and runs every requested (arm, method) analysis.
/// Analysis failures are recorded per cell.
ReplicationResult run_replication(const Scenario& scenario, int replication_index,
                                  std::uint64_t master_seed);

struct StudyRow {
  std::string scenario_id;
  int arm = 0;
  Method method = Method::fixmodel;
  int nsim = 0;
  int n_failed = 0;
  double true_effect = 0.0;
  double reject_prob = 0.0;
  double reject_se = 0.0;
  double bias = 0.0;
  double mse = 0.0;
  bool failure_warning = false;  // more than 2% of replications failed
};

/// Aggregates cell outcomes of `nsim` replications into one row per
/// (arm, method). Failed replications are excluded from every metric.
std::vector<StudyRow> aggregate(const Scenario& scenario,
                                const std::vector<ReplicationResult>& replications);

/// Runs nsim replications of every scenario on `workers` threads
/// (0 = default_worker_count()). Output does not depend on `workers`.
std::vector<StudyRow> sim_study_par(const std::vector<Scenario>& scenarios, int nsim,
                                    std::uint64_t master_seed, int workers = 0);

/// 90% of hardware threads (at least 1); NCC_WORKERS overrides.
int default_worker_count();

void write_study_csv(const std::vector<StudyRow>& rows, std::ostream& os);
std::string study_to_csv(const std::vector<StudyRow>& rows);

}  // namespace ncc
