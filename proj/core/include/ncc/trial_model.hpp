#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ncc/errors.hpp"

namespace ncc {

enum class Endpoint { binary, continuous };

enum class TrendKind { linear, stepwise, inv_u, seasonal };

std::string to_string(Endpoint e);
std::string to_string(TrendKind k);
Endpoint parse_endpoint(const std::string& s);
TrendKind parse_trend(const std::string& s);

/// Generative specification of one platform trial.
///
/// Arms are numbered 1..num_arms; arm 0 is the shared control. Arm k becomes
/// active with participant entry_times[k-1] + 1 and leaves right after its
/// n_arm-th allocation. `control_response` is p0 for binary endpoints and mu0
/// for continuous ones; `effects` are odds ratios or mean differences.
struct TrialConfig {
  Endpoint endpoint = Endpoint::binary;
  int num_arms = 1;
  int n_arm = 100;
  std::vector<int> entry_times{0};
  int period_blocks = 2;
  double control_response = 0.5;
  std::vector<double> effects{1.0};
  double sigma = 1.0;
  TrendKind trend = TrendKind::linear;
  int n_peak = 0;
  int n_wave = 1;
  std::vector<double> lambda{0.0, 0.0};

  /// All argument problems, one entry per offending field. Empty when valid.
  std::vector<FieldError> validate() const;

  /// Throws ConfigError listing every problem found by validate().
  void check() const;
};

struct ParticipantRecord {
  int j = 0;
  double response = 0.0;
  int treatment = 0;
  int period = 0;

  bool operator==(const ParticipantRecord&) const = default;
};

struct Period {
  int index = 0;  // 1-based
  int start_j = 0;
  int end_j = 0;  // inclusive
  std::vector<int> active_arms;  // sorted, always contains 0

  int size() const { return end_j - start_j + 1; }
  bool is_active(int arm) const;
  bool operator==(const Period&) const = default;
};

/// Ordered partition of 1..N into maximal runs with a constant active-arm set.
class PeriodMap {
 public:
  PeriodMap() = default;
  explicit PeriodMap(std::vector<Period> periods);

  const std::vector<Period>& periods() const { return periods_; }
  std::size_t size() const { return periods_.size(); }
  const Period& at(int index) const;  // 1-based period index
  int period_of(int j) const;
  int total_participants() const { return periods_.empty() ? 0 : periods_.back().end_j; }

  bool operator==(const PeriodMap&) const = default;

 private:
  std::vector<Period> periods_;
};

/// Participant-index interval of one arm, plus the periods it spans.
struct ArmWindow {
  int arm = 0;
  int start_j = 0;
  int end_j = 0;
  int first_period = 0;
  int last_period = 0;

  bool operator==(const ArmWindow&) const = default;
};

/// Computes the period partition from a realized allocation sequence.
///
/// `treatments[i]` is the arm of participant j = i + 1. `entry_times[k-1]`
/// is the number of participants recruited before arm k opens, and
/// `exit_events[k-1]` the index of arm k's last participant. Control stays
/// active for the whole trial.
PeriodMap derive_periods(std::span<const int> treatments, std::span<const int> entry_times,
                         std::span<const int> exit_events);

/// Index of each experimental arm's last allocation (0 if never allocated).
std::vector<int> exit_events_from(std::span<const int> treatments, int num_arms);

/// Participant-level platform trial data with derived period bookkeeping.
class TrialData {
 public:
  TrialData() = default;

  /// Builds data from simulator output, where entry times are known.
  static TrialData from_simulation(std::vector<ParticipantRecord> rows, Endpoint endpoint,
                                   std::span<const int> entry_times);

  /// Builds data from records alone (e.g. a CSV file). Active periods of
  /// each arm are inferred from the periods in which it has allocations.
  static TrialData from_records(std::vector<ParticipantRecord> rows, Endpoint endpoint);

  const std::vector<ParticipantRecord>& rows() const { return rows_; }
  Endpoint endpoint() const { return endpoint_; }
  const PeriodMap& periods() const { return periods_; }
  const std::vector<ArmWindow>& arm_windows() const { return windows_; }

  std::size_t size() const { return rows_.size(); }
  int num_periods() const { return static_cast<int>(periods_.size()); }

  /// Experimental arm ids present in the data, ascending.
  std::vector<int> arms() const;
  bool has_arm(int arm) const;
  const ArmWindow& window(int arm) const;

  /// Count of rows allocated to `arm`.
  int arm_count(int arm) const;

  std::vector<int> treatments() const;

  bool operator==(const TrialData&) const = default;

 private:
  std::vector<ParticipantRecord> rows_;
  Endpoint endpoint_ = Endpoint::binary;
  PeriodMap periods_;
  std::vector<ArmWindow> windows_;  // index 0 is control
};

enum class Method { fixmodel, sepmodel, poolmodel, mapprior, timemachine };

std::string to_string(Method m);
Method parse_method(const std::string& s);
bool is_bayesian(Method m);

struct CoefficientRow {
  std::string label;
  double estimate = 0.0;
  double std_error = 0.0;
  double statistic = 0.0;
};

/// Fitted-model summary attached to frequentist results.
struct ModelSummary {
  std::vector<CoefficientRow> coefficients;
  int n_obs = 0;
  int df_residual = 0;
  double log_likelihood = 0.0;      // logistic fits
  double residual_variance = 0.0;   // linear fits
  int iterations = 0;
  bool converged = true;
};

struct BlockAcceptance {
  std::string block;
  double rate = 0.0;
};

/// Sampler summary attached to Bayesian results.
struct SamplerSummary {
  std::size_t draws = 0;
  double effective_draws = 0.0;  // of the treatment effect, by batch means
  std::vector<BlockAcceptance> acceptance;
};

/// Decision record of one treatment-versus-control comparison.
///
/// p_val is the one-sided p-value (frequentist) or the posterior probability
/// of a non-positive effect (Bayesian). treat_effect is on the log-odds-ratio
/// scale for binary endpoints and the mean-difference scale otherwise.
struct AnalysisResult {
  double p_val = 1.0;
  double treat_effect = 0.0;
  double lower_ci = 0.0;
  double upper_ci = 0.0;
  bool reject_h0 = false;
  Method method = Method::fixmodel;
  int arm = 0;
  double alpha = 0.025;
  std::optional<ModelSummary> model;
  std::optional<SamplerSummary> sampler;
};

}  // namespace ncc
