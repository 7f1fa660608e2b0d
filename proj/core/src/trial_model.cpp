#include "ncc/trial_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ncc {

ConfigError::ConfigError(std::vector<FieldError> fields)
    : Error([&] {
        std::ostringstream os;
        os << "invalid trial configuration:";
        for (const auto& f : fields) os << "\n  " << f.field << ": " << f.message;
        return os.str();
      }()),
      fields_(std::move(fields)) {}

std::string to_string(Endpoint e) { return e == Endpoint::binary ? "binary" : "continuous"; }

std::string to_string(TrendKind k) {
  switch (k) {
    case TrendKind::linear: return "linear";
    case TrendKind::stepwise: return "stepwise";
    case TrendKind::inv_u: return "inv_u";
    case TrendKind::seasonal: return "seasonal";
  }
  return "linear";
}

Endpoint parse_endpoint(const std::string& s) {
  if (s == "binary" || s == "bin") return Endpoint::binary;
  if (s == "continuous" || s == "cont") return Endpoint::continuous;
  throw Error("unknown endpoint '" + s + "' (expected binary or continuous)");
}

TrendKind parse_trend(const std::string& s) {
  if (s == "linear") return TrendKind::linear;
  if (s == "stepwise" || s == "sw") return TrendKind::stepwise;
  if (s == "inv_u") return TrendKind::inv_u;
  if (s == "seasonal") return TrendKind::seasonal;
  throw Error("unknown trend '" + s + "' (expected linear, stepwise, inv_u or seasonal)");
}

std::string to_string(Method m) {
  switch (m) {
    case Method::fixmodel: return "fixmodel";
    case Method::sepmodel: return "sepmodel";
    case Method::poolmodel: return "poolmodel";
    case Method::mapprior: return "mapprior";
    case Method::timemachine: return "timemachine";
  }
  return "fixmodel";
}

Method parse_method(const std::string& s) {
  if (s == "fixmodel") return Method::fixmodel;
  if (s == "sepmodel") return Method::sepmodel;
  if (s == "poolmodel") return Method::poolmodel;
  if (s == "mapprior" || s == "MAPprior") return Method::mapprior;
  if (s == "timemachine") return Method::timemachine;
  throw Error("unknown method '" + s +
              "' (expected fixmodel, sepmodel, poolmodel, mapprior or timemachine)");
}

bool is_bayesian(Method m) { return m == Method::mapprior || m == Method::timemachine; }

std::vector<FieldError> TrialConfig::validate() const {
  std::vector<FieldError> errs;
  const bool binary = endpoint == Endpoint::binary;
  if (num_arms < 1) errs.push_back({"num_arms", "must be a positive integer"});
  if (n_arm < 1) errs.push_back({"n_arm", "must be a positive integer"});
  if (period_blocks < 1) errs.push_back({"period_blocks", "must be a positive integer"});

  const auto k = static_cast<std::size_t>(std::max(num_arms, 0));
  if (entry_times.size() != k) {
    errs.push_back({"d", "length must equal num_arms (" + std::to_string(k) + "), got " +
                             std::to_string(entry_times.size())});
  } else if (!entry_times.empty()) {
    if (entry_times.front() != 0) errs.push_back({"d", "first entry time must be 0"});
    if (!std::is_sorted(entry_times.begin(), entry_times.end()))
      errs.push_back({"d", "entry times must be nondecreasing"});
    if (std::any_of(entry_times.begin(), entry_times.end(), [](int d) { return d < 0; }))
      errs.push_back({"d", "entry times must be nonnegative"});
  }

  const char* eff_name = binary ? "OR" : "theta";
  if (effects.size() != k) {
    errs.push_back({eff_name, "length must equal num_arms (" + std::to_string(k) + "), got " +
                                  std::to_string(effects.size())});
  }
  for (double e : effects) {
    if (!std::isfinite(e) || (binary && !(e > 0.0))) {
      errs.push_back({eff_name, binary ? "odds ratios must be positive and finite"
                                       : "mean differences must be finite"});
      break;
    }
  }

  if (binary) {
    if (!(control_response > 0.0 && control_response < 1.0))
      errs.push_back({"p0", "must lie strictly between 0 and 1"});
  } else {
    if (!std::isfinite(control_response)) errs.push_back({"mu0", "must be finite"});
    if (!(sigma > 0.0) || !std::isfinite(sigma)) errs.push_back({"sigma", "must be positive"});
  }

  if (lambda.size() != k + 1) {
    errs.push_back({"lambda", "length must equal num_arms + 1 (" + std::to_string(k + 1) +
                                  "), got " + std::to_string(lambda.size())});
  }
  if (std::any_of(lambda.begin(), lambda.end(), [](double l) { return !std::isfinite(l); }))
    errs.push_back({"lambda", "must be finite"});

  if (trend == TrendKind::inv_u && n_peak < 1)
    errs.push_back({"N_peak", "required positive integer for the inv_u trend"});
  if (trend == TrendKind::seasonal && n_wave < 1)
    errs.push_back({"n_wave", "required positive integer for the seasonal trend"});
  return errs;
}

void TrialConfig::check() const {
  auto errs = validate();
  if (!errs.empty()) throw ConfigError(std::move(errs));
}

bool Period::is_active(int arm) const {
  return std::binary_search(active_arms.begin(), active_arms.end(), arm);
}

PeriodMap::PeriodMap(std::vector<Period> periods) : periods_(std::move(periods)) {
  int expect = 1;
  for (std::size_t i = 0; i < periods_.size(); ++i) {
    const auto& p = periods_[i];
    if (p.index != static_cast<int>(i) + 1 || p.start_j != expect || p.end_j < p.start_j)
      throw Error("period map is not a contiguous partition of 1..N");
    expect = p.end_j + 1;
  }
}

const Period& PeriodMap::at(int index) const {
  if (index < 1 || index > static_cast<int>(periods_.size()))
    throw Error("period index " + std::to_string(index) + " out of range");
  return periods_[static_cast<std::size_t>(index - 1)];
}

int PeriodMap::period_of(int j) const {
  auto it = std::lower_bound(periods_.begin(), periods_.end(), j,
                             [](const Period& p, int v) { return p.end_j < v; });
  if (it == periods_.end() || j < it->start_j)
    throw Error("participant index " + std::to_string(j) + " outside the trial");
  return it->index;
}

PeriodMap derive_periods(std::span<const int> treatments, std::span<const int> entry_times,
                         std::span<const int> exit_events) {
  if (treatments.empty()) throw Error("no participants");
  if (entry_times.size() != exit_events.size())
    throw Error("derive_periods: entry_times and exit_events differ in length");
  const int num_arms = static_cast<int>(entry_times.size());
  const int n = static_cast<int>(treatments.size());
  for (int t : treatments) {
    if (t < 0 || t > num_arms)
      throw Error("derive_periods: treatment id " + std::to_string(t) + " out of range");
  }

  auto active_at = [&](int j) {
    std::vector<int> set{0};
    for (int k = 1; k <= num_arms; ++k) {
      const auto idx = static_cast<std::size_t>(k - 1);
      if (j > entry_times[idx] && j <= exit_events[idx]) set.push_back(k);
    }
    return set;
  };

  std::vector<Period> out;
  std::vector<int> current = active_at(1);
  int start = 1;
  for (int j = 2; j <= n; ++j) {
    auto next = active_at(j);
    if (next != current) {
      out.push_back({static_cast<int>(out.size()) + 1, start, j - 1, std::move(current)});
      current = std::move(next);
      start = j;
    }
  }
  out.push_back({static_cast<int>(out.size()) + 1, start, n, std::move(current)});
  return PeriodMap(std::move(out));
}

std::vector<int> exit_events_from(std::span<const int> treatments, int num_arms) {
  std::vector<int> exits(static_cast<std::size_t>(num_arms), 0);
  for (std::size_t i = 0; i < treatments.size(); ++i) {
    const int t = treatments[i];
    if (t >= 1 && t <= num_arms) exits[static_cast<std::size_t>(t - 1)] = static_cast<int>(i) + 1;
  }
  return exits;
}

namespace {

void check_rows(const std::vector<ParticipantRecord>& rows, Endpoint endpoint) {
  if (rows.empty()) throw Error("no participants");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.j != static_cast<int>(i) + 1)
      throw Error("participant indices must run 1..N without gaps (row " + std::to_string(i + 1) +
                  " has j=" + std::to_string(r.j) + ")");
    if (r.treatment < 0)
      throw Error("negative treatment id at j=" + std::to_string(r.j));
    if (endpoint == Endpoint::binary && r.response != 0.0 && r.response != 1.0)
      throw Error("binary response must be 0 or 1 at j=" + std::to_string(r.j));
    if (!std::isfinite(r.response)) throw Error("non-finite response at j=" + std::to_string(r.j));
  }
}

}  // namespace

TrialData TrialData::from_simulation(std::vector<ParticipantRecord> rows, Endpoint endpoint,
                                     std::span<const int> entry_times) {
  check_rows(rows, endpoint);
  TrialData d;
  d.endpoint_ = endpoint;
  d.rows_ = std::move(rows);
  const int num_arms = static_cast<int>(entry_times.size());
  const auto treat = d.treatments();
  const auto exits = exit_events_from(treat, num_arms);
  d.periods_ = derive_periods(treat, entry_times, exits);
  for (const auto& r : d.rows_) {
    if (r.period != d.periods_.period_of(r.j))
      throw Error("row period disagrees with derived periods at j=" + std::to_string(r.j));
  }
  const int n = static_cast<int>(d.rows_.size());
  d.windows_.push_back({0, 1, n, 1, d.num_periods()});
  for (int k = 1; k <= num_arms; ++k) {
    const auto idx = static_cast<std::size_t>(k - 1);
    const int start = entry_times[idx] + 1;
    const int end = exits[idx];
    if (end == 0) throw Error("arm " + std::to_string(k) + " has no participants");
    d.windows_.push_back({k, start, end, d.periods_.period_of(start), d.periods_.period_of(end)});
  }
  return d;
}

TrialData TrialData::from_records(std::vector<ParticipantRecord> rows, Endpoint endpoint) {
  check_rows(rows, endpoint);
  int num_arms = 0;
  for (const auto& r : rows) num_arms = std::max(num_arms, r.treatment);

  // periods as given: must start at 1 and step by at most one
  std::vector<int> first(static_cast<std::size_t>(num_arms) + 1, 0);
  std::vector<int> last(first.size(), 0);
  std::vector<int> last_j(first.size(), 0);
  std::vector<std::pair<int, int>> spans;  // start_j, end_j per period
  int prev = 0;
  for (const auto& r : rows) {
    if (r.period != prev && r.period != prev + 1)
      throw Error("period indices must start at 1 and increase by one (j=" +
                  std::to_string(r.j) + ")");
    if (r.period == prev + 1) {
      spans.emplace_back(r.j, r.j);
      prev = r.period;
    } else {
      spans.back().second = r.j;
    }
    const auto t = static_cast<std::size_t>(r.treatment);
    if (first[t] == 0) first[t] = r.period;
    last[t] = r.period;
    last_j[t] = r.j;
  }

  std::vector<Period> periods;
  for (std::size_t s = 0; s < spans.size(); ++s) {
    const int idx = static_cast<int>(s) + 1;
    Period p{idx, spans[s].first, spans[s].second, {0}};
    for (int k = 1; k <= num_arms; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      if (first[kk] != 0 && first[kk] <= idx && idx <= last[kk]) p.active_arms.push_back(k);
    }
    periods.push_back(std::move(p));
  }

  TrialData d;
  d.endpoint_ = endpoint;
  d.rows_ = std::move(rows);
  d.periods_ = PeriodMap(std::move(periods));
  const int n = static_cast<int>(d.rows_.size());
  d.windows_.push_back({0, 1, n, 1, d.num_periods()});
  for (int k = 1; k <= num_arms; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    if (first[kk] == 0) {
      d.windows_.push_back({k, 0, 0, 0, 0});  // absent arm id
      continue;
    }
    d.windows_.push_back({k, d.periods_.at(first[kk]).start_j, last_j[kk], first[kk], last[kk]});
  }
  return d;
}

std::vector<int> TrialData::arms() const {
  std::vector<int> out;
  for (const auto& w : windows_) {
    if (w.arm > 0 && w.end_j > 0) out.push_back(w.arm);
  }
  return out;
}

bool TrialData::has_arm(int arm) const {
  return arm >= 1 && arm < static_cast<int>(windows_.size()) &&
         windows_[static_cast<std::size_t>(arm)].end_j > 0;
}

const ArmWindow& TrialData::window(int arm) const {
  if (arm != 0 && !has_arm(arm)) throw Error("arm " + std::to_string(arm) + " not present in data");
  return windows_.at(static_cast<std::size_t>(arm));
}

int TrialData::arm_count(int arm) const {
  return static_cast<int>(
      std::count_if(rows_.begin(), rows_.end(), [arm](const auto& r) { return r.treatment == arm; }));
}

std::vector<int> TrialData::treatments() const {
  std::vector<int> out;
  out.reserve(rows_.size());
  for (const auto& r : rows_) out.push_back(r.treatment);
  return out;
}

}  // namespace ncc
