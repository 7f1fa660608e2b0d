#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ncc/simstudy.hpp"
#include "ncc/trial_model.hpp"

namespace ncc {

/// Parses a trial configuration from a JSON object using the argument
/// names num_arms, n_arm, d, period_blocks, p0|mu0, OR|theta, sigma,
/// lambda, trend, N_peak, n_wave, endpoint. Missing fields keep defaults.
TrialConfig trial_config_from_json(const std::string& text);

/// Scenario grid from JSON: either an array of scenario objects or an object
/// with a "scenarios" array. Top-level fields act as defaults for each
/// scenario (e.g. a shared endpoint or method list).
std::vector<Scenario> read_scenarios_json(std::istream& is);

/// Scenario grid from CSV, one scenario per row. List-valued columns (d,
/// OR/theta, lambda, arms, methods) use ';' as the element separator.
std::vector<Scenario> read_scenarios_csv(std::istream& is);

/// Dispatches on the file extension (.json or .csv).
std::vector<Scenario> read_scenarios_file(const std::string& path);

}  // namespace ncc
