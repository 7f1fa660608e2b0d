#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "ncc/simulate.hpp"
#include "ncc/trial_model.hpp"

namespace ncc {

/// Column header of trial data files, bit-exact.
inline constexpr const char* kTrialCsvHeader = "j,response,treatment,period";

void write_trial_csv(const TrialData& data, std::ostream& os);
std::string trial_to_csv(const TrialData& data);

/// Reads `j,response,treatment,period` rows. Without an explicit endpoint,
/// data whose responses are all 0/1 is read as binary. Errors name the line.
TrialData read_trial_csv(std::istream& is, std::optional<Endpoint> endpoint = std::nullopt);
TrialData read_trial_csv_file(const std::string& path,
                              std::optional<Endpoint> endpoint = std::nullopt);

/// Full simulator output (data, periods, arm windows, model values, trend)
/// as a JSON document.
std::string simulation_to_json(const SimulationOutput& sim, const TrialConfig& config);

/// Analysis result with keys p_val, treat_effect, lower_ci, upper_ci,
/// reject_h0, plus a `model` block for frequentist methods. `diagnostics`
/// appends the sampler summary and the method/arm/alpha echo.
std::string result_to_json(const AnalysisResult& result, bool diagnostics = false);

/// Shortest round-trip decimal form of a double.
std::string format_double(double x);

}  // namespace ncc
