#pragma once

#include <cstddef>
#include <vector>

#include "ncc/glm.hpp"
#include "ncc/trial_model.hpp"

namespace ncc {

enum class WindowKind {
  until_exit,   // every participant up to the studied arm's last one
  concurrent,   // all arms, only periods where the studied arm is active
  separate,     // studied arm and controls, only its active periods
};

/// Participants entering one treatment-versus-control comparison.
struct AnalysisWindow {
  int arm = 0;
  std::vector<std::size_t> rows;   // indices into TrialData::rows()
  std::vector<int> periods;        // distinct periods, ascending
  std::vector<bool> concurrent;    // per selected row
};

AnalysisWindow analysis_window(const TrialData& data, int arm, WindowKind kind);

/// Intercept + treatment dummies (+ period dummies if requested and the
/// window spans more than one period). Control and the earliest window
/// period are the reference levels.
DesignMatrix build_design(const TrialData& data, const AnalysisWindow& window,
                          bool period_adjust);

/// Label of the studied arm's coefficient.
std::string treatment_label(int arm);

/// Regression adjusting for period as a categorical covariate. ncc=false
/// restricts the fit to the concurrent periods.
AnalysisResult analyze_fix(const TrialData& data, int arm, double alpha = 0.025,
                           bool ncc = true);

/// Studied arm against its concurrent controls only.
AnalysisResult analyze_sep(const TrialData& data, int arm, double alpha = 0.025);

/// All data up to the arm's exit, no time adjustment.
AnalysisResult analyze_pool(const TrialData& data, int arm, double alpha = 0.025);

}  // namespace ncc
