#pragma once

#include <ostream>
#include <string>

#include "ncc/trial_model.hpp"

namespace ncc {

struct PlotOptions {
  int width = 800;
  int bar_height = 24;
  int bar_gap = 12;
  std::string title = "Trial progress";
};

// Horizontal bar per arm over recruitment index, period boundaries as
// vertical dashed lines. Output depends only on the data and options.
void write_trial_svg(const TrialData& data, std::ostream& os, const PlotOptions& opts = {});
std::string trial_svg(const TrialData& data, const PlotOptions& opts = {});

}  // namespace ncc
