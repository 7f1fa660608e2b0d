#pragma once

#include "ncc/trial_model.hpp"

namespace ncc {

/// Shape and strength of the time trend seen by one arm.
struct TrendSpec {
  TrendKind kind = TrendKind::linear;
  double lambda = 0.0;
  int n_peak = 0;  // inv_u only
  int n_wave = 1;  // seasonal only
};

// Trend values are added to the linear predictor (log-odds or mean) of
// participant j. Every shape is anchored at f(1) = 0.

/// lambda * (j - 1) / (N - 1)
double linear_trend(int j, double lambda, int n_total);

/// lambda * (c - 1) / (S - 1), constant within period c; zero when S = 1.
double sw_trend(int period, double lambda, int n_periods);

/// Linear rise up to n_peak, mirror-image fall afterwards.
double inv_u_trend(int j, double lambda, int n_peak, int n_total);

/// lambda * sin(2 pi n_wave (j - 1) / (N - 1))
double seasonal_trend(int j, double lambda, int n_wave, int n_total);

/// Dispatches on spec.kind. `period` and `n_periods` are only read by the
/// stepwise shape.
double trend_value(const TrendSpec& spec, int j, int period, int n_total, int n_periods);

}  // namespace ncc
