#include "ncc/timetrends.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace ncc {

namespace {

void require_window(int j, int n_total) {
  if (n_total < 2) throw Error("degenerate trend window");
  if (j < 1 || j > n_total)
    throw Error("trend index j=" + std::to_string(j) + " outside 1.." + std::to_string(n_total));
}

}  // namespace

double linear_trend(int j, double lambda, int n_total) {
  require_window(j, n_total);
  return lambda * (j - 1) / static_cast<double>(n_total - 1);
}

double sw_trend(int period, double lambda, int n_periods) {
  if (period < 1 || period > n_periods)
    throw Error("period " + std::to_string(period) + " outside 1.." + std::to_string(n_periods));
  if (n_periods == 1) return 0.0;
  return lambda * (period - 1) / static_cast<double>(n_periods - 1);
}

double inv_u_trend(int j, double lambda, int n_peak, int n_total) {
  require_window(j, n_total);
  if (n_peak < 1 || n_peak > n_total)
    throw Error("N_peak=" + std::to_string(n_peak) + " outside 1.." + std::to_string(n_total));
  const double denom = n_total - 1;
  if (j <= n_peak) return lambda * (j - 1) / denom;
  return lambda * (2 * n_peak - j - 1) / denom;
}

double seasonal_trend(int j, double lambda, int n_wave, int n_total) {
  require_window(j, n_total);
  if (n_wave < 1) throw Error("n_wave must be at least 1");
  const double x = static_cast<double>(j - 1) / (n_total - 1);
  return lambda * std::sin(2.0 * std::numbers::pi * n_wave * x);
}

double trend_value(const TrendSpec& spec, int j, int period, int n_total, int n_periods) {
  if (spec.lambda == 0.0) return 0.0;
  switch (spec.kind) {
    case TrendKind::linear: return linear_trend(j, spec.lambda, n_total);
    case TrendKind::stepwise: return sw_trend(period, spec.lambda, n_periods);
    case TrendKind::inv_u: return inv_u_trend(j, spec.lambda, spec.n_peak, n_total);
    case TrendKind::seasonal: return seasonal_trend(j, spec.lambda, spec.n_wave, n_total);
  }
  return 0.0;
}

}  // namespace ncc
