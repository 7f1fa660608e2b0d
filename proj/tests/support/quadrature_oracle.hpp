#pragma once

// Independent 1-D quadrature posteriors for binomial groups with a normal
// prior on the logit. Used as reference answers for the samplers.

#include <algorithm>
#include <cmath>
#include <vector>

namespace oracle {

struct GridPosterior {
  std::vector<double> x;
  std::vector<double> density;  // normalized so that sum(density) * dx = 1
  double dx = 0.0;

  double mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) m += x[i] * density[i] * dx;
    return m;
  }
  double cdf_at(std::size_t i) const {
    double c = 0.0;
    for (std::size_t k = 0; k <= i; ++k) c += density[k] * dx;
    return c;
  }
};

// p(eta | events of n) with eta ~ N(prior_mean, prior_sd^2)
inline GridPosterior logit_posterior(double events, double n, double prior_mean, double prior_sd,
                                     double lo = -12.0, double hi = 12.0, int points = 24001) {
  GridPosterior g;
  g.dx = (hi - lo) / (points - 1);
  g.x.resize(static_cast<std::size_t>(points));
  g.density.resize(g.x.size());
  double peak = -1e300;
  std::vector<double> logd(g.x.size());
  for (int i = 0; i < points; ++i) {
    const double eta = lo + i * g.dx;
    g.x[static_cast<std::size_t>(i)] = eta;
    const double log1pexp = eta > 0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
    const double z = (eta - prior_mean) / prior_sd;
    logd[static_cast<std::size_t>(i)] = events * eta - n * log1pexp - 0.5 * z * z;
    peak = std::max(peak, logd[static_cast<std::size_t>(i)]);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    g.density[i] = std::exp(logd[i] - peak);
    total += g.density[i] * g.dx;
  }
  for (auto& d : g.density) d /= total;
  return g;
}

// P(eta_t - eta_c <= 0) for independent posteriors on the same grid.
inline double prob_not_greater(const GridPosterior& treat, const GridPosterior& ctrl) {
  double p = 0.0, cdf_t = 0.0;
  for (std::size_t i = 0; i < ctrl.x.size(); ++i) {
    cdf_t += treat.density[i] * treat.dx;
    p += ctrl.density[i] * ctrl.dx * cdf_t;
  }
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace oracle
