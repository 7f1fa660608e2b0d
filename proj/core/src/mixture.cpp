#include "ncc/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "json.hpp"
#include "ncc/errors.hpp"

namespace ncc {

namespace {

double log_normal_pdf(double x, double m, double sd) {
  const double z = (x - m) / sd;
  return -0.5 * z * z - std::log(sd) - 0.5 * std::log(2.0 * std::numbers::pi);
}

double log_sum_exp(std::span<const double> v) {
  const double m = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace

MixturePrior::MixturePrior(std::vector<MixtureComponent> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw Error("mixture needs at least one component");
  double total = 0.0;
  for (const auto& c : components_) {
    if (!(c.weight > 0.0) || !(c.sd > 0.0) || !std::isfinite(c.mean))
      throw Error("mixture components need positive weight and sd, finite mean");
    total += c.weight;
  }
  if (std::fabs(total - 1.0) > 1e-9) {
    for (auto& c : components_) c.weight /= total;
  }
}

double MixturePrior::log_density(double x) const {
  std::vector<double> terms;
  terms.reserve(components_.size());
  for (const auto& c : components_) terms.push_back(std::log(c.weight) + log_normal_pdf(x, c.mean, c.sd));
  return log_sum_exp(terms);
}

double MixturePrior::mean() const {
  double m = 0.0;
  for (const auto& c : components_) m += c.weight * c.mean;
  return m;
}

double MixturePrior::variance() const {
  const double m = mean();
  double v = 0.0;
  for (const auto& c : components_) v += c.weight * (c.sd * c.sd + (c.mean - m) * (c.mean - m));
  return v;
}

std::string MixturePrior::to_json() const {
  nlohmann::ordered_json doc;
  std::vector<double> w, m, s;
  for (const auto& c : components_) {
    w.push_back(c.weight);
    m.push_back(c.mean);
    s.push_back(c.sd);
  }
  doc["weights"] = w;
  doc["means"] = m;
  doc["sds"] = s;
  return doc.dump(2);
}

MixturePrior robustify(const MixturePrior& prior, double weight, double vague_sd) {
  if (!(weight >= 0.0 && weight <= 1.0)) throw Error("robust weight must lie in [0, 1]");
  if (!(vague_sd > 0.0)) throw Error("vague component sd must be positive");
  if (weight == 0.0) return prior;
  if (weight == 1.0) return MixturePrior({{1.0, 0.0, vague_sd}});
  std::vector<MixtureComponent> comps;
  for (auto c : prior.components()) {
    c.weight *= (1.0 - weight);
    comps.push_back(c);
  }
  comps.push_back({weight, 0.0, vague_sd});
  return MixturePrior(std::move(comps));
}

MixturePrior posterior_mixture(const MixturePrior& prior, double obs, double obs_se) {
  if (!(obs_se > 0.0)) throw Error("observation standard error must be positive");
  std::vector<double> log_w;
  std::vector<MixtureComponent> comps;
  for (const auto& c : prior.components()) {
    const double v0 = c.sd * c.sd;
    const double v1 = obs_se * obs_se;
    const double post_var = 1.0 / (1.0 / v0 + 1.0 / v1);
    const double post_mean = post_var * (c.mean / v0 + obs / v1);
    // marginal likelihood of obs under this component
    log_w.push_back(std::log(c.weight) + log_normal_pdf(obs, c.mean, std::sqrt(v0 + v1)));
    comps.push_back({0.0, post_mean, std::sqrt(post_var)});
  }
  const double norm = log_sum_exp(log_w);
  for (std::size_t i = 0; i < comps.size(); ++i) comps[i].weight = std::exp(log_w[i] - norm);
  // drop components whose weight underflowed
  std::erase_if(comps, [](const MixtureComponent& c) { return !(c.weight > 0.0); });
  return MixturePrior(std::move(comps));
}

MixtureFit fit_normal_mixture(std::span<const double> x, int k, int max_iterations,
                              double tolerance) {
  const auto n = x.size();
  if (k < 1) throw Error("mixture needs at least one component");
  if (n < static_cast<std::size_t>(3 * k)) throw Error("too few draws for the mixture fit");

  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  const double total_mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / n;
  double total_var = 0.0;
  for (double v : sorted) total_var += (v - total_mean) * (v - total_mean);
  total_var /= static_cast<double>(n);
  const double sd_floor = std::max(1e-6 * std::sqrt(total_var), 1e-12);

  std::vector<MixtureComponent> comps(static_cast<std::size_t>(k));
  for (int c = 0; c < k; ++c) {
    const auto lo = n * static_cast<std::size_t>(c) / static_cast<std::size_t>(k);
    const auto hi = n * static_cast<std::size_t>(c + 1) / static_cast<std::size_t>(k);
    double m = 0.0;
    for (auto i = lo; i < hi; ++i) m += sorted[i];
    m /= static_cast<double>(hi - lo);
    double v = 0.0;
    for (auto i = lo; i < hi; ++i) v += (sorted[i] - m) * (sorted[i] - m);
    v /= static_cast<double>(hi - lo);
    comps[static_cast<std::size_t>(c)] = {1.0 / k, m, std::max(std::sqrt(v), sd_floor)};
  }

  MixtureFit fit;
  std::vector<double> resp(n * static_cast<std::size_t>(k));
  std::vector<double> terms(static_cast<std::size_t>(k));
  double prev_ll = -std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iterations; ++it) {
    // E step
    double ll = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (int c = 0; c < k; ++c) {
        const auto& cc = comps[static_cast<std::size_t>(c)];
        terms[static_cast<std::size_t>(c)] = std::log(cc.weight) + log_normal_pdf(x[i], cc.mean, cc.sd);
      }
      const double lse = log_sum_exp(terms);
      ll += lse;
      for (int c = 0; c < k; ++c)
        resp[i * static_cast<std::size_t>(k) + static_cast<std::size_t>(c)] =
            std::exp(terms[static_cast<std::size_t>(c)] - lse);
    }
    fit.log_likelihood_trace.push_back(ll);
    fit.iterations = it + 1;
    fit.log_likelihood = ll;
    if (std::fabs(ll - prev_ll) < tolerance * (std::fabs(ll) + 1.0)) break;
    prev_ll = ll;

    // M step
    for (int c = 0; c < k; ++c) {
      double nk = 0.0, sx = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double r = resp[i * static_cast<std::size_t>(k) + static_cast<std::size_t>(c)];
        nk += r;
        sx += r * x[i];
      }
      auto& cc = comps[static_cast<std::size_t>(c)];
      if (nk < 1e-12) {
        cc.weight = 1e-12;
        continue;
      }
      const double m = sx / nk;
      double sv = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double r = resp[i * static_cast<std::size_t>(k) + static_cast<std::size_t>(c)];
        sv += r * (x[i] - m) * (x[i] - m);
      }
      cc.weight = nk / static_cast<double>(n);
      cc.mean = m;
      cc.sd = std::max(std::sqrt(sv / nk), sd_floor);
    }
  }
  fit.mixture = MixturePrior(std::move(comps));
  // free parameters: k means, k sds, k - 1 weights
  fit.aic = 2.0 * (3 * k - 1) - 2.0 * fit.log_likelihood;
  return fit;
}

MixtureFit fit_mixture_aic(std::span<const double> x, int max_components) {
  MixtureFit best = fit_normal_mixture(x, 1);
  for (int k = 2; k <= max_components; ++k) {
    MixtureFit cand = fit_normal_mixture(x, k);
    if (cand.aic < best.aic) best = std::move(cand);
  }
  return best;
}

}  // namespace ncc
