#include "ncc/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "ncc/errors.hpp"
#include "ncc/trial_io.hpp"

namespace ncc::mcmc {

std::size_t Model::add_parameter(std::string name, double init, bool monitored) {
  if (std::find(names_.begin(), names_.end(), name) != names_.end())
    throw Error("duplicate parameter '" + name + "'");
  names_.push_back(std::move(name));
  init_.push_back(init);
  monitored_.push_back(monitored);
  return names_.size() - 1;
}

void Model::add_gibbs(std::string block, GibbsUpdate update) {
  Block b;
  b.name = std::move(block);
  b.gibbs = true;
  b.update = std::move(update);
  blocks_.push_back(std::move(b));
}

void Model::add_metropolis(std::string block, std::size_t index, LogDensity log_density,
                           double initial_scale) {
  if (index >= names_.size()) throw Error("metropolis block '" + block + "' has bad index");
  add_metropolis_move(
      std::move(block),
      [index](std::span<double> s, double delta) {
        s[index] += delta;
        return 0.0;
      },
      std::move(log_density), initial_scale);
}

void Model::add_metropolis_move(std::string block, Perturbation move, LogDensity log_density,
                                double initial_scale) {
  if (!(initial_scale > 0.0)) throw Error("proposal scale must be positive");
  Block b;
  b.name = std::move(block);
  b.move = std::move(move);
  b.log_density = std::move(log_density);
  b.scale = initial_scale;
  blocks_.push_back(std::move(b));
}

void Model::add_derived(std::string name, Derived fn) {
  derived_.emplace_back(std::move(name), std::move(fn));
}

std::size_t Model::index_of(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw Error("unknown parameter '" + name + "'");
  return static_cast<std::size_t>(it - names_.begin());
}

bool PosteriorSamples::contains(const std::string& name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

const std::vector<double>& PosteriorSamples::operator[](const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw Error("no draws recorded for '" + name + "'");
  return draws_[static_cast<std::size_t>(it - names_.begin())];
}

void PosteriorSamples::write_csv(std::ostream& os) const {
  for (std::size_t c = 0; c < names_.size(); ++c) os << (c ? "," : "") << names_[c];
  os << '\n';
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t c = 0; c < names_.size(); ++c)
      os << (c ? "," : "") << format_double(draws_[c][i]);
    os << '\n';
  }
}

class Chain {
 public:
  static PosteriorSamples run(const Model& model, const ChainSettings& settings,
                              std::uint64_t seed) {
    if (settings.draws < 1 || settings.burn_in < 0 || settings.thin < 1)
      throw Error("invalid chain settings");
    Rng rng(seed);
    std::vector<double> state = model.init_;
    std::vector<double> scale;
    for (const auto& b : model.blocks_) scale.push_back(b.scale);
    std::vector<long> accepted(model.blocks_.size(), 0);
    std::vector<long> attempted(model.blocks_.size(), 0);
    std::vector<long> batch_acc(model.blocks_.size(), 0);

    PosteriorSamples out;
    out.seed = seed;
    out.burn_in = settings.burn_in;
    out.thin = settings.thin;
    out.iterations = settings.burn_in + settings.draws * settings.thin;
    std::vector<std::size_t> monitored;
    for (std::size_t i = 0; i < model.names_.size(); ++i) {
      if (model.monitored_[i]) {
        monitored.push_back(i);
        out.names_.push_back(model.names_[i]);
      }
    }
    for (const auto& d : model.derived_) out.names_.push_back(d.first);
    out.draws_.assign(out.names_.size(), {});
    for (auto& v : out.draws_) v.reserve(static_cast<std::size_t>(settings.draws));

    std::vector<double> proposal(state.size());
    int batch_count = 0;
    for (int it = 0; it < out.iterations; ++it) {
      const bool burning = it < settings.burn_in;
      for (std::size_t bi = 0; bi < model.blocks_.size(); ++bi) {
        const auto& block = model.blocks_[bi];
        if (block.gibbs) {
          block.update(state, rng);
          for (double v : state)
            if (!std::isfinite(v)) throw DivergentChain(block.name);
          continue;
        }
        const double current = block.log_density(state);
        if (!std::isfinite(current)) throw DivergentChain(block.name);
        proposal = state;
        const double delta = scale[bi] * rng.normal();
        const double log_jac = block.move(proposal, delta);
        const double cand = block.log_density(proposal);
        if (std::isnan(cand)) throw DivergentChain(block.name);
        const double log_ratio = cand - current + log_jac;
        const bool accept = log_ratio >= 0.0 || std::log(rng.uniform_open()) < log_ratio;
        if (accept) std::swap(state, proposal);
        if (burning) {
          batch_acc[bi] += accept ? 1 : 0;
        } else {
          accepted[bi] += accept ? 1 : 0;
          ++attempted[bi];
        }
      }

      if (burning && ++batch_count == settings.adapt_batch) {
        // diminishing log-scale adjustments toward the target rate
        const int batch_index = (it + 1) / settings.adapt_batch;
        const double step = std::min(0.05, 1.0 / std::sqrt(static_cast<double>(batch_index)));
        for (std::size_t bi = 0; bi < model.blocks_.size(); ++bi) {
          if (model.blocks_[bi].gibbs) continue;
          const double rate = static_cast<double>(batch_acc[bi]) / settings.adapt_batch;
          scale[bi] *= std::exp(rate > settings.target_acceptance ? step : -step);
          batch_acc[bi] = 0;
        }
        batch_count = 0;
      }

      if (!burning && (it - settings.burn_in + 1) % settings.thin == 0) {
        std::size_t c = 0;
        for (auto idx : monitored) out.draws_[c++].push_back(state[idx]);
        for (const auto& d : model.derived_) out.draws_[c++].push_back(d.second(state));
      }
    }

    for (std::size_t bi = 0; bi < model.blocks_.size(); ++bi) {
      if (model.blocks_[bi].gibbs) continue;
      const double rate = attempted[bi] ? static_cast<double>(accepted[bi]) / attempted[bi] : 0.0;
      out.blocks.push_back({model.blocks_[bi].name, rate, scale[bi]});
    }
    return out;
  }
};

PosteriorSamples run_chain(const Model& model, const ChainSettings& settings,
                           std::uint64_t seed) {
  return Chain::run(model, settings, seed);
}

double mean(std::span<const double> draws) {
  if (draws.empty()) throw Error("no draws");
  return std::accumulate(draws.begin(), draws.end(), 0.0) / static_cast<double>(draws.size());
}

double variance(std::span<const double> draws) {
  if (draws.size() < 2) return 0.0;
  const double m = mean(draws);
  double ss = 0.0;
  for (double d : draws) ss += (d - m) * (d - m);
  return ss / static_cast<double>(draws.size() - 1);
}

double quantile(std::span<const double> draws, double prob) {
  if (draws.empty()) throw Error("no draws");
  std::vector<double> sorted(draws.begin(), draws.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = std::clamp(prob, 0.0, 1.0) * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

Summary summarize(std::span<const double> draws, double alpha) {
  if (draws.empty()) throw Error("no draws");
  std::vector<double> sorted(draws.begin(), draws.end());
  std::sort(sorted.begin(), sorted.end());
  auto q = [&](double prob) {
    const double pos = prob * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
  };
  Summary s;
  const auto nonpos = std::upper_bound(sorted.begin(), sorted.end(), 0.0) - sorted.begin();
  s.tail_prob = static_cast<double>(nonpos) / static_cast<double>(sorted.size());
  s.mean = mean(draws);
  s.lower = q(alpha);
  s.upper = q(1.0 - alpha);
  return s;
}

Summary summarize(const PosteriorSamples& samples, const std::string& parameter, double alpha) {
  return summarize(samples[parameter], alpha);
}

double mc_standard_error(std::span<const double> draws) {
  const std::size_t n = draws.size();
  if (n < 4) return std::sqrt(variance(draws) / static_cast<double>(std::max<std::size_t>(n, 1)));
  const auto batch = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
  const std::size_t nb = n / batch;
  std::vector<double> means;
  means.reserve(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    double s = 0.0;
    for (std::size_t i = b * batch; i < (b + 1) * batch; ++i) s += draws[i];
    means.push_back(s / static_cast<double>(batch));
  }
  return std::sqrt(variance(means) / static_cast<double>(nb));
}

double effective_draws(std::span<const double> draws) {
  const double se = mc_standard_error(draws);
  const auto n = static_cast<double>(draws.size());
  if (!(se > 0.0)) return n;
  return std::min(n, variance(draws) / (se * se));
}

ChainAgreement check_chain_agreement(const Model& model, const ChainSettings& settings,
                                     std::uint64_t seed, const std::string& parameter) {
  const auto first = run_chain(model, settings, seed);
  const auto second = run_chain(model, settings, derive_seed(seed, 2));
  ChainAgreement out;
  const auto& a = first[parameter];
  const auto& b = second[parameter];
  out.mean_first = mean(a);
  out.mean_second = mean(b);
  const double sa = mc_standard_error(a);
  const double sb = mc_standard_error(b);
  out.combined_se = std::sqrt(sa * sa + sb * sb);
  out.agree = std::fabs(out.mean_first - out.mean_second) < 3.0 * out.combined_se;
  return out;
}

}  // namespace ncc::mcmc

namespace ncc::mcmc {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTrunc = 0.64;

double exp_draw(Rng& rng) { return -std::log(rng.uniform_open()); }

// Coefficients of the alternating series for the J*(1, z) density.
double series_coef(int n, double x) {
  const double k = kPi * (n + 0.5);
  if (x > kTrunc) return k * std::exp(-0.5 * k * k * x);
  const double e = -1.5 * (std::log(0.5 * kPi) + std::log(x)) + std::log(k) -
                   2.0 * (n + 0.5) * (n + 0.5) / x;
  return std::exp(e);
}

double log_normal_cdf(double x) {
  return std::log(0.5 * std::erfc(-x / std::sqrt(2.0)));
}

// Probability of drawing from the exponential piece of the proposal.
double exp_piece_mass(double z) {
  const double t = kTrunc;
  const double fz = kPi * kPi / 8.0 + z * z / 2.0;
  const double b = std::sqrt(1.0 / t) * (t * z - 1.0);
  const double a = -std::sqrt(1.0 / t) * (t * z + 1.0);
  const double x0 = std::log(fz) + fz * t;
  const double xb = x0 - z + log_normal_cdf(b);
  const double xa = x0 + z + log_normal_cdf(a);
  const double q_over_p = 4.0 / kPi * (std::exp(xb) + std::exp(xa));
  return 1.0 / (1.0 + q_over_p);
}

// Inverse Gaussian(1/z, 1) truncated to (0, kTrunc).
double truncated_inv_gauss(double z, Rng& rng) {
  const double mu = 1.0 / z;
  const double r = kTrunc;
  double x = r + 1.0;
  if (mu > r) {
    double alpha = 0.0;
    while (rng.uniform() > alpha) {
      double e1 = exp_draw(rng);
      double e2 = exp_draw(rng);
      while (e1 * e1 > 2.0 * e2 / r) {
        e1 = exp_draw(rng);
        e2 = exp_draw(rng);
      }
      x = r / ((1.0 + r * e1) * (1.0 + r * e1));
      alpha = std::exp(-0.5 * z * z * x);
    }
  } else {
    while (x > r) {
      const double n = rng.normal();
      const double y = n * n;
      x = mu + 0.5 * mu * mu * y - 0.5 * mu * std::sqrt(4.0 * mu * y + (mu * y) * (mu * y));
      if (rng.uniform() > mu / (mu + x)) x = mu * mu / x;
    }
  }
  return x;
}

}  // namespace

double polya_gamma_1(double z, Rng& rng) {
  z = 0.5 * std::fabs(z);
  const double fz = kPi * kPi / 8.0 + z * z / 2.0;
  const double mass = exp_piece_mass(z);
  for (;;) {
    double x;
    if (rng.uniform() < mass) {
      x = kTrunc + exp_draw(rng) / fz;
    } else {
      x = truncated_inv_gauss(z, rng);
    }
    double s = series_coef(0, x);
    const double y = rng.uniform() * s;
    for (int n = 1;; ++n) {
      if (n % 2 == 1) {
        s -= series_coef(n, x);
        if (y <= s) return 0.25 * x;
      } else {
        s += series_coef(n, x);
        if (y > s) break;
      }
    }
  }
}

double polya_gamma(int n, double z, Rng& rng) {
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += polya_gamma_1(z, rng);
  return sum;
}

bool sample_gaussian_canonical(const Eigen::MatrixXd& precision, const Eigen::VectorXd& linear,
                               Rng& rng, Eigen::VectorXd& out) {
  Eigen::LLT<Eigen::MatrixXd> llt(precision);
  if (llt.info() != Eigen::Success) return false;
  const Eigen::VectorXd mean = llt.solve(linear);
  Eigen::VectorXd z(linear.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
  // Q = L L^T, so L^{-T} z has covariance Q^{-1}
  out = mean + llt.matrixU().solve(z);
  return out.allFinite();
}

}  // namespace ncc::mcmc
