#include "ncc/map_prior.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ncc/special_functions.hpp"

namespace ncc {

void MapSettings::check() const {
  if (opt != 1 && opt != 2) throw Error("opt must be 1 or 2");
  if (!(prior_prec_tau > 0.0)) throw Error("prior_prec_tau must be positive");
  if (!(prior_prec_eta > 0.0)) throw Error("prior_prec_eta must be positive");
  if (!(weight >= 0.0 && weight <= 1.0)) throw Error("weight must lie in [0, 1]");
  if (max_components < 1) throw Error("max_components must be at least 1");
}

namespace {

struct GroupStats {
  int n = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double y) {
    ++n;
    sum += y;
    sum_sq += y * y;
  }
  double mean() const { return sum / n; }
  double sd() const {
    if (n < 2) return 0.0;
    const double m = mean();
    return std::sqrt(std::max(0.0, (sum_sq - n * m * m) / (n - 1)));
  }
};

SourceSummary to_source(int period, const GroupStats& g) {
  return {period, g.n, g.sum, g.mean(), g.sd()};
}

double binomial_loglik(double events, int n, double eta) {
  return events * eta - n * stats::log1p_exp(eta);
}

double empirical_logit(double events, int n) {
  return std::log((events + 0.5) / (n - events + 0.5));
}

}  // namespace

std::vector<SourceSummary> ncc_sources(const TrialData& data, int arm, int opt) {
  if (!data.has_arm(arm)) throw AnalysisError("arm " + std::to_string(arm) + " not present in data");
  const int first = data.window(arm).first_period;
  std::map<int, GroupStats> by_period;
  GroupStats pooled;
  for (const auto& r : data.rows()) {
    if (r.treatment != 0 || r.period >= first) continue;
    by_period[r.period].add(r.response);
    pooled.add(r.response);
  }
  if (pooled.n == 0) throw NoNonConcurrentControls();

  std::vector<SourceSummary> out;
  if (opt == 1) {
    out.push_back(to_source(0, pooled));
  } else {
    for (const auto& [p, g] : by_period) out.push_back(to_source(p, g));
  }
  if (data.endpoint() == Endpoint::continuous) {
    // plug-in sd; sources too small for their own estimate use the pooled one
    double pooled_sd = pooled.sd();
    for (auto& s : out) {
      if (s.n < 2 || !(s.sd > 0.0)) s.sd = pooled_sd;
      if (!(s.sd > 0.0)) throw AnalysisError("cannot estimate the control standard deviation");
    }
  }
  return out;
}

MapPriorFit derive_map_prior(const std::vector<SourceSummary>& sources, Endpoint endpoint,
                             const MapSettings& settings, std::uint64_t seed) {
  settings.check();
  if (sources.empty()) throw NoNonConcurrentControls();
  for (const auto& s : sources)
    if (s.n < 1) throw NoNonConcurrentControls();

  const bool binary = endpoint == Endpoint::binary;
  const auto n_src = sources.size();
  const double prec_tau = settings.prior_prec_tau;
  const double prec_eta = settings.prior_prec_eta;

  mcmc::Model model;
  std::vector<double> init_eta;
  for (const auto& s : sources)
    init_eta.push_back(binary ? empirical_logit(s.events, s.n) : s.mean);
  double init_mu = 0.0;
  for (double e : init_eta) init_mu += e;
  init_mu /= static_cast<double>(n_src);

  const std::size_t i_mu = model.add_parameter("mu", init_mu);
  const std::size_t i_ltau = model.add_parameter("log_tau", std::log(1.0 / std::sqrt(prec_tau)), false);
  std::vector<std::size_t> i_eta;
  for (std::size_t s = 0; s < n_src; ++s)
    i_eta.push_back(model.add_parameter("eta[" + std::to_string(s + 1) + "]", init_eta[s]));

  auto lik = [=](std::size_t s, double eta) {
    const auto& src = sources[s];
    if (binary) return binomial_loglik(src.events, src.n, eta);
    const double z = (src.mean - eta) / src.sd;
    return -0.5 * src.n * z * z;
  };
  auto total_lik = [=](std::span<const double> st) {
    double ll = 0.0;
    for (std::size_t s = 0; s < n_src; ++s) ll += lik(s, st[i_eta[s]]);
    return ll;
  };
  // log p(eta | mu, tau) + log p(tau) + log tau, in log-tau coordinates
  auto hierarchy = [=](std::span<const double> st) {
    const double ltau = st[i_ltau];
    const double tau = std::exp(ltau);
    double lp = -0.5 * prec_tau * tau * tau + ltau;
    for (std::size_t s = 0; s < n_src; ++s) {
      const double d = (st[i_eta[s]] - st[i_mu]) / tau;
      lp += -ltau - 0.5 * d * d;
    }
    return lp;
  };

  for (std::size_t s = 0; s < n_src; ++s) {
    const std::string name = "eta[" + std::to_string(s + 1) + "]";
    if (binary) {
      const double scale = 2.0 / std::sqrt(std::max(1.0, 0.25 * sources[s].n));
      model.add_metropolis(
          name, i_eta[s],
          [=](std::span<const double> st) {
            const double tau = std::exp(st[i_ltau]);
            const double d = (st[i_eta[s]] - st[i_mu]) / tau;
            return lik(s, st[i_eta[s]]) - 0.5 * d * d;
          },
          scale);
    } else {
      model.add_gibbs(name, [=](std::span<double> st, Rng& rng) {
        const auto& src = sources[s];
        const double tau = std::exp(st[i_ltau]);
        const double prec_data = src.n / (src.sd * src.sd);
        const double prec = prec_data + 1.0 / (tau * tau);
        const double m = (prec_data * src.mean + st[i_mu] / (tau * tau)) / prec;
        st[i_eta[s]] = rng.normal(m, 1.0 / std::sqrt(prec));
      });
    }
  }

  model.add_gibbs("mu", [=](std::span<double> st, Rng& rng) {
    const double tau2 = std::exp(2.0 * st[i_ltau]);
    double sum = 0.0;
    for (std::size_t s = 0; s < n_src; ++s) sum += st[i_eta[s]];
    const double prec = static_cast<double>(n_src) / tau2 + prec_eta;
    st[i_mu] = rng.normal((sum / tau2) / prec, 1.0 / std::sqrt(prec));
  });

  model.add_metropolis("log_tau", i_ltau, hierarchy, 0.5);

  // joint moves through the hierarchy avoid the funnel when tau is small
  model.add_metropolis_move(
      "shift",
      [=](std::span<double> st, double delta) {
        st[i_mu] += delta;
        for (auto i : i_eta) st[i] += delta;
        return 0.0;
      },
      [=](std::span<const double> st) {
        return total_lik(st) - 0.5 * prec_eta * st[i_mu] * st[i_mu];
      },
      0.1);
  model.add_metropolis_move(
      "scale",
      [=](std::span<double> st, double delta) {
        st[i_ltau] += delta;
        const double f = std::exp(delta);
        for (auto i : i_eta) st[i] = st[i_mu] + (st[i] - st[i_mu]) * f;
        return static_cast<double>(n_src) * delta;
      },
      [=](std::span<const double> st) { return total_lik(st) + hierarchy(st); }, 0.3);

  model.add_derived("tau", [=](std::span<const double> st) { return std::exp(st[i_ltau]); });

  MapPriorFit fit;
  fit.samples = mcmc::run_chain(model, settings.chain, seed);

  Rng pred_rng(derive_seed(seed, 0x4d4150));
  const auto& mu = fit.samples["mu"];
  const auto& tau = fit.samples["tau"];
  fit.predictive.reserve(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i)
    fit.predictive.push_back(mu[i] + tau[i] * pred_rng.normal());
  fit.prior = fit_mixture_aic(fit.predictive, settings.max_components).mixture;
  return fit;
}

AnalysisResult analyze_concurrent_with_prior(const TrialData& data, int arm, double alpha,
                                             const MixturePrior& control_prior,
                                             double treatment_prec,
                                             const mcmc::ChainSettings& chain,
                                             std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha < 0.5)) throw Error("alpha must lie in (0, 0.5)");
  if (!(treatment_prec > 0.0)) throw Error("treatment prior precision must be positive");
  if (!data.has_arm(arm)) throw AnalysisError("arm " + std::to_string(arm) + " not present in data");
  const ArmWindow& w = data.window(arm);
  GroupStats ctrl, trt;
  for (const auto& r : data.rows()) {
    if (r.treatment == arm) {
      trt.add(r.response);
    } else if (r.treatment == 0 && r.period >= w.first_period && r.period <= w.last_period) {
      ctrl.add(r.response);
    }
  }
  if (ctrl.n == 0) throw AnalysisError("no concurrent controls for arm " + std::to_string(arm));

  const bool binary = data.endpoint() == Endpoint::binary;
  mcmc::Model model;
  const std::size_t i_c = model.add_parameter(
      "eta_control", binary ? empirical_logit(ctrl.sum, ctrl.n) : ctrl.mean());
  const std::size_t i_t = model.add_parameter(
      "eta_treatment", binary ? empirical_logit(trt.sum, trt.n) : trt.mean());

  if (binary) {
    model.add_metropolis(
        "eta_control", i_c,
        [=](std::span<const double> st) {
          return binomial_loglik(ctrl.sum, ctrl.n, st[i_c]) + control_prior.log_density(st[i_c]);
        },
        2.0 / std::sqrt(0.25 * ctrl.n));
    model.add_metropolis(
        "eta_treatment", i_t,
        [=](std::span<const double> st) {
          return binomial_loglik(trt.sum, trt.n, st[i_t]) -
                 0.5 * treatment_prec * st[i_t] * st[i_t];
        },
        2.0 / std::sqrt(0.25 * trt.n));
  } else {
    if (ctrl.n < 2 || trt.n < 2 || !(ctrl.sd() > 0.0) || !(trt.sd() > 0.0))
      throw AnalysisError("cannot estimate group standard deviations");
    const MixturePrior ctrl_post =
        posterior_mixture(control_prior, ctrl.mean(), ctrl.sd() / std::sqrt(ctrl.n));
    model.add_gibbs("eta_control", [=](std::span<double> st, Rng& rng) {
      const auto& comps = ctrl_post.components();
      double u = rng.uniform();
      std::size_t pick = comps.size() - 1;
      for (std::size_t i = 0; i < comps.size(); ++i) {
        if (u < comps[i].weight) {
          pick = i;
          break;
        }
        u -= comps[i].weight;
      }
      st[i_c] = rng.normal(comps[pick].mean, comps[pick].sd);
    });
    const double prec_data = trt.n / (trt.sd() * trt.sd());
    const double post_prec = prec_data + treatment_prec;
    const double post_mean = prec_data * trt.mean() / post_prec;
    model.add_gibbs("eta_treatment", [=](std::span<double> st, Rng& rng) {
      st[i_t] = rng.normal(post_mean, 1.0 / std::sqrt(post_prec));
    });
  }
  model.add_derived("effect", [=](std::span<const double> st) { return st[i_t] - st[i_c]; });

  const auto samples = mcmc::run_chain(model, chain, seed);
  const auto s = mcmc::summarize(samples, "effect", alpha);

  AnalysisResult res;
  res.p_val = s.tail_prob;
  res.treat_effect = s.mean;
  res.lower_ci = s.lower;
  res.upper_ci = s.upper;
  res.reject_h0 = res.p_val < alpha;
  res.method = Method::mapprior;
  res.arm = arm;
  res.alpha = alpha;
  SamplerSummary sum;
  sum.draws = samples.size();
  sum.effective_draws = mcmc::effective_draws(samples["effect"]);
  for (const auto& b : samples.blocks) sum.acceptance.push_back({b.block, b.acceptance});
  res.sampler = std::move(sum);
  return res;
}

MapAnalysis analyze_map_detailed(const TrialData& data, int arm, double alpha,
                                 const MapSettings& settings, std::uint64_t seed) {
  settings.check();
  const auto sources = ncc_sources(data, arm, settings.opt);
  MapPriorFit fit = derive_map_prior(sources, data.endpoint(), settings, derive_seed(seed, 1));
  const double vague_sd = 1.0 / std::sqrt(settings.prior_prec_eta);
  MixturePrior used = settings.robustify ? robustify(fit.prior, settings.weight, vague_sd) : fit.prior;
  MapAnalysis out{analyze_concurrent_with_prior(data, arm, alpha, used, settings.prior_prec_eta,
                                                settings.chain, derive_seed(seed, 2)),
                  fit.prior, used};
  if (out.result.sampler) {
    for (const auto& b : fit.samples.blocks)
      out.result.sampler->acceptance.push_back({"map:" + b.block, b.acceptance});
  }
  return out;
}

AnalysisResult analyze_map(const TrialData& data, int arm, double alpha,
                           const MapSettings& settings, std::uint64_t seed) {
  return analyze_map_detailed(data, arm, alpha, settings, seed).result;
}

}  // namespace ncc
