#include "ncc/time_machine.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "json.hpp"
#include "ncc/special_functions.hpp"

namespace ncc {

void TimeMachineSettings::check() const {
  if (!(prec_theta > 0.0) || !(prec_eta > 0.0) || !(tau_a > 0.0) || !(tau_b > 0.0) ||
      !(prec_a > 0.0) || !(prec_b > 0.0))
    throw Error("time machine prior parameters must be positive");
  if (bucket_size < 1) throw Error("bucket_size must be at least 1");
}

std::vector<int> bucketize(int n, int bucket_size) {
  if (n < 1) throw Error("bucketize: need at least one participant");
  if (bucket_size < 1) throw Error("bucketize: bucket_size must be at least 1");
  std::vector<int> out(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) out[static_cast<std::size_t>(j - 1)] = (n - j) / bucket_size + 1;
  return out;
}

namespace {

// Sufficient statistics of one (bucket, arm) cell.
struct Cell {
  int bucket = 1;
  int arm_slot = 0;  // 0 = control, otherwise 1 + position in the arm list
  int n = 0;
  double sum = 0.0;
  double mean = 0.0;
  double m2 = 0.0;  // sum of squared deviations from the cell mean

  void add(double y) {
    ++n;
    sum += y;
    const double d = y - mean;
    mean += d / n;
    m2 += d * (y - mean);
  }
};

// Layout of the linear coefficient vector [eta0, theta..., alpha_2..alpha_C].
struct Layout {
  int n_arms = 0;
  int n_buckets = 1;
  Eigen::Index dim() const { return 1 + n_arms + (n_buckets - 1); }
  Eigen::Index theta_col(int slot) const { return slot; }  // slot >= 1
  Eigen::Index alpha_col(int bucket) const { return 1 + n_arms + (bucket - 2); }  // bucket >= 2
};

// Precision of the second-order random walk on alpha_2..alpha_C (alpha_1 = 0)
// at tau = 1.
Eigen::MatrixXd rw2_structure(int n_buckets) {
  const int m = n_buckets - 1;
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m, m);
  for (int r = 0; r < m; ++r) {
    // row r is the increment for bucket c = r + 2
    d(r, r) = 1.0;
    if (r >= 1) d(r, r - 1) = -2.0;
    if (r >= 2) d(r, r - 2) = 1.0;
  }
  return d.transpose() * d;
}

struct TmModel {
  mcmc::Model model;
  std::vector<std::size_t> beta_index;  // state index per linear coefficient
  std::vector<std::size_t> alpha_index; // alpha_1..alpha_C
  std::size_t tau_index = 0;
};

enum class Likelihood { none, binary, continuous };

TmModel build_model(const std::vector<Cell>& cells, const std::vector<int>& arms, int n_buckets,
                    Likelihood lik, const TimeMachineSettings& settings, double init_level,
                    double init_precision) {
  TmModel tm;
  Layout layout{static_cast<int>(arms.size()), n_buckets};
  auto& model = tm.model;

  tm.beta_index.push_back(model.add_parameter("eta0", init_level));
  for (int a : arms) tm.beta_index.push_back(model.add_parameter("theta[" + std::to_string(a) + "]", 0.0));
  tm.alpha_index.push_back(model.add_parameter("alpha[1]", 0.0));
  for (int c = 2; c <= n_buckets; ++c) {
    const auto idx = model.add_parameter("alpha[" + std::to_string(c) + "]", 0.0);
    tm.alpha_index.push_back(idx);
    tm.beta_index.push_back(idx);
  }
  tm.tau_index = model.add_parameter("tau", settings.tau_a / settings.tau_b);
  std::size_t phi_index = 0;
  if (lik == Likelihood::continuous) phi_index = model.add_parameter("phi", init_precision);
  std::vector<std::size_t> omega_index;
  if (lik == Likelihood::binary) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      omega_index.push_back(
          model.add_parameter("omega[" + std::to_string(i + 1) + "]", 0.25 * cells[i].n, false));
  }

  // sparse design rows: at most three unit entries per cell
  std::vector<std::vector<Eigen::Index>> rows;
  for (const auto& c : cells) {
    std::vector<Eigen::Index> r{0};
    if (c.arm_slot > 0) r.push_back(layout.theta_col(c.arm_slot));
    if (c.bucket > 1) r.push_back(layout.alpha_col(c.bucket));
    rows.push_back(std::move(r));
  }
  auto cell_predictor = [rows, bi = tm.beta_index](std::span<const double> st, std::size_t i) {
    double eta = 0.0;
    for (auto col : rows[i]) eta += st[bi[static_cast<std::size_t>(col)]];
    return eta;
  };

  const Eigen::MatrixXd rw2 = rw2_structure(n_buckets);
  const Eigen::Index p = layout.dim();
  const auto beta_index = tm.beta_index;
  const auto tau_index = tm.tau_index;

  if (lik == Likelihood::binary) {
    model.add_gibbs("omega", [=](std::span<double> st, Rng& rng) {
      for (std::size_t i = 0; i < cells.size(); ++i)
        st[omega_index[i]] = mcmc::polya_gamma(cells[i].n, cell_predictor(st, i), rng);
    });
  }

  model.add_gibbs("linear", [=](std::span<double> st, Rng& rng) {
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(p, p);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(p);
    q(0, 0) = settings.prec_eta;
    for (Eigen::Index k = 1; k <= layout.n_arms; ++k) q(k, k) = settings.prec_theta;
    if (n_buckets > 1) {
      const Eigen::Index a0 = 1 + layout.n_arms;
      q.block(a0, a0, n_buckets - 1, n_buckets - 1) += st[tau_index] * rw2;
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
      double w, t;
      if (lik == Likelihood::binary) {
        w = st[omega_index[i]];
        t = cells[i].sum - 0.5 * cells[i].n;
      } else {
        w = st[phi_index] * cells[i].n;
        t = st[phi_index] * cells[i].sum;
      }
      for (auto r1 : rows[i]) {
        b(r1) += t;
        for (auto r2 : rows[i]) q(r1, r2) += w;
      }
    }
    Eigen::VectorXd draw;
    if (!mcmc::sample_gaussian_canonical(q, b, rng, draw)) throw DivergentChain("linear");
    for (Eigen::Index k = 0; k < p; ++k) st[beta_index[static_cast<std::size_t>(k)]] = draw(k);
  });

  const auto alpha_index = tm.alpha_index;
  model.add_gibbs("tau", [=](std::span<double> st, Rng& rng) {
    double quad = 0.0;
    if (n_buckets > 1) {
      Eigen::VectorXd a(n_buckets - 1);
      for (int c = 2; c <= n_buckets; ++c) a(c - 2) = st[alpha_index[static_cast<std::size_t>(c - 1)]];
      quad = a.dot(rw2 * a);
    }
    st[tau_index] = rng.gamma(settings.tau_a + 0.5 * (n_buckets - 1), settings.tau_b + 0.5 * quad);
  });

  if (lik == Likelihood::continuous) {
    int total_n = 0;
    for (const auto& c : cells) total_n += c.n;
    model.add_gibbs("phi", [=](std::span<double> st, Rng& rng) {
      double rss = 0.0;
      for (std::size_t i = 0; i < cells.size(); ++i) {
        const double d = cells[i].mean - cell_predictor(st, i);
        rss += cells[i].m2 + cells[i].n * d * d;
      }
      st[phi_index] = rng.gamma(settings.prec_a + 0.5 * total_n, settings.prec_b + 0.5 * rss);
    });
  }
  return tm;
}

}  // namespace

TimeMachineAnalysis analyze_timemachine_detailed(const TrialData& data, int arm, double alpha,
                                                 const TimeMachineSettings& settings,
                                                 std::uint64_t seed) {
  settings.check();
  if (!(alpha > 0.0 && alpha < 0.5)) throw Error("alpha must lie in (0, 0.5)");
  if (!data.has_arm(arm)) throw AnalysisError("arm " + std::to_string(arm) + " not present in data");
  const int n_window = data.window(arm).end_j;
  const auto buckets = bucketize(n_window, settings.bucket_size);
  const int n_buckets = bucket_count(n_window, settings.bucket_size);

  std::vector<int> arms;
  for (int j = 1; j <= n_window; ++j) {
    const int t = data.rows()[static_cast<std::size_t>(j - 1)].treatment;
    if (t > 0 && std::find(arms.begin(), arms.end(), t) == arms.end()) arms.push_back(t);
  }
  std::sort(arms.begin(), arms.end());

  const int slots = static_cast<int>(arms.size()) + 1;
  std::vector<Cell> grid(static_cast<std::size_t>(n_buckets * slots));
  double level = 0.0;
  int n_ctrl = 0;
  Cell overall;
  for (int j = 1; j <= n_window; ++j) {
    const auto& r = data.rows()[static_cast<std::size_t>(j - 1)];
    const int slot = r.treatment == 0
                         ? 0
                         : 1 + static_cast<int>(std::lower_bound(arms.begin(), arms.end(), r.treatment) -
                                                arms.begin());
    const int c = buckets[static_cast<std::size_t>(j - 1)];
    auto& cell = grid[static_cast<std::size_t>((c - 1) * slots + slot)];
    cell.bucket = c;
    cell.arm_slot = slot;
    cell.add(r.response);
    overall.add(r.response);
    if (r.treatment == 0) {
      level += r.response;
      ++n_ctrl;
    }
  }
  std::vector<Cell> cells;
  for (const auto& c : grid)
    if (c.n > 0) cells.push_back(c);

  const bool binary = data.endpoint() == Endpoint::binary;
  double init_level;
  double init_prec = 1.0;
  if (binary) {
    const double p = (level + 0.5) / (n_ctrl + 1.0);
    init_level = stats::logit(p);
  } else {
    init_level = n_ctrl > 0 ? level / n_ctrl : overall.mean;
    const double var = overall.n > 1 ? overall.m2 / (overall.n - 1) : 1.0;
    init_prec = var > 0.0 ? 1.0 / var : 1.0;
  }

  TmModel tm = build_model(cells, arms, n_buckets, binary ? Likelihood::binary : Likelihood::continuous,
                           settings, init_level, init_prec);

  TimeMachineAnalysis out;
  out.arms = arms;
  out.samples = mcmc::run_chain(tm.model, settings.chain, seed);
  const auto s = mcmc::summarize(out.samples, "theta[" + std::to_string(arm) + "]", alpha);

  auto& res = out.result;
  res.p_val = s.tail_prob;
  res.treat_effect = s.mean;
  res.lower_ci = s.lower;
  res.upper_ci = s.upper;
  res.reject_h0 = res.p_val < alpha;
  res.method = Method::timemachine;
  res.arm = arm;
  res.alpha = alpha;
  SamplerSummary sum;
  sum.draws = out.samples.size();
  sum.effective_draws = mcmc::effective_draws(out.samples["theta[" + std::to_string(arm) + "]"]);
  for (const auto& b : out.samples.blocks) sum.acceptance.push_back({b.block, b.acceptance});
  res.sampler = std::move(sum);

  for (int c = 1; c <= n_buckets; ++c) {
    const auto bs = mcmc::summarize(out.samples, "alpha[" + std::to_string(c) + "]", alpha);
    out.bucket_effects.push_back({c, bs.mean, bs.lower, bs.upper});
  }
  return out;
}

AnalysisResult analyze_timemachine(const TrialData& data, int arm, double alpha,
                                   const TimeMachineSettings& settings, std::uint64_t seed) {
  return analyze_timemachine_detailed(data, arm, alpha, settings, seed).result;
}

mcmc::PosteriorSamples sample_time_machine_prior(int n_buckets, const TimeMachineSettings& settings,
                                                 std::uint64_t seed) {
  settings.check();
  if (n_buckets < 1) throw Error("need at least one bucket");
  TmModel tm = build_model({}, {}, n_buckets, Likelihood::none, settings, 0.0, 1.0);
  return mcmc::run_chain(tm.model, settings.chain, seed);
}

std::string bucket_effects_to_json(const std::vector<BucketEffect>& effects) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& e : effects)
    arr.push_back({{"bucket", e.bucket}, {"mean", e.mean}, {"lower", e.lower}, {"upper", e.upper}});
  return arr.dump(2);
}

}  // namespace ncc
