#include "ncc/freq_analysis.hpp"

#include <algorithm>
#include <set>

namespace ncc {

std::string treatment_label(int arm) { return "treatment" + std::to_string(arm); }

AnalysisWindow analysis_window(const TrialData& data, int arm, WindowKind kind) {
  if (!data.has_arm(arm)) throw AnalysisError("arm " + std::to_string(arm) + " not present in data");
  const ArmWindow& w = data.window(arm);
  AnalysisWindow out;
  out.arm = arm;
  std::set<int> periods;
  const auto& rows = data.rows();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const bool conc = r.period >= w.first_period && r.period <= w.last_period;
    bool keep = false;
    switch (kind) {
      case WindowKind::until_exit: keep = r.j <= w.end_j; break;
      case WindowKind::concurrent: keep = conc; break;
      case WindowKind::separate: keep = conc && (r.treatment == 0 || r.treatment == arm); break;
    }
    if (!keep) continue;
    out.rows.push_back(i);
    out.concurrent.push_back(conc);
    periods.insert(r.period);
  }
  out.periods.assign(periods.begin(), periods.end());
  return out;
}

DesignMatrix build_design(const TrialData& data, const AnalysisWindow& window,
                          bool period_adjust) {
  const auto& rows = data.rows();
  std::set<int> arm_set;
  bool has_control = false;
  for (auto i : window.rows) {
    const int t = rows[i].treatment;
    if (t == 0) {
      has_control = true;
    } else {
      arm_set.insert(t);
    }
  }
  if (!has_control) throw AnalysisError("no control participants in the analysis window");
  if (!arm_set.contains(window.arm))
    throw AnalysisError("no participants of arm " + std::to_string(window.arm) + " in window");

  std::vector<int> arms(arm_set.begin(), arm_set.end());
  std::vector<int> period_levels;
  if (period_adjust && window.periods.size() > 1)
    period_levels.assign(window.periods.begin() + 1, window.periods.end());

  DesignMatrix d;
  d.labels.push_back("(Intercept)");
  for (int a : arms) d.labels.push_back(treatment_label(a));
  for (int s : period_levels) d.labels.push_back("period" + std::to_string(s));

  const auto n = static_cast<Eigen::Index>(window.rows.size());
  d.x = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(d.labels.size()));
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& rec = rows[window.rows[static_cast<std::size_t>(r)]];
    d.x(r, 0) = 1.0;
    if (rec.treatment != 0) {
      const auto pos = std::lower_bound(arms.begin(), arms.end(), rec.treatment) - arms.begin();
      d.x(r, 1 + pos) = 1.0;
    }
    auto pit = std::lower_bound(period_levels.begin(), period_levels.end(), rec.period);
    if (pit != period_levels.end() && *pit == rec.period) {
      d.x(r, 1 + static_cast<Eigen::Index>(arms.size()) + (pit - period_levels.begin())) = 1.0;
    }
  }
  return d;
}

namespace {

AnalysisResult run_model(const TrialData& data, int arm, double alpha, Method method,
                         WindowKind kind, bool period_adjust) {
  const AnalysisWindow window = analysis_window(data, arm, kind);
  const DesignMatrix design = build_design(data, window, period_adjust);
  std::vector<double> y;
  y.reserve(window.rows.size());
  for (auto i : window.rows) y.push_back(data.rows()[i].response);

  const FitResult fit = data.endpoint() == Endpoint::binary ? fit_logistic(design, y)
                                                            : fit_linear(design, y);
  const WaldTest test = wald_one_sided(fit, treatment_label(arm), alpha);

  AnalysisResult res;
  res.p_val = test.p_val;
  res.treat_effect = test.estimate;
  res.lower_ci = test.lower_ci;
  res.upper_ci = test.upper_ci;
  res.reject_h0 = test.p_val < alpha;
  res.method = method;
  res.arm = arm;
  res.alpha = alpha;

  ModelSummary m;
  for (Eigen::Index c = 0; c < fit.coefficients.size(); ++c) {
    const double se = std::sqrt(fit.covariance(c, c));
    m.coefficients.push_back({fit.labels[static_cast<std::size_t>(c)], fit.coefficients(c), se,
                              fit.coefficients(c) / se});
  }
  m.n_obs = fit.n_obs;
  m.df_residual = fit.df_residual;
  m.log_likelihood = fit.log_likelihood;
  m.residual_variance = fit.residual_variance;
  m.iterations = fit.iterations;
  m.converged = fit.converged;
  res.model = std::move(m);
  return res;
}

}  // namespace

AnalysisResult analyze_fix(const TrialData& data, int arm, double alpha, bool ncc) {
  return run_model(data, arm, alpha, Method::fixmodel,
                   ncc ? WindowKind::until_exit : WindowKind::concurrent, true);
}

AnalysisResult analyze_sep(const TrialData& data, int arm, double alpha) {
  return run_model(data, arm, alpha, Method::sepmodel, WindowKind::separate, false);
}

AnalysisResult analyze_pool(const TrialData& data, int arm, double alpha) {
  return run_model(data, arm, alpha, Method::poolmodel, WindowKind::until_exit, false);
}

}  // namespace ncc
