#include "ncc/glm.hpp"

#include <algorithm>
#include <cmath>

#include "ncc/errors.hpp"
#include "ncc/special_functions.hpp"

namespace ncc {

Eigen::Index DesignMatrix::column(const std::string& label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw Error("no design column labelled '" + label + "'");
  return static_cast<Eigen::Index>(it - labels.begin());
}

double FitResult::coefficient(const std::string& label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw Error("no coefficient labelled '" + label + "'");
  return coefficients(it - labels.begin());
}

double FitResult::std_error(const std::string& label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw Error("no coefficient labelled '" + label + "'");
  const auto i = it - labels.begin();
  return std::sqrt(covariance(i, i));
}

Eigen::Index numerical_rank(const Eigen::MatrixXd& x) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  return qr.rank();
}

namespace {

void check_shape(const DesignMatrix& design, std::span<const double> y) {
  if (design.rows() != static_cast<Eigen::Index>(y.size()))
    throw Error("design has " + std::to_string(design.rows()) + " rows but response has " +
                std::to_string(y.size()));
  if (static_cast<Eigen::Index>(design.labels.size()) != design.cols())
    throw Error("design labels do not match its column count");
  if (design.rows() == 0) throw Error("no observations");
  if (numerical_rank(design.x) < design.cols()) throw SingularDesign();
}

double binomial_deviance(const Eigen::VectorXd& eta, const Eigen::VectorXd& y) {
  // -2 * sum[y*eta - log(1 + e^eta)]
  double ll = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) ll += y(i) * eta(i) - stats::log1p_exp(eta(i));
  return -2.0 * ll;
}

}  // namespace

FitResult fit_logistic(const DesignMatrix& design, std::span<const double> y_in,
                       const IrlsOptions& options) {
  check_shape(design, y_in);
  const Eigen::MatrixXd& x = design.x;
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(y_in.data(), n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (y(i) != 0.0 && y(i) != 1.0) throw Error("logistic response must be 0 or 1");
  }

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd eta = x * beta;
  double dev = binomial_deviance(eta, y);

  FitResult fit;
  fit.family = Family::binomial;
  fit.labels = design.labels;
  fit.n_obs = static_cast<int>(n);
  fit.df_residual = static_cast<int>(n - p);
  fit.deviance_trace.push_back(dev);

  Eigen::VectorXd mu(n), w(n), z(n);
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    for (Eigen::Index i = 0; i < n; ++i) {
      mu(i) = stats::inv_logit(eta(i));
      w(i) = std::max(mu(i) * (1.0 - mu(i)), 1e-300);
      z(i) = eta(i) + (y(i) - mu(i)) / w(i);
    }
    const Eigen::MatrixXd xtwx = x.transpose() * w.asDiagonal() * x;
    const Eigen::VectorXd xtwz = x.transpose() * (w.asDiagonal() * z);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(xtwx);
    Eigen::VectorXd target = ldlt.solve(xtwz);
    if (ldlt.info() != Eigen::Success || !target.allFinite()) {
      if (beta.cwiseAbs().maxCoeff() > options.separation_bound) throw SeparationDetected();
      throw SingularDesign();
    }

    // step-halving keeps the deviance nonincreasing
    Eigen::VectorXd step = target - beta;
    Eigen::VectorXd cand = target;
    Eigen::VectorXd cand_eta = x * cand;
    double cand_dev = binomial_deviance(cand_eta, y);
    int halvings = 0;
    while (!(cand_dev <= dev) && halvings < options.max_step_halvings) {
      step *= 0.5;
      cand = beta + step;
      cand_eta = x * cand;
      cand_dev = binomial_deviance(cand_eta, y);
      ++halvings;
    }
    if (!(cand_dev <= dev)) {
      // no descent direction left: the current point is optimal to precision
      fit.iterations = iter;
      break;
    }
    const double rel_change = std::fabs(dev - cand_dev) / (std::fabs(cand_dev) + 0.1);
    beta = cand;
    eta = cand_eta;
    dev = cand_dev;
    fit.deviance_trace.push_back(dev);
    fit.iterations = iter;

    Eigen::VectorXd resid(n);
    for (Eigen::Index i = 0; i < n; ++i) resid(i) = y(i) - stats::inv_logit(eta(i));
    const double max_score = (x.transpose() * resid).cwiseAbs().maxCoeff();
    fit.max_abs_score = max_score;
    if (max_score < options.score_tolerance || rel_change < options.deviance_tolerance) {
      fit.converged = true;
      break;
    }
  }

  if (beta.cwiseAbs().maxCoeff() > options.separation_bound) throw SeparationDetected();

  for (Eigen::Index i = 0; i < n; ++i) {
    mu(i) = stats::inv_logit(eta(i));
    w(i) = mu(i) * (1.0 - mu(i));
  }
  const Eigen::MatrixXd info = x.transpose() * w.asDiagonal() * x;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
  if (ldlt.info() != Eigen::Success) throw SingularDesign();
  fit.covariance = ldlt.solve(Eigen::MatrixXd::Identity(p, p));
  fit.covariance = 0.5 * (fit.covariance + fit.covariance.transpose()).eval();
  fit.coefficients = beta;
  fit.deviance = dev;
  fit.log_likelihood = -0.5 * dev;
  Eigen::VectorXd resid(n);
  for (Eigen::Index i = 0; i < n; ++i) resid(i) = y(i) - mu(i);
  fit.max_abs_score = (x.transpose() * resid).cwiseAbs().maxCoeff();
  return fit;
}

FitResult fit_linear(const DesignMatrix& design, std::span<const double> y_in) {
  check_shape(design, y_in);
  const Eigen::MatrixXd& x = design.x;
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  if (n <= p) throw AnalysisError("linear fit needs more observations than coefficients");
  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(y_in.data(), n);

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  const Eigen::VectorXd beta = qr.solve(y);
  const Eigen::VectorXd resid = y - x * beta;
  const double rss = resid.squaredNorm();
  const double s2 = rss / static_cast<double>(n - p);

  const Eigen::MatrixXd xtx = x.transpose() * x;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(xtx);
  if (ldlt.info() != Eigen::Success) throw SingularDesign();

  FitResult fit;
  fit.family = Family::gaussian;
  fit.labels = design.labels;
  fit.coefficients = beta;
  fit.covariance = s2 * ldlt.solve(Eigen::MatrixXd::Identity(p, p));
  fit.covariance = 0.5 * (fit.covariance + fit.covariance.transpose()).eval();
  fit.deviance = rss;
  fit.residual_variance = s2;
  fit.n_obs = static_cast<int>(n);
  fit.df_residual = static_cast<int>(n - p);
  fit.converged = true;
  fit.iterations = 1;
  fit.max_abs_score = (x.transpose() * resid).cwiseAbs().maxCoeff();
  return fit;
}

WaldTest wald_one_sided(double estimate, double std_error, double alpha, Reference ref,
                        double df) {
  if (!(alpha > 0.0 && alpha < 0.5)) throw Error("alpha must lie in (0, 0.5)");
  if (!(std_error > 0.0) || !std::isfinite(std_error)) throw DegenerateStandardError();
  const double stat = estimate / std_error;
  WaldTest out;
  out.estimate = estimate;
  out.std_error = std_error;
  double q;
  if (ref == Reference::normal) {
    out.p_val = stats::normal_sf(stat);
    q = stats::normal_quantile(1.0 - alpha);
  } else {
    if (!(df > 0.0)) throw DegenerateStandardError();
    out.p_val = stats::t_sf(stat, df);
    q = stats::t_quantile(1.0 - alpha, df);
  }
  out.lower_ci = estimate - q * std_error;
  out.upper_ci = estimate + q * std_error;
  return out;
}

WaldTest wald_one_sided(const FitResult& fit, const std::string& label, double alpha) {
  const double est = fit.coefficient(label);
  const double se = fit.std_error(label);
  if (fit.family == Family::binomial) return wald_one_sided(est, se, alpha, Reference::normal);
  return wald_one_sided(est, se, alpha, Reference::student_t, fit.df_residual);
}

}  // namespace ncc
