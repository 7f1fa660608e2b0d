#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

namespace ncc {

/// Labelled n x p design matrix.
struct DesignMatrix {
  Eigen::MatrixXd x;
  std::vector<std::string> labels;

  Eigen::Index rows() const { return x.rows(); }
  Eigen::Index cols() const { return x.cols(); }
  /// Column index of `label`; throws if absent.
  Eigen::Index column(const std::string& label) const;
};

enum class Family { binomial, gaussian };

struct FitResult {
  Family family = Family::gaussian;
  std::vector<std::string> labels;
  Eigen::VectorXd coefficients;
  Eigen::MatrixXd covariance;
  double log_likelihood = 0.0;     // binomial only
  double deviance = 0.0;           // binomial: -2 logLik; gaussian: RSS
  double residual_variance = 0.0;  // gaussian only
  int n_obs = 0;
  int df_residual = 0;
  bool converged = false;
  int iterations = 0;
  double max_abs_score = 0.0;
  std::vector<double> deviance_trace;  // deviance after each accepted IRLS step

  double coefficient(const std::string& label) const;
  double std_error(const std::string& label) const;
};

struct IrlsOptions {
  int max_iterations = 100;
  double score_tolerance = 1e-8;
  double deviance_tolerance = 1e-10;
  double separation_bound = 15.0;
  int max_step_halvings = 30;
};

/// Maximum-likelihood logistic regression by iteratively reweighted least
/// squares with step-halving. Covariance is the inverse Fisher information
/// at the optimum. Throws SingularDesign on rank deficiency and
/// SeparationDetected when the likelihood has no finite maximizer.
FitResult fit_logistic(const DesignMatrix& design, std::span<const double> y,
                       const IrlsOptions& options = {});

/// Ordinary least squares; covariance = s^2 (X'X)^{-1}, s^2 = RSS / (n - p).
FitResult fit_linear(const DesignMatrix& design, std::span<const double> y);

enum class Reference { normal, student_t };

struct WaldTest {
  double p_val = 0.5;
  double estimate = 0.0;
  double std_error = 0.0;
  double lower_ci = 0.0;
  double upper_ci = 0.0;
};

/// One-sided test of H0: beta <= 0 with a (1 - 2 alpha) two-sided interval.
WaldTest wald_one_sided(double estimate, double std_error, double alpha, Reference ref,
                        double df = 0.0);

/// Same test on a fitted coefficient; normal reference for logistic fits,
/// Student t with residual df for linear fits.
WaldTest wald_one_sided(const FitResult& fit, const std::string& label, double alpha);

/// Rank of `x` by column-pivoted QR.
Eigen::Index numerical_rank(const Eigen::MatrixXd& x);

}  // namespace ncc
