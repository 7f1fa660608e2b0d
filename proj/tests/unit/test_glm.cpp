#include "doctest.h"

#include <cmath>

#include "ncc/errors.hpp"
#include "ncc/glm.hpp"
#include "ncc/rng.hpp"

using namespace ncc;

namespace {

// Two-group design: intercept plus treatment dummy.
DesignMatrix two_group(int n0, int n1) {
  DesignMatrix d;
  d.x = Eigen::MatrixXd::Ones(n0 + n1, 2);
  d.x.col(1).head(n0).setZero();
  d.labels = {"(Intercept)", "treatment1"};
  return d;
}

std::vector<double> events(int n0, int e0, int n1, int e1) {
  std::vector<double> y(static_cast<std::size_t>(n0 + n1), 0.0);
  for (int i = 0; i < e0; ++i) y[static_cast<std::size_t>(i)] = 1.0;
  for (int i = 0; i < e1; ++i) y[static_cast<std::size_t>(n0 + i)] = 1.0;
  return y;
}

}  // namespace

TEST_CASE("saturated 2x2 gives the sample log odds ratio") {
  const auto fit = fit_logistic(two_group(20, 20), events(20, 10, 20, 15));
  CHECK(fit.converged);
  CHECK(std::abs(fit.coefficient("treatment1") - std::log(3.0)) < 1e-6);
  // Woolf standard error
  const double se = std::sqrt(1.0 / 10 + 1.0 / 10 + 1.0 / 15 + 1.0 / 5);
  CHECK(fit.std_error("treatment1") == doctest::Approx(se).epsilon(1e-6));
}

TEST_CASE("identical groups give a zero coefficient") {
  const auto fit = fit_logistic(two_group(30, 30), events(30, 12, 30, 12));
  CHECK(std::abs(fit.coefficient("treatment1")) < 1e-8);
}

TEST_CASE("all responders is separation") {
  std::vector<double> y(40, 1.0);
  CHECK_THROWS_AS(fit_logistic(two_group(20, 20), y), SeparationDetected);
}

TEST_CASE("quasi-complete separation in one group") {
  CHECK_THROWS_AS(fit_logistic(two_group(20, 20), events(20, 5, 20, 20)), SeparationDetected);
}

TEST_CASE("rank deficient design") {
  auto d = two_group(10, 10);
  d.x.conservativeResize(Eigen::NoChange, 3);
  d.x.col(2) = d.x.col(1);
  d.labels.push_back("dup");
  CHECK_THROWS_AS(fit_logistic(d, events(10, 4, 10, 6)), SingularDesign);
  std::vector<double> y(20, 0.5);
  CHECK_THROWS_AS(fit_linear(d, y), SingularDesign);
}

TEST_CASE("irls deviance is monotone") {
  Rng rng(3);
  DesignMatrix d;
  d.x.resize(300, 3);
  std::vector<double> y(300);
  for (int i = 0; i < 300; ++i) {
    d.x(i, 0) = 1.0;
    d.x(i, 1) = rng.normal();
    d.x(i, 2) = rng.normal();
    const double eta = -0.3 + 1.2 * d.x(i, 1) - 0.8 * d.x(i, 2);
    y[static_cast<std::size_t>(i)] = rng.bernoulli(1.0 / (1.0 + std::exp(-eta))) ? 1.0 : 0.0;
  }
  d.labels = {"(Intercept)", "a", "b"};
  const auto fit = fit_logistic(d, y);
  CHECK(fit.converged);
  for (std::size_t i = 1; i < fit.deviance_trace.size(); ++i)
    CHECK(fit.deviance_trace[i] <= fit.deviance_trace[i - 1] + 1e-12);
  CHECK(fit.max_abs_score < 1e-6);
}

TEST_CASE("intercept-only linear model") {
  DesignMatrix d;
  d.x = Eigen::MatrixXd::Ones(3, 1);
  d.labels = {"(Intercept)"};
  const std::vector<double> y{1, 2, 3};
  const auto fit = fit_linear(d, y);
  CHECK(fit.coefficient("(Intercept)") == doctest::Approx(2.0));
  CHECK(fit.residual_variance == doctest::Approx(1.0));
  CHECK(fit.df_residual == 2);
}

TEST_CASE("dummy regression gives the mean difference") {
  const auto d = two_group(4, 4);
  const std::vector<double> y{1, 2, 3, 4, 5, 7, 6, 8};
  const auto fit = fit_linear(d, y);
  CHECK(fit.coefficient("treatment1") == doctest::Approx(6.5 - 2.5));
}

TEST_CASE("linear fit matches the normal equations") {
  Rng rng(21);
  DesignMatrix d;
  d.x.resize(50, 4);
  for (int i = 0; i < 50; ++i)
    for (int k = 0; k < 4; ++k) d.x(i, k) = rng.normal();
  d.labels = {"a", "b", "c", "e"};
  std::vector<double> y(50);
  for (auto& v : y) v = rng.normal(1.0, 2.0);
  const auto fit = fit_linear(d, y);
  const Eigen::VectorXd yy = Eigen::Map<const Eigen::VectorXd>(y.data(), 50);
  const Eigen::VectorXd beta = (d.x.transpose() * d.x).ldlt().solve(d.x.transpose() * yy);
  CHECK((fit.coefficients - beta).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("linear fit needs residual degrees of freedom") {
  DesignMatrix d;
  d.x = Eigen::MatrixXd::Identity(2, 2);
  d.labels = {"a", "b"};
  std::vector<double> y{1, 2};
  CHECK_THROWS_AS(fit_linear(d, y), AnalysisError);
}

TEST_CASE("one-sided wald test") {
  const auto w0 = wald_one_sided(0.0, 1.0, 0.025, Reference::normal);
  CHECK(w0.p_val == 0.5);
  const auto w = wald_one_sided(1.96, 1.0, 0.025, Reference::normal);
  CHECK(w.p_val == doctest::Approx(0.025).epsilon(1e-3));
  CHECK(std::abs(w.lower_ci - 0.0002) < 1e-3);
  CHECK(std::abs(w.upper_ci - 3.9198) < 1e-3);
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    const double b = rng.normal(0, 3), se = 0.1 + rng.uniform();
    const auto t = wald_one_sided(b, se, 0.05, Reference::student_t, 7);
    CHECK(t.lower_ci <= b);
    CHECK(b <= t.upper_ci);
  }
  CHECK_THROWS(wald_one_sided(1.0, 0.0, 0.025, Reference::normal));
  CHECK_THROWS(wald_one_sided(1.0, 1.0, 0.7, Reference::normal));
}
