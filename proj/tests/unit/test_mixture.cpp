#include "doctest.h"

#include <cmath>

#include "ncc/mixture.hpp"
#include "ncc/rng.hpp"

using namespace ncc;

TEST_CASE("robustify edge weights") {
  const MixturePrior p({{1.0, 0.5, 0.3}});
  const auto same = robustify(p, 0.0, 10.0);
  REQUIRE(same.size() == 1u);
  CHECK(same.components()[0].mean == 0.5);
  const auto vague = robustify(p, 1.0, 10.0);
  REQUIRE(vague.size() == 1u);
  CHECK(vague.components()[0].mean == 0.0);
  CHECK(vague.components()[0].sd == 10.0);
  const auto mixed = robustify(p, 0.1, 10.0);
  REQUIRE(mixed.size() == 2u);
  CHECK(mixed.components()[0].weight == doctest::Approx(0.9));
  CHECK(mixed.components()[1].weight == doctest::Approx(0.1));
  CHECK(mixed.components()[0].weight + mixed.components()[1].weight == doctest::Approx(1.0));
}

TEST_CASE("mixture moments and density") {
  const MixturePrior p({{0.25, -1.0, 1.0}, {0.75, 1.0, 0.5}});
  CHECK(p.mean() == doctest::Approx(0.5));
  CHECK(p.variance() == doctest::Approx(0.25 * 2.0 + 0.75 * 1.25 - 0.25));
  const double x = 0.3;
  const double dens = 0.25 * std::exp(-0.5 * 1.69) / std::sqrt(2 * M_PI) +
                      0.75 * std::exp(-0.5 * 0.49 / 0.25) / (0.5 * std::sqrt(2 * M_PI));
  CHECK(p.log_density(x) == doctest::Approx(std::log(dens)));
}

TEST_CASE("posterior mixture is conjugate per component") {
  const MixturePrior p({{1.0, 0.0, 1.0}});
  const auto post = posterior_mixture(p, 2.0, 1.0);
  CHECK(post.components()[0].mean == doctest::Approx(1.0));
  CHECK(post.components()[0].sd == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("em recovers two separated components and aic picks them") {
  Rng rng(5);
  std::vector<double> x;
  for (int i = 0; i < 3000; ++i) x.push_back(rng.normal(-2.0, 0.5));
  for (int i = 0; i < 1000; ++i) x.push_back(rng.normal(2.0, 0.8));
  const auto fit = fit_mixture_aic(x, 3);
  CHECK(fit.mixture.size() >= 2u);
  const auto two = fit_normal_mixture(x, 2);
  const auto& c = two.mixture.components();
  CHECK(c[0].mean == doctest::Approx(-2.0).epsilon(0.05));
  CHECK(c[1].mean == doctest::Approx(2.0).epsilon(0.05));
  CHECK(c[0].weight == doctest::Approx(0.75).epsilon(0.05));
  for (std::size_t i = 1; i < two.log_likelihood_trace.size(); ++i)
    CHECK(two.log_likelihood_trace[i] >= two.log_likelihood_trace[i - 1] - 1e-8);
}

TEST_CASE("single normal sample keeps one component") {
  Rng rng(6);
  std::vector<double> x;
  for (int i = 0; i < 4000; ++i) x.push_back(rng.normal(0.3, 1.2));
  const auto fit = fit_mixture_aic(x, 3);
  CHECK(fit.mixture.mean() == doctest::Approx(0.3).epsilon(0.2));
  CHECK(std::sqrt(fit.mixture.variance()) == doctest::Approx(1.2).epsilon(0.05));
}
