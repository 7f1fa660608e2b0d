#include "doctest.h"

#include <cmath>

#include "ncc/errors.hpp"
#include "ncc/timetrends.hpp"

using namespace ncc;

TEST_CASE("linear trend anchors") {
  CHECK(linear_trend(1, 0.5, 101) == 0.0);
  CHECK(linear_trend(101, 0.5, 101) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(linear_trend(51, 0.5, 101) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("stepwise trend anchors") {
  CHECK(sw_trend(1, 0.6, 4) == 0.0);
  CHECK(sw_trend(4, 0.6, 4) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(sw_trend(2, 0.6, 4) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(sw_trend(1, 0.6, 1) == 0.0);
}

TEST_CASE("inverted-u rises to the peak and mirrors") {
  CHECK(inv_u_trend(1, 1.0, 50, 100) == 0.0);
  CHECK(inv_u_trend(50, 1.0, 50, 100) == doctest::Approx(49.0 / 99.0).epsilon(1e-15));
  CHECK(inv_u_trend(60, 1.0, 50, 100) == doctest::Approx(39.0 / 99.0).epsilon(1e-15));
  CHECK(inv_u_trend(60, 1.0, 50, 100) == doctest::Approx(inv_u_trend(40, 1.0, 50, 100)));
}

TEST_CASE("seasonal trend") {
  CHECK(seasonal_trend(1, 0.7, 3, 200) == 0.0);
  for (int w = 1; w <= 4; ++w) CHECK(std::abs(seasonal_trend(200, 0.7, w, 200)) < 1e-12);
  CHECK(seasonal_trend(26, 0.3, 1, 101) == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("degenerate window") {
  CHECK_THROWS_AS(linear_trend(1, 0.5, 1), Error);
}

TEST_CASE("dispatch and zero lambda") {
  TrendSpec spec;
  spec.kind = TrendKind::linear;
  spec.lambda = 0.0;
  CHECK(trend_value(spec, 10, 2, 100, 3) == 0.0);
  spec.lambda = 1.0;
  CHECK(trend_value(spec, 100, 3, 100, 3) == doctest::Approx(1.0));
  spec.kind = TrendKind::stepwise;
  CHECK(trend_value(spec, 100, 2, 100, 3) == doctest::Approx(0.5));
}
