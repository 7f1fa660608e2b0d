#include "doctest.h"

#include <cmath>
#include <set>
#include <vector>

#include "ncc/rng.hpp"

using ncc::Rng;

TEST_CASE("same seed gives the same stream") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("uniform stays in [0,1) and uniform_open avoids endpoints") {
  Rng r(3);
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform();
    CHECK((u >= 0.0 && u < 1.0));
    const double v = r.uniform_open();
    CHECK((v > 0.0 && v < 1.0));
  }
}

TEST_CASE("below is unbiased over a small range") {
  Rng r(9);
  std::vector<int> counts(3, 0);
  const int n = 300000;
  for (int i = 0; i < n; ++i) ++counts[r.below(3)];
  for (int c : counts) CHECK(std::abs(c / double(n) - 1.0 / 3.0) < 0.005);
}

TEST_CASE("normal moments") {
  Rng r(11);
  const int n = 200000;
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double x = r.normal();
    s += x;
    s2 += x * x;
  }
  const double m = s / n;
  CHECK(std::abs(m) < 3.0 / std::sqrt(n) * 1.5);
  CHECK(std::abs(s2 / n - m * m - 1.0) < 0.02);
}

TEST_CASE("gamma moments for large and small shape") {
  for (double shape : {0.3, 2.5, 40.0}) {
    Rng r(17);
    const double rate = 2.0;
    const int n = 200000;
    double s = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
      const double x = r.gamma(shape, rate);
      REQUIRE(x > 0.0);
      s += x;
      s2 += x * x;
    }
    const double m = s / n, v = s2 / n - m * m;
    CHECK(m == doctest::Approx(shape / rate).epsilon(0.02));
    CHECK(v == doctest::Approx(shape / (rate * rate)).epsilon(0.04));
  }
}

TEST_CASE("derive_seed separates children and is deterministic") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t t = 0; t < 1000; ++t) seen.insert(ncc::derive_seed(5, t));
  CHECK(seen.size() == 1000);
  CHECK(ncc::derive_seed(5, 1) == ncc::derive_seed(5, 1));
  CHECK(ncc::derive_seed(5, 1) != ncc::derive_seed(6, 1));
  CHECK(ncc::hash_string("a") != ncc::hash_string("b"));
  CHECK(ncc::hash_string("scenario") == ncc::hash_string("scenario"));
}
