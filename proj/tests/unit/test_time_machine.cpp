#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "ncc/errors.hpp"
#include "ncc/simulate.hpp"
#include "ncc/time_machine.hpp"
#include "quadrature_oracle.hpp"

using namespace ncc;

TEST_CASE("buckets count backward from the latest participant") {
  auto b = bucketize(100, 25);
  CHECK(bucket_count(100, 25) == 4);
  CHECK(b[99] == 1);
  CHECK(b[0] == 4);
  CHECK(b[75] == 1);
  CHECK(b[74] == 2);

  b = bucketize(110, 25);
  CHECK(bucket_count(110, 25) == 5);
  CHECK(std::count(b.begin(), b.end(), 5) == 10);

  b = bucketize(60, 60);
  CHECK(std::all_of(b.begin(), b.end(), [](int c) { return c == 1; }));
  CHECK(bucket_count(60, 1000) == 1);
  CHECK_THROWS(bucketize(0, 5));
}

TEST_CASE("prior draws keep the newest bucket at zero") {
  TimeMachineSettings s;
  s.chain = {500, 2000};
  const auto prior = sample_time_machine_prior(5, s, 3);
  const auto& a1 = prior["alpha[1]"];
  CHECK(std::all_of(a1.begin(), a1.end(), [](double v) { return v == 0.0; }));
  CHECK(prior.contains("tau"));
}

TEST_CASE("single bucket matches independent group posteriors") {
  TrialConfig c;
  c.n_arm = 250;
  c.effects = {1.6};
  c.lambda = {0.0, 0.0};
  c.control_response = 0.4;
  Rng rng(6);
  const auto data = datasim_bin(c, rng);
  TimeMachineSettings s;
  s.bucket_size = 100000;
  const auto r = analyze_timemachine(data, 1, 0.025, s, 21);

  double e0 = 0, n0 = 0, e1 = 0, n1 = 0;
  for (const auto& row : data.rows()) {
    (row.treatment == 0 ? e0 : e1) += row.response;
    (row.treatment == 0 ? n0 : n1) += 1;
  }
  // eta0 ~ N(0, 1/prec_eta); eta0 + theta with theta vague is nearly free
  const double sd = 1.0 / std::sqrt(s.prec_eta);
  const auto ctrl = oracle::logit_posterior(e0, n0, 0.0, sd);
  const auto trt = oracle::logit_posterior(e1, n1, 0.0, sd);
  CHECK(std::abs(r.treat_effect - (trt.mean() - ctrl.mean())) < 0.05);
}

TEST_CASE("continuous effect is recovered") {
  TrialConfig c;
  c.endpoint = Endpoint::continuous;
  c.num_arms = 2;
  c.entry_times = {0, 200};
  c.effects = {0.3, 0.8};
  c.lambda = {0.0, 0.0, 0.0};
  c.n_arm = 500;
  c.sigma = 0.1;
  Rng rng(7);
  const auto data = datasim_cont(c, rng);
  TimeMachineSettings s;
  s.chain = {1000, 4000};
  const auto r = analyze_timemachine_detailed(data, 2, 0.025, s, 4);
  CHECK(std::abs(r.result.treat_effect - 0.8) < 0.05);
  CHECK(r.result.reject_h0);
  CHECK(r.arms == std::vector<int>{1, 2});
  CHECK(!r.bucket_effects.empty());
}

TEST_CASE("time machine tracks a linear drift in the control arm") {
  TrialConfig c;
  c.endpoint = Endpoint::continuous;
  c.num_arms = 2;
  c.entry_times = {0, 200};
  c.effects = {0.0, 0.0};
  c.lambda = {2.0, 2.0, 2.0};
  c.n_arm = 300;
  c.sigma = 0.5;
  Rng rng(8);
  const auto data = datasim_cont(c, rng);
  TimeMachineSettings s;
  s.chain = {1000, 4000};
  const auto r = analyze_timemachine(data, 2, 0.025, s, 5);
  CHECK(std::abs(r.treat_effect) < 0.15);
}

TEST_CASE("deterministic for a seed") {
  TrialConfig c;
  c.n_arm = 80;
  Rng rng(9);
  const auto data = datasim_bin(c, rng);
  TimeMachineSettings s;
  s.chain = {200, 1000};
  const auto a = analyze_timemachine(data, 1, 0.025, s, 1);
  const auto b = analyze_timemachine(data, 1, 0.025, s, 1);
  CHECK(a.treat_effect == b.treat_effect);
  CHECK(a.p_val == b.p_val);
  s.bucket_size = 0;
  CHECK_THROWS(analyze_timemachine(data, 1, 0.025, s, 1));
}
