#include "doctest.h"

#include <cmath>

#include "ncc/errors.hpp"
#include "ncc/freq_analysis.hpp"
#include "ncc/simulate.hpp"

using namespace ncc;

namespace {

TrialConfig cont_config(int k, std::vector<int> d, std::vector<double> theta,
                        std::vector<double> lambda, int n_arm = 100) {
  TrialConfig c;
  c.endpoint = Endpoint::continuous;
  c.num_arms = k;
  c.entry_times = std::move(d);
  c.effects = std::move(theta);
  c.lambda = std::move(lambda);
  c.n_arm = n_arm;
  c.control_response = 0.0;
  return c;
}

void check_same(const AnalysisResult& a, const AnalysisResult& b) {
  CHECK(a.p_val == doctest::Approx(b.p_val).epsilon(1e-12));
  CHECK(a.treat_effect == doctest::Approx(b.treat_effect).epsilon(1e-12));
  CHECK(a.lower_ci == doctest::Approx(b.lower_ci).epsilon(1e-12));
  CHECK(a.upper_ci == doctest::Approx(b.upper_ci).epsilon(1e-12));
  CHECK(a.reject_h0 == b.reject_h0);
}

}  // namespace

TEST_CASE("single-period trial: fix, sep and pool coincide") {
  TrialConfig c;
  c.n_arm = 150;
  c.effects = {1.8};
  c.lambda = {0.3, 0.3};
  Rng rng(1);
  const auto data = datasim_bin(c, rng);
  REQUIRE(data.num_periods() == 1);
  const auto fix = analyze_fix(data, 1);
  check_same(fix, analyze_sep(data, 1));
  check_same(fix, analyze_pool(data, 1));
  REQUIRE(fix.model);
  CHECK(fix.model->coefficients.size() == 2u);
}

TEST_CASE("sep equals fix on the data restricted to the arm and its concurrent controls") {
  const auto c = cont_config(2, {0, 60}, {0.2, 0.5}, {0.4, 0.4, 0.4});
  Rng rng(2);
  const auto data = datasim_cont(c, rng);
  const auto& w = data.window(2);
  std::vector<ParticipantRecord> kept;
  for (const auto& r : data.rows()) {
    if (r.period < w.first_period || r.period > w.last_period) continue;
    if (r.treatment != 0 && r.treatment != 2) continue;
    ParticipantRecord q = r;
    q.j = static_cast<int>(kept.size()) + 1;
    q.period = 1;
    q.treatment = r.treatment == 2 ? 1 : 0;
    kept.push_back(q);
  }
  const auto reduced = TrialData::from_records(kept, Endpoint::continuous);
  check_same(analyze_sep(data, 2), analyze_fix(reduced, 1));
}

TEST_CASE("noiseless continuous data recovers the effect exactly") {
  auto c = cont_config(1, {0}, {0.7}, {0.0, 0.0});
  c.sigma = 1e-12;
  Rng rng(3);
  const auto data = datasim_cont(c, rng);
  CHECK(std::abs(analyze_sep(data, 1).treat_effect - 0.7) < 1e-9);
}

TEST_CASE("fixed model labels and reference period") {
  const auto c = cont_config(3, {0, 50, 120}, {0, 0, 0}, {0, 0, 0, 0});
  Rng rng(4);
  const auto data = datasim_cont(c, rng);
  const auto r = analyze_fix(data, 3);
  REQUIRE(r.model);
  std::vector<std::string> labels;
  for (const auto& row : r.model->coefficients) labels.push_back(row.label);
  CHECK(labels.front() == "(Intercept)");
  CHECK(std::find(labels.begin(), labels.end(), "treatment3") != labels.end());
  CHECK(std::find(labels.begin(), labels.end(), "period1") == labels.end());
  CHECK(std::find(labels.begin(), labels.end(), "period2") != labels.end());

  // concurrent-only restriction drops the early periods
  const auto cc = analyze_fix(data, 3, 0.025, false);
  REQUIRE(cc.model);
  CHECK(cc.model->n_obs < r.model->n_obs);
}

TEST_CASE("missing arm is an analysis error") {
  const auto c = cont_config(1, {0}, {0}, {0, 0});
  Rng rng(5);
  const auto data = datasim_cont(c, rng);
  CHECK_THROWS_AS(analyze_fix(data, 2), AnalysisError);
}

TEST_CASE("fixed model is calibrated under a shared linear trend (continuous)") {
  const auto c = cont_config(2, {0, 100}, {0.0, 0.0}, {1.0, 1.0, 1.0}, 100);
  int rejects = 0;
  const int reps = 2000;
  for (int i = 0; i < reps; ++i) {
    Rng rng(derive_seed(31, static_cast<std::uint64_t>(i)));
    rejects += analyze_fix(datasim_cont(c, rng), 2).reject_h0;
  }
  CHECK(std::abs(rejects / double(reps) - 0.025) <= 0.010);
}

TEST_CASE("separate model is calibrated under a strong trend") {
  TrialConfig c;
  c.num_arms = 2;
  c.entry_times = {0, 100};
  c.effects = {1.0, 1.0};
  c.lambda = {1.0, 1.0, 1.0};
  c.n_arm = 100;
  int rejects = 0;
  const int reps = 2000;
  for (int i = 0; i < reps; ++i) {
    Rng rng(derive_seed(32, static_cast<std::uint64_t>(i)));
    rejects += analyze_sep(datasim_bin(c, rng), 2).reject_h0;
  }
  CHECK(std::abs(rejects / double(reps) - 0.025) <= 0.010);
}

TEST_CASE("without trend pooled and fixed estimates agree on average") {
  TrialConfig c;
  c.num_arms = 2;
  c.entry_times = {0, 100};
  c.effects = {1.0, 1.5};
  c.lambda = {0.0, 0.0, 0.0};
  c.n_arm = 150;
  double sum_pool = 0, sum_fix = 0;
  const int reps = 500;
  for (int i = 0; i < reps; ++i) {
    Rng rng(derive_seed(33, static_cast<std::uint64_t>(i)));
    const auto d = datasim_bin(c, rng);
    sum_pool += analyze_pool(d, 2).treat_effect;
    sum_fix += analyze_fix(d, 2).treat_effect;
  }
  CHECK(std::abs(sum_pool / reps - sum_fix / reps) < 0.05);
}
