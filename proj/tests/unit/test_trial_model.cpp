#include "doctest.h"

#include <algorithm>
#include <set>
#include <string>

#include "ncc/errors.hpp"
#include "ncc/simulate.hpp"
#include "ncc/trial_model.hpp"

using namespace ncc;

namespace {

// Change points from the event list alone: entries at d+1, exits at last+1.
int sweep_period_count(const std::vector<int>& treatments, const std::vector<int>& d,
                       int num_arms) {
  const int n = static_cast<int>(treatments.size());
  std::vector<int> last(static_cast<std::size_t>(num_arms), 0);
  for (int j = 1; j <= n; ++j) {
    const int t = treatments[static_cast<std::size_t>(j - 1)];
    if (t > 0) last[static_cast<std::size_t>(t - 1)] = j;
  }
  std::set<int> change;
  for (int k = 0; k < num_arms; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    if (d[kk] + 1 > 1 && d[kk] + 1 <= n) change.insert(d[kk] + 1);
    if (last[kk] + 1 <= n) change.insert(last[kk] + 1);
  }
  return static_cast<int>(change.size()) + 1;
}

TrialConfig base_config(int k, std::vector<int> d, int n_arm = 100) {
  TrialConfig c;
  c.num_arms = k;
  c.n_arm = n_arm;
  c.entry_times = std::move(d);
  c.effects.assign(static_cast<std::size_t>(k), 1.0);
  c.lambda.assign(static_cast<std::size_t>(k) + 1, 0.0);
  return c;
}

}  // namespace

TEST_CASE("single arm trial has one period") {
  Rng rng(1);
  const auto cfg = base_config(1, {0}, 50);
  const auto alloc = simulate_allocation(cfg, rng);
  const auto exits = exit_events_from(alloc, 1);
  const auto pm = derive_periods(alloc, cfg.entry_times, exits);
  REQUIRE(pm.size() == 1);
  CHECK(pm.at(1).start_j == 1);
  CHECK(pm.at(1).end_j == static_cast<int>(alloc.size()));
  CHECK(alloc.size() <= 100u);
  CHECK(alloc.size() >= 100u - 2u);
  CHECK(exits[0] == static_cast<int>(alloc.size()));
}

TEST_CASE("two arms starting together exit at different times") {
  Rng rng(2);
  auto cfg = base_config(2, {0, 0}, 60);
  cfg.period_blocks = 1;
  bool saw_two = false;
  for (int rep = 0; rep < 20; ++rep) {
    const auto alloc = simulate_allocation(cfg, rng);
    const auto exits = exit_events_from(alloc, 2);
    const auto pm = derive_periods(alloc, cfg.entry_times, exits);
    if (exits[0] != exits[1]) {
      CHECK(pm.size() == 2);
      saw_two = true;
    }
  }
  CHECK(saw_two);
}

TEST_CASE("staggered trial matches the event-sweep oracle") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    Rng rng(seed);
    const auto cfg = base_config(3, {0, 100, 250});
    const auto alloc = simulate_allocation(cfg, rng);
    const auto pm = derive_periods(alloc, cfg.entry_times, exit_events_from(alloc, 3));
    CHECK(static_cast<int>(pm.size()) == sweep_period_count(alloc, cfg.entry_times, 3));
  }
}

TEST_CASE("period map lookups") {
  PeriodMap pm({{1, 1, 10, {0, 1}}, {2, 11, 25, {0, 1, 2}}, {3, 26, 30, {0, 2}}});
  CHECK(pm.period_of(1) == 1);
  CHECK(pm.period_of(10) == 1);
  CHECK(pm.period_of(11) == 2);
  CHECK(pm.period_of(30) == 3);
  CHECK(pm.total_participants() == 30);
  CHECK_THROWS(pm.period_of(31));
  CHECK_THROWS(PeriodMap({{1, 1, 10, {0}}, {2, 12, 20, {0}}}));
}

TEST_CASE("empty assignment sequence is rejected") {
  std::vector<int> none, d{0}, e{0};
  CHECK_THROWS_WITH_AS(derive_periods(none, d, e), "no participants", Error);
}

TEST_CASE("validation names each offending field") {
  TrialConfig c = base_config(2, {0, 10});
  c.effects = {1.0};
  c.lambda = {0.0};
  c.n_arm = 0;
  const auto errs = c.validate();
  std::set<std::string> fields;
  for (const auto& e : errs) fields.insert(e.field);
  CHECK(fields.count("OR"));
  CHECK(fields.count("lambda"));
  CHECK(fields.count("n_arm"));
  CHECK_THROWS_AS(c.check(), ConfigError);

  TrialConfig ok = base_config(2, {0, 10});
  CHECK(ok.validate().empty());

  TrialConfig cont = base_config(1, {0});
  cont.endpoint = Endpoint::continuous;
  cont.effects = {0.5};
  cont.sigma = -1.0;
  const auto ce = cont.validate();
  REQUIRE(ce.size() >= 1);
  CHECK(std::any_of(ce.begin(), ce.end(), [](const FieldError& e) { return e.field == "sigma"; }));

  TrialConfig bad_p = base_config(1, {0});
  bad_p.control_response = 1.5;
  const auto pe = bad_p.validate();
  CHECK(std::any_of(pe.begin(), pe.end(), [](const FieldError& e) { return e.field == "p0"; }));
}

TEST_CASE("from_records infers arm windows from allocations") {
  std::vector<ParticipantRecord> rows;
  // period 1: arms {0,1}; period 2: {0,1,2}; period 3: {0,2}
  const int tr[] = {0, 1, 0, 1, 0, 1, 2, 0, 1, 2, 0, 2, 0, 2};
  const int pe[] = {1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 3, 3, 3, 3};
  for (int i = 0; i < 14; ++i) rows.push_back({i + 1, 0.0, tr[i], pe[i]});
  rows[0].response = 1.0;
  const auto data = TrialData::from_records(rows, Endpoint::binary);
  CHECK(data.num_periods() == 3);
  CHECK(data.periods().at(2).active_arms == std::vector<int>{0, 1, 2});
  CHECK(data.window(1).first_period == 1);
  CHECK(data.window(1).last_period == 2);
  CHECK(data.window(2).first_period == 2);
  CHECK(data.window(2).last_period == 3);
  CHECK(data.arms() == std::vector<int>{1, 2});
  CHECK(data.arm_count(2) == 4);
}

TEST_CASE("method names round trip") {
  for (auto m : {Method::fixmodel, Method::sepmodel, Method::poolmodel, Method::mapprior,
                 Method::timemachine})
    CHECK(parse_method(to_string(m)) == m);
  CHECK(is_bayesian(Method::mapprior));
  CHECK_FALSE(is_bayesian(Method::poolmodel));
  CHECK_THROWS(parse_method("nope"));
}
