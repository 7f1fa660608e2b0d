#include "ncc/simstudy.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "ncc/freq_analysis.hpp"
#include "ncc/simulate.hpp"
#include "ncc/trial_io.hpp"

namespace ncc {

void Scenario::check() const {
  config.check();
  std::vector<FieldError> errs;
  if (methods.empty()) errs.push_back({"methods", "at least one method is required"});
  if (arms.empty()) errs.push_back({"arms", "at least one arm is required"});
  for (int a : arms) {
    if (a < 1 || a > config.num_arms) {
      errs.push_back({"arms", "arm " + std::to_string(a) + " outside 1..num_arms"});
      break;
    }
  }
  if (!(alpha > 0.0 && alpha < 0.5)) errs.push_back({"alpha", "must lie in (0, 0.5)"});
  auto uses = [&](Method m) { return std::find(methods.begin(), methods.end(), m) != methods.end(); };
  try {
    if (uses(Method::mapprior)) settings.map.check();
    if (uses(Method::timemachine)) settings.timemachine.check();
  } catch (const Error& e) {
    errs.push_back({"settings", e.what()});
  }
  if (!errs.empty()) {
    for (auto& e : errs) e.message = "scenario '" + id + "': " + e.message;
    throw ConfigError(std::move(errs));
  }
}

std::uint64_t replication_seed(std::uint64_t master_seed, const std::string& scenario_id,
                               int replication_index) {
  return derive_seed(derive_seed(master_seed, hash_string(scenario_id)),
                     static_cast<std::uint64_t>(replication_index));
}

ReplicationResult run_replication(const Scenario& scenario, int replication_index,
                                  std::uint64_t master_seed) {
  ReplicationResult out;
  out.seed = replication_seed(master_seed, scenario.id, replication_index);
  Rng rng(out.seed);
  const TrialData data = simulate_trial(scenario.config, rng).data;

  for (int arm : scenario.arms) {
    for (Method m : scenario.methods) {
      CellOutcome cell;
      cell.arm = arm;
      cell.method = m;
      const std::uint64_t analysis_seed =
          derive_seed(out.seed, static_cast<std::uint64_t>(arm) * 16 + static_cast<std::uint64_t>(m));
      try {
        AnalysisResult r;
        switch (m) {
          case Method::fixmodel:
            r = analyze_fix(data, arm, scenario.alpha, scenario.settings.fix_ncc);
            break;
          case Method::sepmodel: r = analyze_sep(data, arm, scenario.alpha); break;
          case Method::poolmodel: r = analyze_pool(data, arm, scenario.alpha); break;
          case Method::mapprior:
            r = analyze_map(data, arm, scenario.alpha, scenario.settings.map, analysis_seed);
            break;
          case Method::timemachine:
            r = analyze_timemachine(data, arm, scenario.alpha, scenario.settings.timemachine,
                                    analysis_seed);
            break;
        }
        cell.reject = r.reject_h0;
        cell.estimate = r.treat_effect;
      } catch (const Error& e) {
        cell.failed = true;
        cell.error = e.what();
      }
      out.cells.push_back(std::move(cell));
    }
  }
  return out;
}

std::vector<StudyRow> aggregate(const Scenario& scenario,
                                const std::vector<ReplicationResult>& replications) {
  std::vector<StudyRow> rows;
  std::size_t cell = 0;
  for (int arm : scenario.arms) {
    for (Method m : scenario.methods) {
      StudyRow row;
      row.scenario_id = scenario.id;
      row.arm = arm;
      row.method = m;
      row.nsim = static_cast<int>(replications.size());
      row.true_effect = true_effect(scenario.config, arm);
      int rejections = 0;
      double sum_err = 0.0, sum_sq = 0.0;
      for (const auto& rep : replications) {
        const auto& c = rep.cells.at(cell);
        if (c.failed) {
          ++row.n_failed;
          continue;
        }
        rejections += c.reject ? 1 : 0;
        const double err = c.estimate - row.true_effect;
        sum_err += err;
        sum_sq += err * err;
      }
      const int ok = row.nsim - row.n_failed;
      if (ok > 0) {
        row.reject_prob = static_cast<double>(rejections) / ok;
        row.reject_se = std::sqrt(row.reject_prob * (1.0 - row.reject_prob) / ok);
        row.bias = sum_err / ok;
        row.mse = sum_sq / ok;
      } else {
        row.reject_prob = row.reject_se = row.bias = row.mse =
            std::numeric_limits<double>::quiet_NaN();
      }
      row.failure_warning = row.nsim > 0 && row.n_failed > 0.02 * row.nsim;
      rows.push_back(std::move(row));
      ++cell;
    }
  }
  return rows;
}

int default_worker_count() {
  if (const char* env = std::getenv("NCC_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return std::max(1, static_cast<int>(std::floor(0.9 * static_cast<double>(hw))));
}

std::vector<StudyRow> sim_study_par(const std::vector<Scenario>& scenarios, int nsim,
                                    std::uint64_t master_seed, int workers) {
  if (scenarios.empty()) throw Error("empty scenario list");
  if (nsim < 1) throw Error("nsim must be at least 1");
  for (const auto& s : scenarios) s.check();
  if (workers <= 0) workers = default_worker_count();

  // one slot per (scenario, replication); ordering is fixed before any work
  const std::size_t total = scenarios.size() * static_cast<std::size_t>(nsim);
  std::vector<ReplicationResult> results(total);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t task = next.fetch_add(1);
      if (task >= total) return;
      const std::size_t s = task / static_cast<std::size_t>(nsim);
      const int rep = static_cast<int>(task % static_cast<std::size_t>(nsim));
      try {
        results[task] = run_replication(scenarios[s], rep, master_seed);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(total);
        return;
      }
    }
  };

  const int n_threads = std::min<int>(workers, static_cast<int>(total));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<StudyRow> rows;
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    std::vector<ReplicationResult> reps(
        std::make_move_iterator(results.begin() + static_cast<std::ptrdiff_t>(s * nsim)),
        std::make_move_iterator(results.begin() + static_cast<std::ptrdiff_t>((s + 1) * nsim)));
    auto part = aggregate(scenarios[s], reps);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

void write_study_csv(const std::vector<StudyRow>& rows, std::ostream& os) {
  os << "scenario,arm,method,nsim,n_failed,true_effect,reject_prob,reject_se,bias,mse,"
        "failure_warning\n";
  for (const auto& r : rows) {
    os << r.scenario_id << ',' << r.arm << ',' << to_string(r.method) << ',' << r.nsim << ','
       << r.n_failed << ',' << format_double(r.true_effect) << ',' << format_double(r.reject_prob)
       << ',' << format_double(r.reject_se) << ',' << format_double(r.bias) << ','
       << format_double(r.mse) << ',' << (r.failure_warning ? 1 : 0) << '\n';
  }
}

std::string study_to_csv(const std::vector<StudyRow>& rows) {
  std::ostringstream os;
  write_study_csv(rows, os);
  return os.str();
}

}  // namespace ncc
