#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ncc/errors.hpp"
#include "ncc/freq_analysis.hpp"
#include "ncc/map_prior.hpp"
#include "ncc/plot.hpp"
#include "ncc/scenario_io.hpp"
#include "ncc/simstudy.hpp"
#include "ncc/simulate.hpp"
#include "ncc/time_machine.hpp"
#include "ncc/trial_io.hpp"

namespace {

using nlohmann::json;

// Results go to --out when given, stdout otherwise.
void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream os(out_path, std::ios::binary);
  if (!os) throw ncc::Error("cannot write '" + out_path + "'");
  os << text;
  if (!os) throw ncc::Error("write failed for '" + out_path + "'");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ncc::Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct SimulateArgs {
  std::string config_path;
  std::string out;
  std::string full_json;
  std::uint64_t seed = 1;
  std::optional<std::string> endpoint, trend;
  std::optional<int> num_arms, n_arm, period_blocks, n_peak, n_wave;
  std::optional<std::vector<int>> d;
  std::optional<double> p0, mu0, sigma;
  std::optional<std::vector<double>> odds_ratio, theta, lambda;
};

template <typename T>
void overlay(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

int run_simulate(const SimulateArgs& a) {
  json j = json::object();
  if (!a.config_path.empty()) {
    try {
      j = json::parse(slurp(a.config_path));
    } catch (const json::parse_error& e) {
      throw ncc::ParseError("invalid JSON in '" + a.config_path + "': " + e.what());
    }
    if (!j.is_object()) throw ncc::ParseError("trial configuration must be a JSON object");
  }
  overlay(j, "endpoint", a.endpoint);
  overlay(j, "trend", a.trend);
  overlay(j, "num_arms", a.num_arms);
  overlay(j, "n_arm", a.n_arm);
  overlay(j, "period_blocks", a.period_blocks);
  overlay(j, "N_peak", a.n_peak);
  overlay(j, "n_wave", a.n_wave);
  overlay(j, "d", a.d);
  overlay(j, "p0", a.p0);
  overlay(j, "mu0", a.mu0);
  overlay(j, "sigma", a.sigma);
  overlay(j, "OR", a.odds_ratio);
  overlay(j, "theta", a.theta);
  overlay(j, "lambda", a.lambda);

  const ncc::TrialConfig config = ncc::trial_config_from_json(j.dump());
  config.check();
  ncc::Rng rng(a.seed);
  const auto sim = ncc::simulate_trial(config, rng);
  emit(a.out, ncc::trial_to_csv(sim.data));
  if (!a.full_json.empty()) emit(a.full_json, ncc::simulation_to_json(sim, config) + "\n");
  return 0;
}

struct AnalyzeArgs {
  std::string data;
  std::string out;
  std::string method = "fixmodel";
  std::optional<std::string> endpoint;
  int arm = 1;
  double alpha = 0.025;
  bool ncc = true;
  std::uint64_t seed = 1;
  bool diagnostics = false;
  ncc::MapSettings map;
  ncc::TimeMachineSettings tm;
  std::optional<int> burn_in, draws;
  std::string bucket_effects;
  std::string prior_out;
};

int run_analyze(AnalyzeArgs a) {
  std::optional<ncc::Endpoint> endpoint;
  if (a.endpoint) endpoint = ncc::parse_endpoint(*a.endpoint);
  const ncc::TrialData data = ncc::read_trial_csv_file(a.data, endpoint);
  const ncc::Method method = ncc::parse_method(a.method);
  if (a.burn_in) a.map.chain.burn_in = a.tm.chain.burn_in = *a.burn_in;
  if (a.draws) a.map.chain.draws = a.tm.chain.draws = *a.draws;

  ncc::AnalysisResult result;
  switch (method) {
    case ncc::Method::fixmodel: result = ncc::analyze_fix(data, a.arm, a.alpha, a.ncc); break;
    case ncc::Method::sepmodel: result = ncc::analyze_sep(data, a.arm, a.alpha); break;
    case ncc::Method::poolmodel: result = ncc::analyze_pool(data, a.arm, a.alpha); break;
    case ncc::Method::mapprior: {
      auto detailed = ncc::analyze_map_detailed(data, a.arm, a.alpha, a.map, a.seed);
      result = detailed.result;
      if (!a.prior_out.empty()) {
        json p;
        p["map_prior"] = json::parse(detailed.map_prior.to_json());
        p["used_prior"] = json::parse(detailed.used_prior.to_json());
        emit(a.prior_out, p.dump(2) + "\n");
      }
      break;
    }
    case ncc::Method::timemachine: {
      auto detailed = ncc::analyze_timemachine_detailed(data, a.arm, a.alpha, a.tm, a.seed);
      result = detailed.result;
      if (!a.bucket_effects.empty())
        emit(a.bucket_effects, ncc::bucket_effects_to_json(detailed.bucket_effects) + "\n");
      break;
    }
  }
  emit(a.out, ncc::result_to_json(result, a.diagnostics) + "\n");
  return 0;
}

struct StudyArgs {
  std::string grid;
  std::string out;
  int nsim = 100;
  std::uint64_t seed = 1;
  int workers = 0;
};

int run_simstudy(const StudyArgs& a) {
  const auto scenarios = ncc::read_scenarios_file(a.grid);
  const auto rows = ncc::sim_study_par(scenarios, a.nsim, a.seed, a.workers);
  for (const auto& r : rows) {
    if (r.failure_warning) {
      std::cerr << "warning: scenario '" << r.scenario_id << "' arm " << r.arm << " method "
                << ncc::to_string(r.method) << ": " << r.n_failed << " of " << r.nsim
                << " replications failed\n";
    }
  }
  emit(a.out, ncc::study_to_csv(rows));
  return 0;
}

struct PlotArgs {
  std::string data;
  std::string out;
  std::string title = "Trial progress";
  int width = 800;
};

int run_plot(const PlotArgs& a) {
  const ncc::TrialData data = ncc::read_trial_csv_file(a.data);
  ncc::PlotOptions opts;
  opts.title = a.title;
  opts.width = a.width;
  emit(a.out, ncc::trial_svg(data, opts));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Platform trial simulation and analysis with non-concurrent controls"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Simulate one platform trial and write CSV data");
  sim_cmd->add_option("--config", sim.config_path, "JSON trial configuration (flags override it)");
  sim_cmd->add_option("--out,-o", sim.out, "Output CSV path (default stdout)");
  sim_cmd->add_option("--full", sim.full_json, "Also write the full simulation as JSON");
  sim_cmd->add_option("--seed", sim.seed, "Random seed");
  sim_cmd->add_option("--endpoint", sim.endpoint, "binary or continuous");
  sim_cmd->add_option("--num-arms,--num_arms", sim.num_arms, "Number of experimental arms");
  sim_cmd->add_option("--n-arm,--n_arm", sim.n_arm, "Participants per experimental arm");
  sim_cmd->add_option("--d", sim.d, "Entry times, one per arm")->delimiter(',');
  sim_cmd->add_option("--period-blocks,--period_blocks", sim.period_blocks, "Blocks per period");
  sim_cmd->add_option("--p0", sim.p0, "Control response probability (binary)");
  sim_cmd->add_option("--mu0", sim.mu0, "Control mean (continuous)");
  sim_cmd->add_option("--sigma", sim.sigma, "Residual standard deviation (continuous)");
  sim_cmd->add_option("--OR", sim.odds_ratio, "Odds ratios, one per arm")->delimiter(',');
  sim_cmd->add_option("--theta", sim.theta, "Mean differences, one per arm")->delimiter(',');
  sim_cmd->add_option("--lambda", sim.lambda, "Trend strengths, control first")->delimiter(',');
  sim_cmd->add_option("--trend", sim.trend, "linear, stepwise, inv_u or seasonal");
  sim_cmd->add_option("--N-peak,--N_peak", sim.n_peak, "Peak index for inv_u");
  sim_cmd->add_option("--n-wave,--n_wave", sim.n_wave, "Number of waves for seasonal");

  AnalyzeArgs an;
  auto* an_cmd = app.add_subcommand("analyze", "Analyze a trial CSV and print a JSON result");
  an_cmd->add_option("data", an.data, "Trial CSV (j,response,treatment,period)")->required();
  an_cmd->add_option("--out,-o", an.out, "Output JSON path (default stdout)");
  an_cmd->add_option("--method", an.method,
                     "fixmodel, sepmodel, poolmodel, mapprior or timemachine");
  an_cmd->add_option("--endpoint", an.endpoint, "Force binary or continuous");
  an_cmd->add_option("--arm", an.arm, "Experimental arm to evaluate");
  an_cmd->add_option("--alpha", an.alpha, "One-sided significance level");
  an_cmd->add_option("--ncc", an.ncc, "fixmodel: include non-concurrent controls");
  an_cmd->add_option("--seed", an.seed, "Seed for Bayesian methods");
  an_cmd->add_flag("--diagnostics", an.diagnostics, "Include sampler/method diagnostics");
  an_cmd->add_option("--opt", an.map.opt, "mapprior: 1 pooled NCC source, 2 one per period");
  an_cmd->add_option("--prior-prec-tau,--prior_prec_tau", an.map.prior_prec_tau,
                     "mapprior: precision of the half-normal prior on tau");
  an_cmd->add_option("--prior-prec-eta,--prior_prec_eta", an.map.prior_prec_eta,
                     "mapprior: precision of the normal prior on the mean");
  an_cmd->add_option("--robustify", an.map.robustify, "mapprior: add a vague component");
  an_cmd->add_option("--weight", an.map.weight, "mapprior: weight of the vague component");
  an_cmd->add_option("--prior-out", an.prior_out, "mapprior: write the fitted prior as JSON");
  an_cmd->add_option("--bucket-size,--bucket_size", an.tm.bucket_size,
                     "timemachine: participants per time bucket");
  an_cmd->add_option("--prec-theta,--prec_theta", an.tm.prec_theta,
                     "timemachine: prior precision of treatment effects");
  an_cmd->add_option("--prec-eta,--prec_eta", an.tm.prec_eta,
                     "timemachine: prior precision of the intercept");
  an_cmd->add_option("--tau-a,--tau_a", an.tm.tau_a, "timemachine: gamma shape for tau");
  an_cmd->add_option("--tau-b,--tau_b", an.tm.tau_b, "timemachine: gamma rate for tau");
  an_cmd->add_option("--bucket-effects", an.bucket_effects,
                     "timemachine: write posterior bucket effects as JSON");
  an_cmd->add_option("--burn-in,--burn_in", an.burn_in, "Bayesian: burn-in iterations");
  an_cmd->add_option("--draws", an.draws, "Bayesian: retained draws");

  StudyArgs st;
  auto* st_cmd = app.add_subcommand("simstudy", "Run a simulation study over a scenario grid");
  st_cmd->add_option("grid", st.grid, "Scenario grid (.json or .csv)")->required();
  st_cmd->add_option("--out,-o", st.out, "Output CSV path (default stdout)");
  st_cmd->add_option("--nsim", st.nsim, "Replications per scenario");
  st_cmd->add_option("--seed", st.seed, "Master seed");
  st_cmd->add_option("--workers", st.workers,
                     "Worker threads (default NCC_WORKERS or 90% of cores)");

  PlotArgs pl;
  auto* pl_cmd = app.add_subcommand("plot", "Write an SVG timeline of a trial CSV");
  pl_cmd->add_option("data", pl.data, "Trial CSV")->required();
  pl_cmd->add_option("--out,-o", pl.out, "Output SVG path (default stdout)");
  pl_cmd->add_option("--title", pl.title, "Chart title");
  pl_cmd->add_option("--width", pl.width, "Chart width in pixels");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, std::cerr, std::cerr);
  }

  try {
    if (*sim_cmd) return run_simulate(sim);
    if (*an_cmd) return run_analyze(an);
    if (*st_cmd) return run_simstudy(st);
    if (*pl_cmd) return run_plot(pl);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
