#include "ncc/trial_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace ncc {

using nlohmann::ordered_json;

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_trial_csv(const TrialData& data, std::ostream& os) {
  const bool binary = data.endpoint() == Endpoint::binary;
  os << kTrialCsvHeader << '\n';
  for (const auto& r : data.rows()) {
    os << r.j << ',';
    if (binary) {
      os << (r.response != 0.0 ? 1 : 0);
    } else {
      os << format_double(r.response);
    }
    os << ',' << r.treatment << ',' << r.period << '\n';
  }
}

std::string trial_to_csv(const TrialData& data) {
  std::ostringstream os;
  write_trial_csv(data, os);
  return os.str();
}

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\"");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\"");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_field(const std::string& text, const char* column, int line) {
  T v{};
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || text.empty()) {
    throw ParseError("line " + std::to_string(line) + ": cannot parse " + column + " value '" +
                     text + "'");
  }
  return v;
}

}  // namespace

TrialData read_trial_csv(std::istream& is, std::optional<Endpoint> endpoint) {
  std::string line;
  int line_no = 0;
  if (!std::getline(is, line)) throw ParseError("line 1: empty input, expected header");
  ++line_no;
  if (trim(line) != kTrialCsvHeader) {
    // tolerate quoted or spaced headers as long as the column names match
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(trim(c));
    if (cols != std::vector<std::string>{"j", "response", "treatment", "period"})
      throw ParseError("line 1: header must be '" + std::string(kTrialCsvHeader) + "'");
  }

  std::vector<ParticipantRecord> rows;
  bool all_binary = true;
  while (std::getline(is, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(trim(c));
    if (cols.size() != 4)
      throw ParseError("line " + std::to_string(line_no) + ": expected 4 fields, got " +
                       std::to_string(cols.size()));
    ParticipantRecord r;
    r.j = parse_field<int>(cols[0], "j", line_no);
    r.response = parse_field<double>(cols[1], "response", line_no);
    r.treatment = parse_field<int>(cols[2], "treatment", line_no);
    r.period = parse_field<int>(cols[3], "period", line_no);
    if (r.response != 0.0 && r.response != 1.0) all_binary = false;
    rows.push_back(r);
  }
  if (rows.empty()) throw ParseError("no participants");
  const Endpoint ep = endpoint.value_or(all_binary ? Endpoint::binary : Endpoint::continuous);
  return TrialData::from_records(std::move(rows), ep);
}

TrialData read_trial_csv_file(const std::string& path, std::optional<Endpoint> endpoint) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_trial_csv(in, endpoint);
}

std::string simulation_to_json(const SimulationOutput& sim, const TrialConfig& config) {
  const auto& data = sim.data;
  ordered_json doc;
  doc["endpoint"] = to_string(data.endpoint());
  doc["num_arms"] = config.num_arms;
  doc["n_arm"] = config.n_arm;
  doc["d"] = config.entry_times;
  doc["period_blocks"] = config.period_blocks;
  doc["trend"] = to_string(config.trend);
  doc["lambda"] = config.lambda;
  doc["N"] = data.size();
  doc["n_periods"] = data.num_periods();

  ordered_json periods = ordered_json::array();
  for (const auto& p : data.periods().periods()) {
    periods.push_back({{"period", p.index},
                       {"start_j", p.start_j},
                       {"end_j", p.end_j},
                       {"active_arms", p.active_arms}});
  }
  doc["periods"] = std::move(periods);

  ordered_json windows = ordered_json::array();
  for (const auto& w : data.arm_windows()) {
    windows.push_back({{"arm", w.arm},
                       {"start_j", w.start_j},
                       {"end_j", w.end_j},
                       {"first_period", w.first_period},
                       {"last_period", w.last_period}});
  }
  doc["arm_windows"] = std::move(windows);

  ordered_json cols;
  std::vector<int> j, treatment, period;
  std::vector<double> response;
  for (const auto& r : data.rows()) {
    j.push_back(r.j);
    response.push_back(r.response);
    treatment.push_back(r.treatment);
    period.push_back(r.period);
  }
  cols["j"] = j;
  cols["response"] = response;
  cols["treatment"] = treatment;
  cols["period"] = period;
  cols[data.endpoint() == Endpoint::binary ? "prob" : "mean"] = sim.model_values;
  cols["trend"] = sim.trend_values;
  doc["data"] = std::move(cols);
  return doc.dump(2);
}

std::string result_to_json(const AnalysisResult& result, bool diagnostics) {
  ordered_json doc;
  doc["p_val"] = result.p_val;
  doc["treat_effect"] = result.treat_effect;
  doc["lower_ci"] = result.lower_ci;
  doc["upper_ci"] = result.upper_ci;
  doc["reject_h0"] = result.reject_h0;
  if (result.model) {
    const auto& m = *result.model;
    ordered_json coef = ordered_json::array();
    for (const auto& c : m.coefficients) {
      coef.push_back({{"term", c.label},
                      {"estimate", c.estimate},
                      {"std_error", c.std_error},
                      {"statistic", c.statistic}});
    }
    ordered_json model;
    model["coefficients"] = std::move(coef);
    model["n_obs"] = m.n_obs;
    model["df_residual"] = m.df_residual;
    if (result.model->log_likelihood != 0.0) model["log_likelihood"] = m.log_likelihood;
    if (result.model->residual_variance != 0.0) model["residual_variance"] = m.residual_variance;
    model["iterations"] = m.iterations;
    model["converged"] = m.converged;
    doc["model"] = std::move(model);
  }
  if (!diagnostics) return doc.dump(2);
  if (result.sampler) {
    ordered_json s;
    s["draws"] = result.sampler->draws;
    s["effective_draws"] = result.sampler->effective_draws;
    ordered_json acc = ordered_json::object();
    for (const auto& a : result.sampler->acceptance) acc[a.block] = a.rate;
    s["acceptance"] = std::move(acc);
    doc["sampler"] = std::move(s);
  }
  doc["method"] = to_string(result.method);
  doc["arm"] = result.arm;
  doc["alpha"] = result.alpha;
  return doc.dump(2);
}

}  // namespace ncc
