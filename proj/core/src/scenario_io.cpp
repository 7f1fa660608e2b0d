#include "ncc/scenario_io.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace ncc {

using nlohmann::json;

namespace {

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(key, "has the wrong type");
  }
}

template <typename T>
std::vector<T> list_or(const json& j, const char* key, std::vector<T> fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  if (!it->is_array()) return {get_or<T>(j, key, T{})};
  try {
    return it->get<std::vector<T>>();
  } catch (const json::exception&) {
    throw ConfigError(key, "has the wrong element type");
  }
}

TrialConfig config_from(const json& j) {
  TrialConfig c;
  c.endpoint = parse_endpoint(get_or<std::string>(j, "endpoint", "binary"));
  c.num_arms = get_or(j, "num_arms", c.num_arms);
  c.n_arm = get_or(j, "n_arm", c.n_arm);
  c.entry_times = list_or<int>(j, "d", std::vector<int>(static_cast<std::size_t>(std::max(c.num_arms, 0)), 0));
  c.period_blocks = get_or(j, "period_blocks", c.period_blocks);
  const bool binary = c.endpoint == Endpoint::binary;
  if (binary) {
    c.control_response = get_or(j, "p0", c.control_response);
    c.effects = list_or<double>(j, "OR", std::vector<double>(static_cast<std::size_t>(std::max(c.num_arms, 0)), 1.0));
  } else {
    c.control_response = get_or(j, "mu0", 0.0);
    c.effects = list_or<double>(j, "theta", std::vector<double>(static_cast<std::size_t>(std::max(c.num_arms, 0)), 0.0));
    c.sigma = get_or(j, "sigma", c.sigma);
  }
  c.lambda = list_or<double>(j, "lambda", std::vector<double>(static_cast<std::size_t>(std::max(c.num_arms, 0)) + 1, 0.0));
  c.trend = parse_trend(get_or<std::string>(j, "trend", "linear"));
  c.n_peak = get_or(j, "N_peak", c.n_peak);
  c.n_wave = get_or(j, "n_wave", c.n_wave);
  return c;
}

void chain_from(const json& j, mcmc::ChainSettings& chain) {
  chain.burn_in = get_or(j, "burn_in", chain.burn_in);
  chain.draws = get_or(j, "draws", chain.draws);
  chain.thin = get_or(j, "thin", chain.thin);
}

Scenario scenario_from(const json& j, std::size_t position) {
  Scenario s;
  s.id = j.contains("id") ? (j["id"].is_string() ? j["id"].get<std::string>() : j["id"].dump())
                          : "scenario" + std::to_string(position + 1);
  s.config = config_from(j);
  std::vector<int> all_arms;
  for (int k = 1; k <= s.config.num_arms; ++k) all_arms.push_back(k);
  s.arms = list_or<int>(j, "arms", all_arms);
  for (const auto& m : list_or<std::string>(j, "methods", {"fixmodel", "sepmodel", "poolmodel"}))
    s.methods.push_back(parse_method(m));
  s.alpha = get_or(j, "alpha", s.alpha);
  s.settings.fix_ncc = get_or(j, "ncc", s.settings.fix_ncc);
  if (auto it = j.find("map"); it != j.end()) {
    auto& m = s.settings.map;
    m.opt = get_or(*it, "opt", m.opt);
    m.prior_prec_tau = get_or(*it, "prior_prec_tau", m.prior_prec_tau);
    m.prior_prec_eta = get_or(*it, "prior_prec_eta", m.prior_prec_eta);
    m.robustify = get_or(*it, "robustify", m.robustify);
    m.weight = get_or(*it, "weight", m.weight);
    chain_from(*it, m.chain);
  }
  if (auto it = j.find("timemachine"); it != j.end()) {
    auto& t = s.settings.timemachine;
    t.prec_theta = get_or(*it, "prec_theta", t.prec_theta);
    t.prec_eta = get_or(*it, "prec_eta", t.prec_eta);
    t.tau_a = get_or(*it, "tau_a", t.tau_a);
    t.tau_b = get_or(*it, "tau_b", t.tau_b);
    t.bucket_size = get_or(*it, "bucket_size", t.bucket_size);
    t.prec_a = get_or(*it, "prec_a", t.prec_a);
    t.prec_b = get_or(*it, "prec_b", t.prec_b);
    chain_from(*it, t.chain);
  }
  return s;
}

json parse_json(std::istream& is) {
  try {
    return json::parse(is);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string part; std::getline(ss, part, sep);) {
    const auto b = part.find_first_not_of(" \t\r\"");
    const auto e = part.find_last_not_of(" \t\r\"");
    out.push_back(b == std::string::npos ? std::string() : part.substr(b, e - b + 1));
  }
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

TrialConfig trial_config_from_json(const std::string& text) {
  std::istringstream is(text);
  const json j = parse_json(is);
  if (!j.is_object()) throw ParseError("trial configuration must be a JSON object");
  return config_from(j);
}

std::vector<Scenario> read_scenarios_json(std::istream& is) {
  const json doc = parse_json(is);
  json defaults = json::object();
  json list;
  if (doc.is_array()) {
    list = doc;
  } else if (doc.is_object() && doc.contains("scenarios")) {
    list = doc["scenarios"];
    for (auto it = doc.begin(); it != doc.end(); ++it)
      if (it.key() != "scenarios") defaults[it.key()] = it.value();
  } else {
    throw ParseError("scenario grid must be an array or an object with a 'scenarios' array");
  }
  if (!list.is_array()) throw ParseError("'scenarios' must be an array");
  std::vector<Scenario> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (!list[i].is_object()) throw ParseError("scenario " + std::to_string(i + 1) + " is not an object");
    json merged = defaults;
    merged.update(list[i]);
    out.push_back(scenario_from(merged, i));
  }
  if (out.empty()) throw Error("empty scenario list");
  return out;
}

std::vector<Scenario> read_scenarios_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError("line 1: empty scenario file");
  const auto header = split(line, ',');
  static const std::map<std::string, bool> list_cols{{"d", true},      {"OR", true},
                                                     {"theta", true},  {"lambda", true},
                                                     {"arms", true},   {"methods", true}};
  static const std::map<std::string, bool> string_cols{{"id", true}, {"endpoint", true},
                                                       {"trend", true}};
  std::vector<Scenario> out;
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split(line, ',');
    if (cells.size() != header.size())
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(header.size()) + " fields, got " + std::to_string(cells.size()));
    json row = json::object();
    for (std::size_t c = 0; c < header.size(); ++c) {
      const auto& key = header[c];
      const auto& val = cells[c];
      if (val.empty()) continue;
      try {
        if (list_cols.contains(key)) {
          json arr = json::array();
          for (const auto& el : split(val, ';')) {
            if (key == "methods") {
              arr.push_back(el);
            } else {
              arr.push_back(json::parse(el));
            }
          }
          row[key] = arr;
        } else if (string_cols.contains(key)) {
          row[key] = val;
        } else {
          row[key] = json::parse(val);
        }
      } catch (const json::exception&) {
        throw ParseError("line " + std::to_string(line_no) + ": cannot parse column '" + key +
                         "' value '" + val + "'");
      }
    }
    out.push_back(scenario_from(row, out.size()));
  }
  if (out.empty()) throw Error("empty scenario list");
  return out;
}

std::vector<Scenario> read_scenarios_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") return read_scenarios_csv(in);
  return read_scenarios_json(in);
}

}  // namespace ncc
