#include "doctest.h"

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

namespace {

struct Run {
  int status = -1;
  std::string out;
};

// stdout captured; stderr folded in when `merge` is set
Run run(const std::string& args, bool merge = false) {
  const std::string cmd = std::string(NCC_CLI_PATH) + " " + args + (merge ? " 2>&1" : " 2>/dev/null");
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const std::string& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

}  // namespace

TEST_CASE("simulate writes the trial schema deterministically") {
  REQUIRE(run("simulate --seed 5 -o cli_a.csv").status == 0);
  REQUIRE(run("simulate --seed 5 -o cli_b.csv").status == 0);
  const auto a = slurp("cli_a.csv");
  CHECK(a.rfind("j,response,treatment,period\n", 0) == 0);
  CHECK(a == slurp("cli_b.csv"));
}

TEST_CASE("simulate reads a config file and writes the full json") {
  write("cli_cfg.json", R"({"num_arms": 2, "d": [0, 50], "OR": [1.2, 1.0], "lambda": [0.1, 0.1, 0.1], "n_arm": 60})");
  REQUIRE(run("simulate --config cli_cfg.json --seed 2 -o cli_c.csv --full cli_c.json").status == 0);
  const auto j = nlohmann::json::parse(slurp("cli_c.json"));
  CHECK(j["num_arms"] == 2);
  CHECK(j["periods"].size() >= 2u);
}

TEST_CASE("invalid OR length names the field") {
  const auto r = run("simulate --num-arms 2 --OR 1 --lambda 0,0,0", true);
  CHECK(r.status != 0);
  CHECK(r.out.find("OR") != std::string::npos);
}

TEST_CASE("analyze prints the result keys") {
  REQUIRE(run("simulate --num-arms 2 --d 0,80 --OR 1,1 --lambda 0,0,0 --seed 3 -o cli_d.csv").status == 0);
  const auto r = run("analyze cli_d.csv --method fixmodel --arm 2");
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  for (const char* k : {"p_val", "treat_effect", "lower_ci", "upper_ci", "reject_h0", "model"})
    CHECK(j.contains(k));
  CHECK(j.size() == 6u);

  const auto b = run("analyze cli_d.csv --method timemachine --arm 2 --bucket-size 40 --burn-in 200 --draws 1000");
  REQUIRE(b.status == 0);
  CHECK(nlohmann::json::parse(b.out).size() == 5u);
}

TEST_CASE("sepmodel equals fixmodel on single-period data") {
  REQUIRE(run("simulate --seed 9 --n-arm 80 -o cli_e.csv").status == 0);
  const auto fix = run("analyze cli_e.csv --method fixmodel");
  const auto sep = run("analyze cli_e.csv --method sepmodel");
  REQUIRE(fix.status == 0);
  CHECK(fix.out == sep.out);
}

TEST_CASE("malformed csv names the line") {
  write("cli_bad.csv", "j,response,treatment,period\n1,0,0,1\n2,1,1\n3,0,1,1\n");
  const auto r = run("analyze cli_bad.csv", true);
  CHECK(r.status != 0);
  CHECK(r.out.find("line 3") != std::string::npos);
}

TEST_CASE("analysis errors exit nonzero") {
  REQUIRE(run("simulate --seed 1 -o cli_f.csv").status == 0);
  CHECK(run("analyze cli_f.csv --arm 4").status != 0);
  CHECK(run("analyze cli_f.csv --method mapprior").status != 0);
}

TEST_CASE("plot structure and determinism") {
  REQUIRE(run("simulate --num-arms 3 --d 0,100,250 --OR 1,1,1 --lambda 0,0,0,0 --seed 4 -o cli_g.csv").status == 0);
  REQUIRE(run("plot cli_g.csv --out cli_g1.svg").status == 0);
  REQUIRE(run("plot cli_g.csv --out cli_g2.svg").status == 0);
  const auto svg = slurp("cli_g1.svg");
  CHECK(svg == slurp("cli_g2.svg"));
  std::size_t bars = 0;
  for (auto p = svg.find("class=\"arm\""); p != std::string::npos; p = svg.find("class=\"arm\"", p + 1)) ++bars;
  CHECK(bars == 4u);
}

TEST_CASE("simstudy rows, counting and worker invariance") {
  write("cli_grid1.json", R"([{"id": "one", "n_arm": 40, "OR": [1], "lambda": [0, 0], "methods": ["fixmodel"]}])");
  const auto one = run("simstudy cli_grid1.json --nsim 4 --seed 1 --workers 1");
  REQUIRE(one.status == 0);
  std::istringstream lines(one.out);
  std::string header, row, extra;
  std::getline(lines, header);
  std::getline(lines, row);
  CHECK_FALSE(std::getline(lines, extra));
  const auto pos = [&](int field) {
    std::size_t p = 0;
    for (int i = 0; i < field; ++i) p = row.find(',', p) + 1;
    return std::stod(row.substr(p, row.find(',', p) - p));
  };
  const double rp = pos(6);
  CHECK((rp == 0.0 || rp == 0.25 || rp == 0.5 || rp == 0.75 || rp == 1.0));

  write("cli_grid2.json", R"({"n_arm": 40, "methods": ["fixmodel", "poolmodel"], "scenarios": [
      {"id": "p", "num_arms": 2, "d": [0, 20], "OR": [1, 1], "lambda": [0, 0, 0]},
      {"id": "q", "num_arms": 2, "d": [0, 30], "OR": [1, 2], "lambda": [0.5, 0.5, 0.5]}]})");
  const auto w1 = run("simstudy cli_grid2.json --nsim 6 --seed 8 --workers 1");
  const auto w4 = run("simstudy cli_grid2.json --nsim 6 --seed 8 --workers 4");
  REQUIRE(w1.status == 0);
  CHECK(w1.out == w4.out);
  int n_lines = 0;
  for (char ch : w1.out) n_lines += ch == '\n';
  CHECK(n_lines == 1 + 8);
}

TEST_CASE("missing subcommand is an error") {
  CHECK(run("").status != 0);
}
