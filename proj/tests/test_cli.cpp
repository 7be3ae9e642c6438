#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include <doctest.h>

#include "spinchain/cli.hpp"

using namespace spinchain;
using namespace spinchain::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("spinchain_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string first_line(const fs::path& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  return line;
}

RunConfig fast_config(const fs::path& out) {
  RunConfig c;
  c.max_phase_step = kTwoPi / 20.0;
  c.out_dir = out;
  return c;
}

}  // namespace

TEST_CASE("default configuration is the reference chain") {
  const RunConfig c;
  CHECK_NOTHROW(c.validate());
  const ChainParameters p = c.params();
  const ChainParameters r = ChainParameters::reference();
  CHECK(p.larmor == r.larmor);
  CHECK(p.j1 == r.j1);
  CHECK(p.j2 == r.j2);
  CHECK(c.rabi() == doctest::Approx(mhz(0.1)));
}

TEST_CASE("configuration JSON") {
  const auto j = nlohmann::json::parse(R"({"jprime": 0.0, "rabi": 0.135225, "step": 1e-5,
                                           "larmor": [90, 210, 400, 800], "k_max": 5})");
  const RunConfig c = config_from_json(j);
  CHECK(c.jprime_mhz == 0.0);
  CHECK(c.rabi_mhz == 0.135225);
  CHECK(c.step_us == 1e-5);
  CHECK(c.larmor_mhz[1] == 210.0);
  CHECK(c.k_max == 5);
  CHECK(c.j_mhz == 10.0);

  const RunConfig back = config_from_json(config_to_json(c));
  CHECK(config_to_json(back) == config_to_json(c));

  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"jprim": 0.1})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"rabi": "fast"})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"larmor": [1, 2]})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse("[1, 2]")), ConfigError);
}

TEST_CASE("configuration validation") {
  RunConfig c;
  c.rabi_mhz = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.larmor_mhz[3] = c.larmor_mhz[0];
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.omega_first = 0.2;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.k_min = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.record_stride = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("load_config reports unreadable and malformed files") {
  const fs::path dir = scratch_dir("load");
  fs::create_directories(dir);
  CHECK_THROWS_AS(load_config(dir / "missing.json"), ConfigError);
  std::ofstream(dir / "bad.json") << "{not json";
  CHECK_THROWS_AS(load_config(dir / "bad.json"), ConfigError);
  std::ofstream(dir / "good.json") << R"({"j": 12.5})";
  CHECK(load_config(dir / "good.json").j_mhz == 12.5);
}

TEST_CASE("distribution and expectation CSVs") {
  Probabilities p = Probabilities::Zero();
  p[9] = 1.0;
  std::ostringstream dist;
  write_distribution_csv(dist, p);
  CHECK(dist.str().rfind("state,x,y,probability\n0,0,0,0\n", 0) == 0);
  CHECK(dist.str().find("\n9,2,1,1\n") != std::string::npos);

  Trajectory t;
  TrajectorySample s;
  s.time = 1.5;
  s.probabilities = p;
  t.samples.push_back(s);
  std::ostringstream exp;
  write_expectations_csv(exp, t);
  CHECK(exp.str() == "t,iz0,iz1,iz2,iz3\n1.5,-0.5,0.5,0.5,-0.5\n");
}

TEST_CASE("outcome JSON") {
  ShorOutcome o;
  o.probabilities[1] = 1.0;
  o.marginal = {1.0, 0.0, 0.0, 0.0};
  o.peaks = {0};
  o.peak_spacing = 4;
  o.period = 1;
  const nlohmann::json j = outcome_to_json(o, FidelityReport{{0.5, 0.0}, 0.5, 0.5});
  CHECK(j.at("probabilities").size() == 16);
  CHECK(j.at("period") == 1);
  CHECK(j.at("delta_x") == 4);
  CHECK(j.at("factors").is_null());
  CHECK(j.at("fidelity").at("abs") == 0.5);
}

TEST_CASE("rabi-table command") {
  const fs::path dir = scratch_dir("table");
  RunConfig c = fast_config(dir);
  c.k_min = 1;
  c.k_max = 1;
  std::ostringstream log;
  CHECK(cmd_rabi_table(c, log) == kSuccess);
  const std::string csv = slurp(dir / "rabi_table.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);

  c.k_min = 0;
  CHECK(cmd_rabi_table(c, log) == kUsageError);
}

TEST_CASE("sweep command rejects an empty grid") {
  RunConfig c = fast_config(scratch_dir("empty"));
  c.omega_first = 0.15;
  c.omega_last = 0.07;
  std::ostringstream log;
  CHECK(cmd_sweep(c, SweepVariable::omega, log) == kUsageError);
}

TEST_CASE("run-shor artifacts are complete and reproducible") {
  const fs::path a = scratch_dir("run_a");
  const fs::path b = scratch_dir("run_b");
  std::ostringstream log_a, log_b;
  REQUIRE(cmd_run_shor(fast_config(a), log_a) == kSuccess);
  REQUIRE(cmd_run_shor(fast_config(b), log_b) == kSuccess);
  CHECK(log_a.str() == log_b.str());
  CHECK(log_a.str().find("factors: (2, 4)") != std::string::npos);

  for (const char* stage : {"superposition", "oracle", "fourier"}) {
    const std::string traj = std::string("trajectory_") + stage + ".csv";
    const std::string expv = std::string("expectations_") + stage + ".csv";
    CHECK(first_line(a / traj).rfind("t,p0,p1,", 0) == 0);
    CHECK(first_line(a / expv) == "t,iz0,iz1,iz2,iz3");
    CHECK(slurp(a / traj) == slurp(b / traj));
    CHECK(slurp(a / expv) == slurp(b / expv));
  }
  CHECK(slurp(a / "final_distribution.csv") == slurp(b / "final_distribution.csv"));
  CHECK(slurp(a / "outcome.json") == slurp(b / "outcome.json"));

  const auto outcome = nlohmann::json::parse(slurp(a / "outcome.json"));
  CHECK(outcome.at("period") == 2);
  CHECK(outcome.at("factors").at(0) == 2);
}
