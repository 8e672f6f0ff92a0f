#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"

using namespace nct;
using namespace nct::cli;
namespace fs = std::filesystem;

namespace {

int run_args(std::vector<std::string> args) {
  args.insert(args.begin(), "nct");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  fs::path d = fs::temp_directory_path() / ("nct_cli_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::vector<std::string> csv_rows(const std::string& csv) {
  std::vector<std::string> rows;
  std::istringstream is(csv);
  std::string line;
  while (std::getline(is, line))
    if (!line.empty() && line[0] != '#') rows.push_back(line);
  return rows;  // header first
}

}  // namespace

TEST_CASE("config loading and validation") {
  RunConfig c = RunConfig::load("");
  CHECK(c.integer("q") == 1);
  CHECK(c.fingerprint().size() == 16);
  CHECK(RunConfig::load("{\"seed\": 2}").fingerprint() != c.fingerprint());
  CHECK(RunConfig::load("{\"p\": 1, \"q\": 2, \"d\": 4, \"theta\": 0.2}").params().eth() == doctest::Approx(-0.3));

  CHECK_THROWS_AS(RunConfig::load("{\"bogus\": 1}"), ConfigError);
  CHECK_THROWS_AS(RunConfig::load("{\"p\": 1, \"q\": 2, \"d\": 3}"), ConfigError);
  CHECK_THROWS_AS(RunConfig::load("{\"p\": 0.5}"), ConfigError);
  CHECK_THROWS_AS(RunConfig::load("{\"grid_t\": 1}"), ConfigError);
  CHECK_THROWS_AS(RunConfig::load("{\"theta_limit\": 0.0}"), ConfigError);
  CHECK_THROWS_AS(RunConfig::load("{\"vector\": \"hermite:x\"}"), ConfigError);
  CHECK_THROWS_AS(RunConfig::load("{\"norm\": {\"a\": 1}}"), ConfigError);
  CHECK_THROWS_AS(RunConfig::load("", {"noequals"}), ConfigError);
  try {
    RunConfig::load("{\n\"p\": 1,\n");
    FAIL("parse error expected");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  try {
    RunConfig::load("{\"k_max\": \"eight\"}");
    FAIL("type error expected");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("k_max") != std::string::npos);
  }
  CHECK(RunConfig::load("", {"k_max=3", "vector=gaussian"}).str("vector") == "gaussian");
}

TEST_CASE("vector tags") {
  ModuleParams P(1, 2, 2, 0.8);
  CHECK(vector_from_tag("zero", P).is_zero());
  CHECK(vector_from_tag("gaussian", P).dim() == 2);
  SchwartzVector h = vector_from_tag("hermite:2", P);
  CHECK(l2_norm(h) == doctest::Approx(1.0).epsilon(1e-10));
  SchwartzVector w = vector_from_tag("dilated:2:hermite:2", P);
  CHECK(l2_norm(w) > 0.0);
  CHECK_THROWS_AS(vector_from_tag("dilated:0:gaussian", P), ParameterError);
  CHECK_THROWS_AS(vector_from_tag("laguerre:1", P), ParameterError);
}

TEST_CASE("exit codes") {
  fs::path d = fresh_dir("exit");
  CHECK(run_args({"invariants", "-o", d.string()}) == kPass);
  CHECK(slurp(d / "invariants.json").find("\"pass\": true") != std::string::npos);
  CHECK(run_args({"invariants", "-o", d.string(), "--break-tolerance"}) == kInvariantFailure);
  CHECK(slurp(d / "invariants.json").find("\"pass\": false") != std::string::npos);
  CHECK(run_args({"invariants", "-o", d.string(), "--set", "d=3", "--set", "q=2", "--set", "p=1"}) == kConfigError);
  CHECK(run_args({"inner-product", "-c", (d / "missing.json").string()}) == kConfigError);
  CHECK(run_args({"no-such-command"}) == kConfigError);
}

TEST_CASE("dnorm sweep: single row, zero vector, reproducible bytes") {
  fs::path a = fresh_dir("sweep_a"), b = fresh_dir("sweep_b");
  const std::vector<std::string> base = {"--set", "grid_directions=4", "--set", "grid_t=3",
                                         "--set", "box_radius=6",     "--set", "k_min=3", "--set", "k_max=3"};
  auto with = [&](std::string cmd, fs::path out, std::vector<std::string> extra) {
    std::vector<std::string> args = {cmd, "-o", out.string()};
    args.insert(args.end(), base.begin(), base.end());
    args.insert(args.end(), extra.begin(), extra.end());
    return run_args(args);
  };
  REQUIRE(with("dnorm-sweep", a, {}) == kPass);
  REQUIRE(with("dnorm-sweep", b, {}) == kPass);
  const std::string csv = slurp(a / "dnorm-sweep.csv");
  CHECK(csv == slurp(b / "dnorm-sweep.csv"));
  CHECK(slurp(a / "dnorm-sweep.json") == slurp(b / "dnorm-sweep.json"));
  CHECK(csv.rfind("# nct dnorm-sweep fingerprint=", 0) == 0);
  CHECK(csv_rows(csv).size() == 2);

  REQUIRE(with("dnorm-sweep", a, {"--set", "vector=zero"}) == kPass);
  auto rows = csv_rows(slurp(a / "dnorm-sweep.csv"));
  REQUIRE(rows.size() == 2);
  CHECK(rows[1] == "3,0.8321067811865476,1,0,0,0,0");
}

TEST_CASE("laguerre table") {
  fs::path d = fresh_dir("lag");
  REQUIRE(run_args({"laguerre-approx", "-o", d.string(), "--set", "cesaro_N=[0]"}) == kPass);
  auto rows = csv_rows(slurp(d / "laguerre-approx.csv"));
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == "eth,N,normalization,l1_rdr_error");
  REQUIRE(run_args({"laguerre-approx", "-o", d.string(), "--set", "cesaro_N=[4,16]", "--set", "eth_min=0.9",
                    "--set", "eth_max=1.1", "--set", "eth_points=5"}) == kPass);
  CHECK(csv_rows(slurp(d / "laguerre-approx.csv")).size() == 1 + 5 * 2);
}

TEST_CASE("bridge-length table on a small configuration") {
  fs::path a = fresh_dir("bridge_a"), b = fresh_dir("bridge_b");
  const std::vector<std::string> small = {"--set", "anchor_N=0",          "--set", "anchor_random_extra=1",
                                          "--set", "anchor_density_samples=0", "--set", "anchor_grid_directions=4",
                                          "--set", "anchor_grid_t=3",     "--set", "anchor_box=6",
                                          "--set", "pivot_orders=[4,6]",  "--set", "bridge_box=6",
                                          "--set", "sample_budget=4",     "--set", "imprint_samples=1",
                                          "--set", "h_values=[0.1,0.05]"};
  for (const auto& out : {a, b}) {
    std::vector<std::string> args = {"bridge-length", "-o", out.string()};
    args.insert(args.end(), small.begin(), small.end());
    REQUIRE(run_args(args) == kPass);
  }
  const std::string csv = slurp(a / "bridge-length.csv");
  CHECK(csv == slurp(b / "bridge-length.csv"));
  auto rows = csv_rows(csv);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] ==
        "theta,vartheta,h,pivot_order,reach_modular,imprint_a,imprint_b,basic_estimate,total,seed,grid_fingerprint");
}
