#include "pathsum/error.hpp"
#include "pathsum/scenario.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace pathsum;
namespace fs = std::filesystem;

namespace {

std::string config_error_message(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
    return e.what();
  }
  FAIL("expected a ConfigError");
  return {};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("pathsum_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Example 1 on a coarse grid; cheap enough for unit tests.
std::string small_config(const fs::path& out, const std::string& extra = "") {
  return R"({
  "name": "small",
  "medium": {"kind": "linear", "x_plus": 1, "z_minus": 0.5, "z_plus": 1, "c_minus": 2, "c_plus": 1},
  "times": ["2 t_plus"],
  "samples": {"count": 9},
  "series": {"orders": [0, 2]},
  "terms": {"max_order": 2, "count": 4},
  "oracle": {"cells": 400},
  "criteria": [],
  "output": {"dir": ")" + out.string() + "\"}" + extra + "\n}";
}

int run_cli(const std::string& args) {
  const char* cli = std::getenv("PATHSUM_CLI");
  REQUIRE(cli != nullptr);
  const int status = std::system((std::string(cli) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("quantities carry their units") {
  const Quantity q = parse_quantity("3 t_plus", "times[0]");
  CHECK(q.unit == Quantity::Unit::TPlus);
  CHECK(std::abs(q.resolve(std::log(2.0), 1.0) - 3.0 * std::log(2.0)) < 1e-14);
  CHECK(parse_quantity("t_plus", "t").value == 1.0);
  CHECK(parse_quantity("-0.5 x_plus", "x").resolve(9.0, 2.0) == -1.0);
  CHECK(parse_quantity("1.25", "x").unit == Quantity::Unit::Absolute);
  try {
    parse_quantity("3 seconds", "times[1]");
    FAIL("accepted an unknown unit");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
    CHECK(std::string(e.what()).find("times[1]") != std::string::npos);
  }
}

TEST_CASE("config errors name the offending key") {
  CHECK(config_error_message(R"({"medium": {"kind": "linear", "z_minus": -1}})").find("medium") !=
        std::string::npos);
  CHECK(config_error_message(R"({"series": {"nodse": 8}})").find("series.nodse") != std::string::npos);
  CHECK(config_error_message(R"({"series": {"orders": [1]}})").find("series.orders") != std::string::npos);
  CHECK(config_error_message(R"({"oracle": {"limiter": "vanleer"}})").find("oracle.limiter") !=
        std::string::npos);
  CHECK(config_error_message(R"({"times": ["2 t_plus", "soon"]})").find("times[1]") != std::string::npos);
  CHECK(config_error_message(R"({"criteria": [11]})").find("criteria") != std::string::npos);
  CHECK(config_error_message("{not json").find("malformed") != std::string::npos);
}

TEST_CASE("every preset parses and round-trips") {
  REQUIRE(preset_names().size() >= 7);
  for (const std::string& name : preset_names()) {
    const Scenario sc = load_scenario(name);
    CHECK(sc.name == name);
    CHECK_NOTHROW(parse_scenario(preset_json(name)));
  }
  CHECK(load_scenario("limit-sequence").sweep_values.size() == 4);
  CHECK_THROWS_AS(preset_json("example9"), Error);
}

TEST_CASE("overrides replace the series settings") {
  Scenario sc = load_scenario("example1");
  Overrides o;
  o.order = 4;
  o.nodes = 12;
  o.oracle_cells = 500;
  apply_overrides(sc, o);
  CHECK(sc.orders == std::vector<int>{4});
  CHECK(sc.terms.max_order == 5);
  CHECK(sc.quadrature.nodes == 12);
  CHECK(sc.oracle.cells == 500);
}

TEST_CASE("a run writes identical files twice") {
  const fs::path a = fresh_dir("a");
  const fs::path b = fresh_dir("b");
  const Scenario sa = parse_scenario(small_config(a));
  const Scenario sb = parse_scenario(small_config(b));
  write_results(sa, compute_scenario(sa));
  write_results(sb, compute_scenario(sb));
  for (const char* file : {"profile.csv", "terms.csv"}) {
    REQUIRE(fs::exists(a / file));
    CHECK(slurp(a / file) == slurp(b / file));
  }
  // The summary names its own output paths, which differ; compare the rest.
  std::string ja = slurp(a / "summary.json");
  std::string jb = slurp(b / "summary.json");
  for (std::string* j : {&ja, &jb}) {
    for (const fs::path& dir : {a, b}) {
      const std::string s = dir.string();
      for (auto pos = j->find(s); pos != std::string::npos; pos = j->find(s)) j->replace(pos, s.size(), "DIR");
    }
  }
  CHECK(ja == jb);
  const std::string header = slurp(a / "profile.csv").substr(0, 60);
  CHECK(header.rfind("t,x,p_series_0,p_series_2,p_oracle,abs_diff", 0) == 0);
}

TEST_CASE("a coarse rule is reported as a failed check, not thrown") {
  const fs::path out = fresh_dir("coarse");
  const std::string text = R"({
  "name": "coarse",
  "medium": {"kind": "sine", "x_plus": 1, "z_minus": 0.25, "z_plus": 1, "c_minus": 2, "c_plus": 1,
             "amplitude": 0.1, "frequency": 10},
  "times": ["2 t_plus"],
  "samples": {"count": 5},
  "series": {"orders": [2], "nodes": 4, "rel_tol": 1e-12, "abs_tol": 0},
  "oracle": {"enabled": false},
  "criteria": [],
  "output": {"dir": ")" + out.string() + "\"}\n}";
  const VerifyReport report = verify_scenario(parse_scenario(text));
  CHECK_FALSE(report.ok());
  REQUIRE_FALSE(report.checks.empty());
  CHECK(report.checks.front().detail.find("ToleranceNotMet") != std::string::npos);
}

TEST_CASE("the strong bound is skipped outside its hypotheses") {
  const fs::path out = fresh_dir("steep");
  std::string text = small_config(out);
  text.replace(text.find("\"z_minus\": 0.5"), 14, "\"z_minus\": 0.02");
  const std::string series = "\"series\": {\"orders\": [0, 2]}";
  text.replace(text.find(series), series.size(),
               "\"series\": {\"orders\": [0, 2], \"rel_tol\": 1e-4, \"refinements\": 3}");
  const Scenario sc = parse_scenario(text);
  const auto results = compute_scenario(sc);
  bool seen = false;
  for (const CheckResult& c : results.front().checks) {
    if (c.name != "strong bound") continue;
    seen = true;
    CHECK(c.status == CheckStatus::Skipped);
    CHECK(c.detail.find("HypothesisViolated") != std::string::npos);
  }
  CHECK(seen);
}

TEST_CASE("verify with selected criteria") {
  const fs::path out = fresh_dir("verify");
  std::string text = small_config(out);
  text.replace(text.find("\"criteria\": []"), 14, "\"criteria\": [1, 2]");
  const VerifyReport report = verify_scenario(parse_scenario(text));
  CHECK(report.ok());
  int numbered = 0;
  for (const CheckResult& c : report.checks) numbered += c.criterion > 0;
  CHECK(numbered == 2);
}

TEST_CASE("command line exit codes") {
  const fs::path out = fresh_dir("cli");
  const fs::path config = out / "small.json";
  std::ofstream(config) << small_config(out / "results");
  CHECK(run_cli("list-presets") == 0);
  CHECK(run_cli("show-preset example1") == 0);
  CHECK(run_cli("run " + config.string()) == 0);
  CHECK(fs::exists(out / "results" / "summary.json"));
  CHECK(run_cli("run " + config.string() + " --order 2 --out-dir " + (out / "n2").string()) == 0);
  CHECK(fs::exists(out / "n2" / "profile.csv"));
  CHECK(run_cli("verify " + config.string()) == 0);

  const fs::path broken = out / "broken.json";
  std::ofstream(broken) << R"({"medium": {"kind": "wedge"}})";
  CHECK(run_cli("run " + broken.string()) == 2);
  CHECK(run_cli("run no-such-preset") == 2);

  const fs::path coarse = out / "coarse.json";
  std::ofstream(coarse) << R"({
  "medium": {"kind": "sine", "z_minus": 0.25, "z_plus": 1, "c_minus": 2, "c_plus": 1,
             "amplitude": 0.1, "frequency": 10},
  "times": ["2 t_plus"], "samples": {"count": 5},
  "series": {"orders": [2], "rel_tol": 1e-12, "abs_tol": 0},
  "oracle": {"enabled": false}, "criteria": [],
  "output": {"dir": ")" + (out / "coarse").string() + "\"}}";
  CHECK(run_cli("verify " + coarse.string() + " --nodes 4") == 1);
}
