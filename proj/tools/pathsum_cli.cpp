// pathsum: run scenarios, verify them against the acceptance suite, list presets.
// Worker threads for the series come from PATHSUM_WORKERS.

#include "pathsum/error.hpp"
#include "pathsum/scenario.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

// Exit statuses.
constexpr int kOk = 0;
constexpr int kChecksFailed = 1;
constexpr int kConfigError = 2;
constexpr int kComputeError = 3;

int report_error(const pathsum::Error& e) {
  std::cerr << "error [" << pathsum::to_string(e.code()) << "] " << e.what() << "\n";
  return e.code() == pathsum::ErrorCode::ConfigError ? kConfigError : kComputeError;
}

void print_check(const pathsum::CheckResult& c) {
  if (c.criterion > 0)
    std::printf("[%s] criterion %d %s: %s\n", pathsum::to_string(c.status), c.criterion, c.name.c_str(),
                c.detail.c_str());
  else
    std::printf("[%s] %s: %s\n", pathsum::to_string(c.status), c.name.c_str(), c.detail.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reflection-series solutions of 1D variable-impedance acoustics"};
  app.require_subcommand(1);

  pathsum::Overrides overrides;
  int order = -1;
  int nodes = -1;
  double tol = -1.0;
  std::string out_dir;
  int oracle_cells = -1;
  auto add_overrides = [&](CLI::App* cmd) {
    cmd->add_option("--order", order, "series order N (terms through T_N and R_{N+1})")->check(CLI::NonNegativeNumber);
    cmd->add_option("--nodes", nodes, "Gauss-Legendre nodes per panel")->check(CLI::Range(4, 1000));
    cmd->add_option("--tol", tol, "relative quadrature tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--out-dir", out_dir, "directory for result files");
    cmd->add_option("--oracle-cells", oracle_cells, "finite-volume cells")->check(CLI::Range(10, 10000000));
  };

  std::string config;
  CLI::App* run = app.add_subcommand("run", "compute a scenario and write profile.csv, terms.csv, summary.json");
  run->add_option("config", config, "preset name or JSON file")->required();
  add_overrides(run);
  CLI::App* verify = app.add_subcommand("verify", "run the scenario checks and the acceptance criteria");
  verify->add_option("config", config, "preset name or JSON file")->required();
  add_overrides(verify);
  CLI::App* list = app.add_subcommand("list-presets", "list built-in scenarios");
  std::string preset;
  CLI::App* show = app.add_subcommand("show-preset", "print a preset as editable JSON");
  show->add_option("name", preset, "preset name")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      for (const std::string& name : pathsum::preset_names()) std::printf("%s\n", name.c_str());
      return kOk;
    }
    if (show->parsed()) {
      std::printf("%s\n", pathsum::preset_json(preset).c_str());
      return kOk;
    }

    if (order >= 0) overrides.order = order;
    if (nodes >= 0) overrides.nodes = nodes;
    if (tol > 0.0) overrides.tol = tol;
    if (!out_dir.empty()) overrides.out_dir = out_dir;
    if (oracle_cells >= 0) overrides.oracle_cells = oracle_cells;
    pathsum::Scenario scenario = pathsum::load_scenario(config);
    pathsum::apply_overrides(scenario, overrides);

    if (run->parsed()) {
      const auto results = pathsum::compute_scenario(scenario);
      std::vector<pathsum::CheckResult> acceptance;
      if (scenario.criteria && !scenario.criteria->empty()) {
        pathsum::AcceptanceOptions options;
        options.oracle_cells = scenario.oracle.cells;
        acceptance = pathsum::run_acceptance(*scenario.criteria, options);
      }
      for (const auto& r : results)
        for (const auto& c : r.checks) {
          pathsum::CheckResult labelled = c;
          labelled.name = r.label + ": " + c.name;
          print_check(labelled);
        }
      for (const auto& c : acceptance) print_check(c);
      for (const std::string& path : pathsum::write_results(scenario, results, acceptance))
        std::printf("wrote %s\n", path.c_str());
      return kOk;
    }

    const pathsum::VerifyReport report = pathsum::verify_scenario(scenario);
    for (const auto& c : report.checks) print_check(c);
    std::printf("%s\n", report.ok() ? "verify: pass" : "verify: FAIL");
    return report.ok() ? kOk : kChecksFailed;
  } catch (const pathsum::Error& e) {
    return report_error(e);
  }
}
