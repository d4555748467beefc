#pragma once

#include "pathsum/checks.hpp"
#include "pathsum/fv_oracle.hpp"
#include "pathsum/medium.hpp"
#include "pathsum/path_series.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pathsum {

/// A length or time given absolutely or as a multiple of x_plus or t_plus.
struct Quantity {
  enum class Unit { Absolute, TPlus, XPlus };
  double value = 0.0;
  Unit unit = Unit::Absolute;

  double resolve(double t_plus, double x_plus) const;
};

/// Parses "3", "3 t_plus", "t_plus", "0.5 x_plus". Throws ConfigError naming `key`.
Quantity parse_quantity(const std::string& text, const std::string& key);

struct MediumSpec {
  std::string kind = "linear";  // linear, sine, piecewise, tabulated, sharp, shallow_water
  double x_plus = 1.0;
  double z_minus = 1.0;
  double z_plus = 1.0;
  double c_minus = 1.0;
  double c_plus = 1.0;
  SineOverlay overlay;
  std::vector<Knot> knots;
  Tabulated table;
  double h_minus = 1.0;  // shallow water depths at 0 and x_plus
  double h_plus = 1.0;
  double gravity = 9.81;
  int depth_samples = 65;

  MediumProfile build() const;
};

struct DataSpec {
  std::string kind = "step";  // step, delta, pulse
  double width = 1.0;         // pulse support [-width, 0]

  InitialData build() const;
};

struct SampleSpec {
  std::optional<Quantity> from;  // default: as far left as the wave reaches
  std::optional<Quantity> to;    // default: as far right as the wave reaches
  int count = 101;
  std::vector<Quantity> points;  // overrides the range when non-empty
};

struct TermsSpec {
  int max_order = 4;
  Quantity from{0.0, Quantity::Unit::TPlus};
  Quantity to{3.0, Quantity::Unit::TPlus};
  int count = 31;
};

struct OracleSpec {
  bool enabled = true;
  int cells = 8000;
  Limiter limiter = Limiter::Superbee;
  double cfl = 0.9;
  double delta_width_cells = 4.0;
  std::optional<double> tolerance;  // max |series - oracle| accepted, if set
};

struct Scenario {
  std::string name = "scenario";
  MediumSpec medium;
  DataSpec data;
  std::vector<Quantity> times{{3.0, Quantity::Unit::TPlus}};
  SampleSpec samples;
  std::vector<int> orders{0, 2};
  QuadratureSpec quadrature;
  TermsSpec terms;
  OracleSpec oracle;
  /// Repeats the scenario once per value of the named medium field.
  std::string sweep_key;
  std::vector<double> sweep_values;
  /// Numbered acceptance criteria. When absent, verify runs all of them
  /// and run records none.
  std::optional<std::vector<int>> criteria;
  std::string out_dir = "results";
};

/// Parses a JSON scenario. Unknown or malformed keys raise ConfigError.
Scenario parse_scenario(const std::string& json_text);

/// A preset name or a path to a JSON file.
Scenario load_scenario(const std::string& name_or_path);

std::vector<std::string> preset_names();
/// Throws ConfigError for an unknown name.
std::string preset_json(const std::string& name);

struct Overrides {
  std::optional<int> order;
  std::optional<int> nodes;
  std::optional<double> tol;
  std::optional<std::string> out_dir;
  std::optional<int> oracle_cells;
};

void apply_overrides(Scenario& scenario, const Overrides& overrides);

struct ProfileRow {
  double t = 0.0;
  double x = 0.0;
  std::vector<double> series;  // one per requested order
  double oracle = 0.0;
};

struct TermRow {
  TermKind kind = TermKind::Transmission;
  int order = 0;
  double t = 0.0;
  double value = 0.0;
  double error = 0.0;
};

/// One measured series tail against one truncation bound.
struct BoundRow {
  std::string bound;  // "strong" or "uniform"
  std::string field;  // "T", "R", "w1" or "w2"
  double x = 0.0;
  double t = 0.0;
  int order = 0;  // N: terms through n = 2N (+1) are kept
  double measured = 0.0;
  double limit = 0.0;
};

/// One medium of a scenario (several when it sweeps).
struct ScenarioResult {
  std::string label;
  MediumSpec medium;
  double t_plus = 0.0;
  std::vector<int> orders;
  bool has_oracle = false;
  std::vector<ProfileRow> profile;
  std::vector<TermRow> terms;
  std::vector<BoundRow> bounds;
  std::vector<CheckResult> checks;  // scenario-level, criterion 0
};

/// Computes every run of the scenario. Library failures are rethrown as
/// ComputeError with the stage that raised them.
std::vector<ScenarioResult> compute_scenario(const Scenario& scenario);

/// Writes profile.csv and terms.csv per run (in a subdirectory per sweep
/// value) and one summary.json; returns the paths written. `acceptance`
/// holds numbered criteria already evaluated for the summary.
std::vector<std::string> write_results(const Scenario& scenario,
                                       const std::vector<ScenarioResult>& results,
                                       const std::vector<CheckResult>& acceptance = {});

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool ok() const;
};

/// Scenario-level checks for every run followed by the numbered criteria.
/// Failures, including library errors, are reported rather than thrown.
VerifyReport verify_scenario(const Scenario& scenario);

}  // namespace pathsum
