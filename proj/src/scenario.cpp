#include "pathsum/scenario.hpp"

#include "pathsum/asymptotics.hpp"
#include "pathsum/characteristics.hpp"
#include "pathsum/error.hpp"

#include <json.hpp>

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace pathsum {

namespace {

using json = nlohmann::ordered_json;
constexpr const char* kVersion = "1.0.0";

[[noreturn]] void config_error(const std::string& key, const std::string& what) {
  throw Error(ErrorCode::ConfigError, key + ": " + what);
}

// A JSON object whose keys must all be consumed.
class Section {
public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) config_error(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string key(const std::string& name) const { return path_.empty() ? name : path_ + "." + name; }

  bool has(const std::string& name) {
    used_.insert(name);
    return j_.contains(name);
  }

  const json& raw(const std::string& name) {
    used_.insert(name);
    return j_.at(name);
  }

  double number(const std::string& name, double fallback) {
    if (!has(name)) return fallback;
    const json& v = j_.at(name);
    if (!v.is_number()) config_error(key(name), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) config_error(key(name), "expected a finite number");
    return d;
  }

  int integer(const std::string& name, int fallback) {
    if (!has(name)) return fallback;
    const json& v = j_.at(name);
    if (!v.is_number_integer()) config_error(key(name), "expected an integer");
    return v.get<int>();
  }

  bool boolean(const std::string& name, bool fallback) {
    if (!has(name)) return fallback;
    const json& v = j_.at(name);
    if (!v.is_boolean()) config_error(key(name), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& name, const std::string& fallback) {
    if (!has(name)) return fallback;
    const json& v = j_.at(name);
    if (!v.is_string()) config_error(key(name), "expected a string");
    return v.get<std::string>();
  }

  std::optional<Quantity> quantity(const std::string& name) {
    if (!has(name)) return std::nullopt;
    return to_quantity(j_.at(name), key(name));
  }

  Section child(const std::string& name) { return Section(raw(name), key(name)); }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key())) config_error(key(it.key()), "unknown key");
  }

  static Quantity to_quantity(const json& v, const std::string& key) {
    if (v.is_number()) return {v.get<double>(), Quantity::Unit::Absolute};
    if (v.is_string()) return parse_quantity(v.get<std::string>(), key);
    config_error(key, "expected a number or a string such as \"3 t_plus\"");
  }

private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

std::vector<double> number_list(const json& v, const std::string& key) {
  if (!v.is_array()) config_error(key, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) config_error(key, "expected an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<int> int_list(const json& v, const std::string& key) {
  if (!v.is_array()) config_error(key, "expected an array of integers");
  std::vector<int> out;
  for (const auto& e : v) {
    if (!e.is_number_integer()) config_error(key, "expected an array of integers");
    out.push_back(e.get<int>());
  }
  return out;
}

std::vector<Quantity> quantity_list(const json& v, const std::string& key) {
  if (!v.is_array()) config_error(key, "expected an array");
  std::vector<Quantity> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(Section::to_quantity(v[i], key + "[" + std::to_string(i) + "]"));
  return out;
}

Limiter parse_limiter(const std::string& s, const std::string& key) {
  if (s == "none") return Limiter::None;
  if (s == "minmod") return Limiter::Minmod;
  if (s == "mc") return Limiter::MC;
  if (s == "superbee") return Limiter::Superbee;
  config_error(key, "unknown limiter '" + s + "' (none, minmod, mc, superbee)");
}

const char* limiter_name(Limiter l) {
  switch (l) {
    case Limiter::None:
      return "none";
    case Limiter::Minmod:
      return "minmod";
    case Limiter::MC:
      return "mc";
    case Limiter::Superbee:
      return "superbee";
  }
  return "?";
}

const std::vector<std::string> kSweepKeys = {"x_plus", "z_minus", "z_plus", "c_minus", "c_plus"};

void set_medium_field(MediumSpec& m, const std::string& key, double value) {
  if (key == "x_plus") m.x_plus = value;
  if (key == "z_minus") m.z_minus = value;
  if (key == "z_plus") m.z_plus = value;
  if (key == "c_minus") m.c_minus = value;
  if (key == "c_plus") m.c_plus = value;
}

MediumSpec parse_medium(Section s) {
  MediumSpec m;
  m.kind = s.string("kind", m.kind);
  m.x_plus = s.number("x_plus", m.x_plus);
  m.z_minus = s.number("z_minus", m.z_minus);
  m.z_plus = s.number("z_plus", m.z_plus);
  m.c_minus = s.number("c_minus", m.c_minus);
  m.c_plus = s.number("c_plus", m.c_plus);
  m.overlay.amplitude = s.number("amplitude", m.overlay.amplitude);
  m.overlay.frequency = s.number("frequency", m.overlay.frequency);
  m.h_minus = s.number("h_minus", m.h_minus);
  m.h_plus = s.number("h_plus", m.h_plus);
  m.gravity = s.number("gravity", m.gravity);
  m.depth_samples = s.integer("depth_samples", m.depth_samples);
  if (s.has("knots")) {
    const json& knots = s.raw("knots");
    if (!knots.is_array()) config_error(s.key("knots"), "expected an array of objects");
    for (std::size_t i = 0; i < knots.size(); ++i) {
      Section k(knots[i], s.key("knots") + "[" + std::to_string(i) + "]");
      Knot knot;
      knot.x = k.number("x", 0.0);
      const double z = k.number("z", 1.0);
      const double c = k.number("c", 1.0);
      knot.z_left = k.number("z_left", z);
      knot.z_right = k.number("z_right", z);
      knot.c_left = k.number("c_left", c);
      knot.c_right = k.number("c_right", c);
      k.finish();
      m.knots.push_back(knot);
    }
  }
  if (s.has("table")) {
    Section t = s.child("table");
    for (const char* name : {"x", "z", "c"})
      if (!t.has(name)) config_error(t.key(name), "required");
    m.table.x = number_list(t.raw("x"), t.key("x"));
    m.table.z = number_list(t.raw("z"), t.key("z"));
    m.table.c = number_list(t.raw("c"), t.key("c"));
    t.finish();
  }
  s.finish();
  static const std::set<std::string> kinds = {"linear",    "sine",  "piecewise",
                                              "tabulated", "sharp", "shallow_water"};
  if (!kinds.count(m.kind))
    config_error(s.key("kind"), "unknown medium kind '" + m.kind +
                                    "' (linear, sine, piecewise, tabulated, sharp, shallow_water)");
  if (m.kind == "piecewise" && m.knots.empty()) config_error(s.key("knots"), "required for piecewise");
  if (m.kind == "tabulated" && m.table.x.empty()) config_error(s.key("table"), "required for tabulated");
  return m;
}

DataSpec parse_data(Section s) {
  DataSpec d;
  d.kind = s.string("kind", d.kind);
  d.width = s.number("width", d.width);
  s.finish();
  if (d.kind != "step" && d.kind != "delta" && d.kind != "pulse")
    config_error(s.key("kind"), "unknown data kind '" + d.kind + "' (step, delta, pulse)");
  if (d.kind == "pulse" && !(d.width > 0.0)) config_error(s.key("width"), "must be > 0");
  return d;
}

// Validates everything that needs the built medium.
void validate(const Scenario& sc) {
  std::vector<MediumSpec> media;
  if (sc.sweep_key.empty()) {
    media.push_back(sc.medium);
  } else {
    for (double v : sc.sweep_values) {
      MediumSpec m = sc.medium;
      set_medium_field(m, sc.sweep_key, v);
      media.push_back(m);
    }
  }
  for (const MediumSpec& m : media) {
    try {
      const MediumProfile profile = m.build();
      const TravelTimeMap map(profile);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ConfigError) throw;
      config_error("medium", std::string(to_string(e.code())) + ": " + e.what());
    }
  }
  try {
    sc.data.build();
  } catch (const Error& e) {
    config_error("data", std::string(to_string(e.code())) + ": " + e.what());
  }
  if (sc.times.empty()) config_error("times", "at least one time is required");
  for (std::size_t i = 0; i < sc.times.size(); ++i)
    if (sc.times[i].value < 0.0) config_error("times[" + std::to_string(i) + "]", "must be >= 0");
  if (sc.orders.empty()) config_error("series.orders", "at least one order is required");
  for (int n : sc.orders)
    if (n < 0 || n % 2 != 0) config_error("series.orders", "orders must be even and >= 0");
  if (sc.quadrature.nodes < 4) config_error("series.nodes", "G must be >= 4");
  if (!(sc.quadrature.rel_tol > 0.0)) config_error("series.rel_tol", "must be > 0");
  if (!(sc.quadrature.abs_tol >= 0.0)) config_error("series.abs_tol", "must be >= 0");
  if (sc.quadrature.refinements < 0) config_error("series.refinements", "must be >= 0");
  if (sc.samples.points.empty() && sc.samples.count < 2) config_error("samples.count", "must be >= 2");
  if (sc.terms.max_order < 0) config_error("terms.max_order", "must be >= 0");
  if (sc.terms.count < 1) config_error("terms.count", "must be >= 1");
  if (sc.oracle.cells < 10) config_error("oracle.cells", "must be >= 10");
  if (!(sc.oracle.cfl > 0.0 && sc.oracle.cfl <= 1.0)) config_error("oracle.cfl", "must lie in (0, 1]");
  if (sc.oracle.delta_width_cells < 4.0)
    config_error("oracle.delta_width_cells", "a delta needs at least 4 cells");
  if (sc.criteria)
    for (int c : *sc.criteria)
      if (c < 1 || c > acceptance_count())
        config_error("criteria", "no acceptance criterion " + std::to_string(c));
}

const std::map<std::string, const char*>& presets() {
  static const std::map<std::string, const char*> table = {
      {"example1", R"({
  "name": "example1",
  "medium": {"kind": "linear", "x_plus": 1, "z_minus": 0.5, "z_plus": 1, "c_minus": 2, "c_plus": 1},
  "data": {"kind": "step"},
  "times": ["3 t_plus"],
  "samples": {"count": 101},
  "series": {"orders": [0, 2]},
  "terms": {"max_order": 3, "from": 0, "to": "3 t_plus", "count": 31},
  "oracle": {"cells": 8000, "limiter": "superbee"},
  "output": {"dir": "results/example1"}
})"},
      {"example2", R"({
  "name": "example2",
  "medium": {"kind": "linear", "x_plus": 1, "z_minus": 0.125, "z_plus": 1, "c_minus": 2, "c_plus": 1},
  "data": {"kind": "step"},
  "times": ["3 t_plus"],
  "samples": {"count": 61},
  "series": {"orders": [2, 4]},
  "terms": {"max_order": 5, "from": 0, "to": "3 t_plus", "count": 16},
  "oracle": {"cells": 8000, "limiter": "superbee"},
  "output": {"dir": "results/example2"}
})"},
      {"example3", R"({
  "name": "example3",
  "medium": {"kind": "linear", "x_plus": 1, "z_minus": 1, "z_plus": 20, "c_minus": 2, "c_plus": 1},
  "data": {"kind": "step"},
  "times": ["3 t_plus"],
  "samples": {"count": 61},
  "series": {"orders": [2, 4]},
  "terms": {"max_order": 5, "from": 0, "to": "3 t_plus", "count": 16},
  "oracle": {"cells": 8000, "limiter": "superbee"},
  "output": {"dir": "results/example3"}
})"},
      {"example4", R"({
  "name": "example4",
  "medium": {"kind": "sine", "x_plus": 1, "z_minus": 0.25, "z_plus": 1, "c_minus": 2, "c_plus": 1,
             "amplitude": 0.1, "frequency": 10},
  "data": {"kind": "step"},
  "times": ["3 t_plus"],
  "samples": {"count": 101},
  "series": {"orders": [0, 2]},
  "terms": {"max_order": 3, "from": 0, "to": "3 t_plus", "count": 31},
  "oracle": {"cells": 8000, "limiter": "superbee"},
  "output": {"dir": "results/example4"}
})"},
      {"greenslaw", R"({
  "name": "greenslaw",
  "medium": {"kind": "linear", "x_plus": 1, "z_minus": 1, "z_plus": 3, "c_minus": 1, "c_plus": 1},
  "data": {"kind": "step"},
  "times": ["3 t_plus"],
  "samples": {"count": 101},
  "series": {"orders": [0, 2]},
  "terms": {"max_order": 5, "from": 0, "to": "3 t_plus", "count": 16},
  "oracle": {"cells": 8000, "limiter": "superbee"},
  "output": {"dir": "results/greenslaw"}
})"},
      {"limit-sequence", R"({
  "name": "limit-sequence",
  "medium": {"kind": "linear", "x_plus": 1, "z_minus": 1, "z_plus": 3, "c_minus": 1, "c_plus": 1},
  "sweep": {"x_plus": [1, 0.5, 0.1, 0]},
  "data": {"kind": "step"},
  "times": [3],
  "samples": {"from": -3, "to": 3, "count": 121},
  "series": {"orders": [0, 2]},
  "terms": {"max_order": 3, "from": 0, "to": 3, "count": 16},
  "oracle": {"cells": 8000, "limiter": "superbee"},
  "output": {"dir": "results/limit-sequence"}
})"},
      {"piecewise", R"({
  "name": "piecewise",
  "medium": {"kind": "piecewise", "knots": [
    {"x": 0, "z": 1, "c": 1},
    {"x": 0.5, "z_left": 1.2, "z_right": 1.8, "c": 1},
    {"x": 1, "z": 2, "c": 1}]},
  "data": {"kind": "step"},
  "times": ["2 t_plus"],
  "samples": {"from": "-2 x_plus", "to": 0, "count": 101},
  "series": {"orders": [0]},
  "terms": {"max_order": 1, "from": 0, "to": "2 t_plus", "count": 41},
  "oracle": {"cells": 8000, "limiter": "superbee"},
  "output": {"dir": "results/piecewise"}
})"},
  };
  return table;
}

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_label(const std::string& key, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s=%g", key.c_str(), v);
  return buf;
}

[[noreturn]] void rethrow_with_context(const Error& e, const std::string& stage) {
  if (e.code() == ErrorCode::ConfigError || e.code() == ErrorCode::ComputeError) throw e;
  throw Error(ErrorCode::ComputeError,
              stage + ": " + std::string(to_string(e.code())) + ": " + e.what());
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
  return out;
}

// Linear interpolation between cell centres, constant past the ends.
double sample_field(const WaveField& f, double x) {
  const double dx = f.x[1] - f.x[0];
  const double pos = (x - f.x[0]) / dx;
  const int n = static_cast<int>(f.x.size());
  if (pos <= 0.0) return f.p.front();
  if (pos >= n - 1) return f.p.back();
  const int i = static_cast<int>(std::floor(pos));
  const double w = pos - i;
  return (1.0 - w) * f.p[i] + w * f.p[i + 1];
}

bool single_interior_jump(const MediumProfile& m) {
  return m.x_plus() > 0.0 && m.discontinuities().size() == 1;
}

CheckResult make_check(const std::string& name, CheckStatus status, const std::string& detail) {
  CheckResult r;
  r.name = name;
  r.status = status;
  r.detail = detail;
  return r;
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

void identity_checks(const MediumProfile& medium, std::vector<CheckResult>& out) {
  const double green = medium.green_coefficient();
  const InterfaceCoefficients exact = interface_coefficients(medium.z_left(), medium.z_right());
  const InterfaceCoefficients closed = closed_form_coefficients(green);
  const double gap = std::max(std::abs(exact.transmission - closed.transmission),
                              std::abs(exact.reflection - closed.reflection));
  out.push_back(make_check("coefficient identity", gap <= 1e-14 ? CheckStatus::Pass : CheckStatus::Fail,
                           "|closed form - interface| = " + fmt(gap)));

  try {
    andre_partial_sum(std::log(green), 0);  // throws outside the disk of convergence
    double sum_t = 0.0;
    double sum_r = 0.0;
    bool ok = true;
    double worst = 0.0;
    for (int n = 0; n <= 14; ++n) {
      const bool even = n % 2 == 0;
      const auto kind = even ? BoundaryTerm::Transmission : BoundaryTerm::Reflection;
      (even ? sum_t : sum_r) += asymptotic_term(kind, n, green);
      const double error = std::abs((even ? exact.transmission : exact.reflection) - (even ? sum_t : sum_r));
      const double omitted = std::abs(asymptotic_term(kind, n + 2, green));
      ok = ok && error <= omitted * (1.0 + 1e-12) + 1e-15;
      worst = std::max(worst, error);
    }
    out.push_back(make_check("asymptotic partial sums", ok ? CheckStatus::Pass : CheckStatus::Fail,
                             "through n = 14, error within the first omitted term; last error " +
                                 fmt(std::max(std::abs(exact.transmission - sum_t),
                                              std::abs(exact.reflection - sum_r)))));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::OutOfDisk) throw;
    out.push_back(make_check("asymptotic partial sums", CheckStatus::Skipped,
                             std::string(to_string(e.code())) + ": " + e.what()));
  }
}

// Series tails at the boundaries against both truncation bounds.
void bound_checks(const Scenario& sc, const MediumProfile& medium, const TravelTimeMap& map,
                  const InitialData& data, ScenarioResult& r) {
  const double green = medium.green_coefficient();
  const int m_max = sc.terms.max_order / 2;
  // Terms indexed by time, then order.
  std::map<double, std::map<int, double>> by_time;
  for (const TermRow& row : r.terms) by_time[row.t][row.order] = row.value;

  {  // strong alternating-series bound on the transmitted terms
    CheckResult c = make_check("strong bound", CheckStatus::Pass, "");
    try {
      if (data.kind != InitialData::Kind::Step)
        throw Error(ErrorCode::HypothesisViolated, "needs step data");
      if (m_max < 1) throw Error(ErrorCode::InvalidArgument, "needs terms through T_2");
      if (medium.x_plus() == 0.0 || !medium.is_continuous())
        throw Error(ErrorCode::HypothesisViolated, "needs a continuous variable region");
      int rows = 0;
      for (const auto& [t, terms] : by_time) {
        const double t0 = terms.at(0);
        if (t0 == 0.0) continue;
        for (int n = 0; n < m_max; ++n) {
          double tail = 0.0;
          for (int m = n + 1; m <= m_max; ++m) tail += terms.at(2 * m);
          const StrongTailBound b = tail_bound_strong(BoundaryTerm::Transmission, n, green,
                                                      std::abs(t0), medium.is_monotone());
          r.bounds.push_back({"strong", "T", medium.x_plus(), t, n, std::abs(tail), b.bound});
          if (std::abs(tail) > b.bound) c.status = CheckStatus::Fail;
          ++rows;
        }
      }
      c.detail = std::to_string(rows) + " transmitted tails against (C_G^2/2)^N |T_0|";
    } catch (const Error& e) {
      if (e.code() != ErrorCode::HypothesisViolated && e.code() != ErrorCode::InvalidArgument) throw;
      c.status = CheckStatus::Skipped;
      c.detail = std::string(to_string(e.code())) + ": " + e.what();
    }
    r.checks.push_back(c);
  }

  {  // uniform Taylor-remainder bound at both boundaries
    CheckResult c = make_check("uniform bound", CheckStatus::Pass, "");
    if (medium.x_plus() == 0.0 || !medium.is_continuous() || m_max < 1 ||
        !std::isfinite(data.max_value)) {
      c.status = CheckStatus::Skipped;
      c.detail = "needs a continuous variable region, bounded data and terms through T_2";
    } else {
      BoundInputs in;
      in.max_speed = medium.max_speed();
      in.max_reflectivity = medium.max_reflectivity();
      in.max_value = data.max_value;
      in.max_slope = data.max_slope;
      const int r_max = (sc.terms.max_order - 1) / 2;  // last R index m
      int rows = 0;
      for (const auto& [t, terms] : by_time) {
        for (int n = 0; n < m_max; ++n) {
          double tail = 0.0;
          for (int m = n + 1; m <= m_max; ++m) tail += terms.at(2 * m);
          const double b = tail_bound_uniform(in, n, medium.x_plus(), t, map, green).second;
          r.bounds.push_back({"uniform", "w2", medium.x_plus(), t, n, std::abs(tail), b});
          if (std::abs(tail) > b) c.status = CheckStatus::Fail;
          ++rows;
        }
        for (int n = 0; n < r_max; ++n) {
          double tail = 0.0;
          for (int m = n + 1; m <= r_max; ++m) tail += terms.at(2 * m + 1);
          const double b = tail_bound_uniform(in, n, 0.0, t, map, 1.0).first;
          r.bounds.push_back({"uniform", "w1", 0.0, t, n, std::abs(tail), b});
          if (std::abs(tail) > b) c.status = CheckStatus::Fail;
          ++rows;
        }
      }
      c.detail = std::to_string(rows) + " boundary tails against the Taylor-remainder bound";
    }
    r.checks.push_back(c);
  }
}

ScenarioResult compute_run(const Scenario& sc, const MediumSpec& spec, const std::string& label) {
  ScenarioResult r;
  r.label = label;
  r.medium = spec;
  r.orders = sc.orders;
  std::sort(r.orders.begin(), r.orders.end());
  r.has_oracle = sc.oracle.enabled;

  const MediumProfile medium = spec.build();
  const TravelTimeMap map(medium);
  const InitialData data = sc.data.build();
  const double t_plus = map.crossing_time();
  const double x_plus = medium.x_plus();
  r.t_plus = t_plus;
  QuadratureSpec q = sc.quadrature;
  q.max_order = std::max({q.max_order, sc.terms.max_order, r.orders.back() + 1});

  const bool jump = single_interior_jump(medium);
  if (!medium.is_continuous() && x_plus > 0.0 && !jump)
    throw Error(ErrorCode::UnsupportedTopology, "series need a continuous medium or a single jump");
  if (jump) {
    if (data.kind != InitialData::Kind::Step) config_error("data.kind", "a medium with a jump needs step data");
    if (r.orders != std::vector<int>{0}) config_error("series.orders", "a medium with a jump supports only [0]");
    if (sc.terms.max_order > 1) config_error("terms.max_order", "a medium with a jump supports at most 1");
  }

  // Profiles.
  std::vector<double> times;
  for (const Quantity& t : sc.times) times.push_back(t.resolve(t_plus, x_plus));
  for (double t : times) {
    std::vector<double> xs;
    if (!sc.samples.points.empty()) {
      for (const Quantity& p : sc.samples.points) xs.push_back(p.resolve(t_plus, x_plus));
    } else {
      const double lo = sc.samples.from ? sc.samples.from->resolve(t_plus, x_plus) : -medium.c_left() * t;
      const double hi = sc.samples.to ? sc.samples.to->resolve(t_plus, x_plus)
                                      : (jump ? 0.0 : x_plus + medium.c_right() * t);
      xs = linspace(lo, hi, sc.samples.count);
    }
    if (jump)
      for (double x : xs)
        if (x > 0.0) config_error("samples", "a medium with a jump is only sampled at x <= 0");

    FvResult fv;
    if (sc.oracle.enabled) {
      try {
        Grid1D grid = default_grid(medium, t, sc.oracle.cells);
        grid.cfl = sc.oracle.cfl;
        FvOptions options;
        options.limiter = sc.oracle.limiter;
        options.delta_width_cells = sc.oracle.delta_width_cells;
        fv = solve(medium, data, t, grid, options);
      } catch (const Error& e) {
        rethrow_with_context(e, "fv_oracle at t = " + format17(t));
      }
    }

    for (double x : xs) {
      ProfileRow row;
      row.t = t;
      row.x = x;
      const double incident =
          x < 0.0 && data.kind != InitialData::Kind::Delta ? data.value(x - medium.c_left() * t) : 0.0;
      try {
        if (jump) {
          const double t_echo = t + x / medium.c_left();
          row.series.push_back(incident + (t_echo >= 0.0 ? r1_piecewise(medium, map, t_echo, q) : 0.0));
        } else {
          const PartialSum ps = partial_sum(medium, map, data, r.orders.back(), x, t, q);
          for (int n : r.orders) {
            double v = incident;
            for (const SeriesTerm& term : ps.terms)
              if (term.order <= n + 1) v += term.value;
            row.series.push_back(v);
          }
        }
      } catch (const Error& e) {
        rethrow_with_context(e, "path_series at x = " + format17(x) + ", t = " + format17(t));
      }
      if (sc.oracle.enabled) row.oracle = sample_field(fv.field, x);
      r.profile.push_back(std::move(row));
    }
  }

  // Boundary terms.
  const double t_from = sc.terms.from.resolve(t_plus, x_plus);
  const double t_to = sc.terms.to.resolve(t_plus, x_plus);
  for (double t : linspace(t_from, t_to, sc.terms.count)) {
    // With a jump only the once-reflected term is available.
    for (int n = jump ? 1 : 0; n <= sc.terms.max_order; ++n) {
      TermRow row;
      row.kind = n % 2 == 0 ? TermKind::Transmission : TermKind::Reflection;
      row.order = n;
      row.t = t;
      try {
        if (jump) {
          row.value = r1_piecewise(medium, map, t, q);
        } else {
          const SeriesTerm term = n % 2 == 0 ? term_T(medium, map, data, n / 2, t, q)
                                             : term_R(medium, map, data, n / 2, t, q);
          row.value = term.value;
          row.error = term.error;
        }
      } catch (const Error& e) {
        rethrow_with_context(e, std::string("path_series term ") + to_string(row.kind) +
                                    std::to_string(n) + " at t = " + format17(t));
      }
      r.terms.push_back(row);
    }
  }

  identity_checks(medium, r.checks);
  bound_checks(sc, medium, map, data, r);
  if (sc.oracle.enabled) {
    double worst = 0.0;
    for (const ProfileRow& row : r.profile) worst = std::max(worst, std::abs(row.series.back() - row.oracle));
    CheckResult c = make_check("oracle agreement", CheckStatus::Skipped,
                               "max |series - oracle| = " + fmt(worst));
    if (sc.oracle.tolerance) {
      c.status = worst <= *sc.oracle.tolerance ? CheckStatus::Pass : CheckStatus::Fail;
      c.detail += " against tolerance " + fmt(*sc.oracle.tolerance);
    } else {
      c.detail += "; no tolerance configured";
    }
    r.checks.push_back(c);
  }
  return r;
}

json check_json(const CheckResult& c) {
  json j;
  if (c.criterion > 0) j["criterion"] = c.criterion;
  j["name"] = c.name;
  j["status"] = to_string(c.status);
  j["detail"] = c.detail;
  return j;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ComputeError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::ComputeError, "write failed for " + path.string());
}

}  // namespace

double Quantity::resolve(double t_plus, double x_plus) const {
  switch (unit) {
    case Unit::Absolute:
      return value;
    case Unit::TPlus:
      return value * t_plus;
    case Unit::XPlus:
      return value * x_plus;
  }
  return value;
}

Quantity parse_quantity(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string first;
  std::string second;
  std::string extra;
  in >> first >> second >> extra;
  if (first.empty() || !extra.empty()) config_error(key, "cannot parse '" + text + "'");
  auto unit_of = [&](const std::string& u) {
    if (u == "t_plus") return Quantity::Unit::TPlus;
    if (u == "x_plus") return Quantity::Unit::XPlus;
    config_error(key, "unknown unit '" + u + "' (t_plus or x_plus)");
  };
  Quantity q;
  if (second.empty() && (first == "t_plus" || first == "x_plus")) {
    q.value = 1.0;
    q.unit = unit_of(first);
    return q;
  }
  std::size_t used = 0;
  try {
    q.value = std::stod(first, &used);
  } catch (const std::exception&) {
    config_error(key, "cannot parse '" + text + "'");
  }
  if (used != first.size() || !std::isfinite(q.value)) config_error(key, "cannot parse '" + text + "'");
  if (!second.empty()) q.unit = unit_of(second);
  return q;
}

MediumProfile MediumSpec::build() const {
  if (kind == "linear")
    return x_plus == 0.0 ? MediumProfile::sharp_interface(z_minus, z_plus, c_minus, c_plus)
                         : MediumProfile::linear(x_plus, z_minus, z_plus, c_minus, c_plus);
  if (kind == "sine") return MediumProfile::sine_overlay(x_plus, z_minus, z_plus, c_minus, c_plus, overlay);
  if (kind == "sharp") return MediumProfile::sharp_interface(z_minus, z_plus, c_minus, c_plus);
  if (kind == "piecewise") return MediumProfile::piecewise(knots);
  if (kind == "tabulated") return MediumProfile::tabulated(table);
  if (kind == "shallow_water")
    return MediumProfile::from_shallow_water(DepthProfile::linear(h_minus, h_plus, x_plus, depth_samples),
                                             gravity);
  config_error("medium.kind", "unknown medium kind '" + kind + "'");
}

InitialData DataSpec::build() const {
  if (kind == "step") return InitialData::step();
  if (kind == "delta") return InitialData::delta();
  if (kind == "pulse") {
    const double w = width;
    const double pi = boost::math::constants::pi<double>();
    return InitialData::general(
        [w, pi](double x) {
          if (x < -w || x > 0.0) return 0.0;
          const double s = std::sin(pi * x / w);
          return s * s;
        },
        1.0, pi / w, -w);
  }
  config_error("data.kind", "unknown data kind '" + kind + "'");
}

Scenario parse_scenario(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    config_error("<root>", std::string("malformed JSON: ") + e.what());
  }
  Section s(root, "");
  Scenario sc;
  sc.name = s.string("name", sc.name);
  if (s.has("medium")) sc.medium = parse_medium(s.child("medium"));
  if (s.has("data")) sc.data = parse_data(s.child("data"));
  if (s.has("times")) sc.times = quantity_list(s.raw("times"), "times");
  if (s.has("samples")) {
    Section p = s.child("samples");
    sc.samples.from = p.quantity("from");
    sc.samples.to = p.quantity("to");
    sc.samples.count = p.integer("count", sc.samples.count);
    if (p.has("points")) sc.samples.points = quantity_list(p.raw("points"), p.key("points"));
    p.finish();
  }
  if (s.has("series")) {
    Section p = s.child("series");
    if (p.has("orders")) sc.orders = int_list(p.raw("orders"), p.key("orders"));
    QuadratureSpec& q = sc.quadrature;
    q.nodes = p.integer("nodes", q.nodes);
    q.rel_tol = p.number("rel_tol", q.rel_tol);
    q.abs_tol = p.number("abs_tol", q.abs_tol);
    q.refinements = p.integer("refinements", q.refinements);
    q.max_order = p.integer("max_order", q.max_order);
    q.analytic_inner = p.boolean("analytic_inner", q.analytic_inner);
    q.literal_delta = p.boolean("literal_delta", q.literal_delta);
    p.finish();
  }
  if (s.has("terms")) {
    Section p = s.child("terms");
    sc.terms.max_order = p.integer("max_order", sc.terms.max_order);
    if (auto q = p.quantity("from")) sc.terms.from = *q;
    if (auto q = p.quantity("to")) sc.terms.to = *q;
    sc.terms.count = p.integer("count", sc.terms.count);
    p.finish();
  }
  if (s.has("oracle")) {
    Section p = s.child("oracle");
    sc.oracle.enabled = p.boolean("enabled", sc.oracle.enabled);
    sc.oracle.cells = p.integer("cells", sc.oracle.cells);
    if (p.has("limiter")) sc.oracle.limiter = parse_limiter(p.string("limiter", ""), p.key("limiter"));
    sc.oracle.cfl = p.number("cfl", sc.oracle.cfl);
    sc.oracle.delta_width_cells = p.number("delta_width_cells", sc.oracle.delta_width_cells);
    if (p.has("tolerance")) sc.oracle.tolerance = p.number("tolerance", 0.0);
    p.finish();
  }
  if (s.has("sweep")) {
    const json& sweep = s.raw("sweep");
    if (!sweep.is_object() || sweep.size() != 1) config_error("sweep", "expected one medium field");
    sc.sweep_key = sweep.begin().key();
    if (std::find(kSweepKeys.begin(), kSweepKeys.end(), sc.sweep_key) == kSweepKeys.end())
      config_error("sweep." + sc.sweep_key, "not a sweepable medium field");
    sc.sweep_values = number_list(sweep.begin().value(), "sweep." + sc.sweep_key);
    if (sc.sweep_values.empty()) config_error("sweep." + sc.sweep_key, "needs at least one value");
  }
  if (s.has("criteria")) sc.criteria = int_list(s.raw("criteria"), "criteria");
  if (s.has("output")) {
    Section p = s.child("output");
    sc.out_dir = p.string("dir", sc.out_dir);
    p.finish();
  }
  s.finish();
  validate(sc);
  return sc;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, text] : presets()) names.push_back(name);
  return names;
}

std::string preset_json(const std::string& name) {
  const auto it = presets().find(name);
  if (it == presets().end()) config_error("preset", "unknown preset '" + name + "'");
  return it->second;
}

Scenario load_scenario(const std::string& name_or_path) {
  if (presets().count(name_or_path)) return parse_scenario(preset_json(name_or_path));
  std::ifstream in(name_or_path, std::ios::binary);
  if (!in) config_error("config", "'" + name_or_path + "' is neither a preset nor a readable file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

void apply_overrides(Scenario& sc, const Overrides& o) {
  if (o.order) {
    sc.orders = {*o.order};
    sc.terms.max_order = *o.order + 1;
  }
  if (o.nodes) sc.quadrature.nodes = *o.nodes;
  if (o.tol) sc.quadrature.rel_tol = *o.tol;
  if (o.out_dir) sc.out_dir = *o.out_dir;
  if (o.oracle_cells) sc.oracle.cells = *o.oracle_cells;
  validate(sc);
}

std::vector<ScenarioResult> compute_scenario(const Scenario& sc) {
  std::vector<ScenarioResult> out;
  try {
    if (sc.sweep_key.empty()) {
      out.push_back(compute_run(sc, sc.medium, sc.name));
    } else {
      for (double v : sc.sweep_values) {
        MediumSpec m = sc.medium;
        set_medium_field(m, sc.sweep_key, v);
        out.push_back(compute_run(sc, m, format_label(sc.sweep_key, v)));
      }
    }
  } catch (const Error& e) {
    rethrow_with_context(e, "scenario " + sc.name);
  }
  return out;
}

std::vector<std::string> write_results(const Scenario& sc, const std::vector<ScenarioResult>& results,
                                       const std::vector<CheckResult>& acceptance) {
  namespace fs = std::filesystem;
  std::vector<std::string> written;
  const fs::path root(sc.out_dir);
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw Error(ErrorCode::ComputeError, "cannot create " + root.string() + ": " + ec.message());

  json summary;
  summary["scenario"] = sc.name;
  summary["version"] = kVersion;
  json runs = json::array();
  for (const ScenarioResult& r : results) {
    const fs::path dir = sc.sweep_key.empty() ? root : root / r.label;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::ComputeError, "cannot create " + dir.string() + ": " + ec.message());

    std::string csv = "t,x";
    for (int n : r.orders) csv += ",p_series_" + std::to_string(n);
    if (r.has_oracle) csv += ",p_oracle,abs_diff";
    csv += "\n";
    for (const ProfileRow& row : r.profile) {
      csv += format17(row.t) + "," + format17(row.x);
      for (double v : row.series) csv += "," + format17(v);
      if (r.has_oracle)
        csv += "," + format17(row.oracle) + "," + format17(std::abs(row.series.back() - row.oracle));
      csv += "\n";
    }
    write_file(dir / "profile.csv", csv);
    written.push_back((dir / "profile.csv").string());

    csv = "kind,n,t,value,quadrature_error\n";
    for (const TermRow& row : r.terms)
      csv += std::string(to_string(row.kind)) + "," + std::to_string(row.order) + "," + format17(row.t) +
             "," + format17(row.value) + "," + format17(row.error) + "\n";
    write_file(dir / "terms.csv", csv);
    written.push_back((dir / "terms.csv").string());

    const MediumProfile medium = r.medium.build();
    const InterfaceCoefficients sharp = interface_coefficients(medium.z_left(), medium.z_right());
    json run;
    run["label"] = r.label;
    run["medium"] = {{"kind", r.medium.kind},
                     {"x_plus", medium.x_plus()},
                     {"z_minus", medium.z_left()},
                     {"z_plus", medium.z_right()},
                     {"c_minus", medium.c_left()},
                     {"c_plus", medium.c_right()},
                     {"t_plus", r.t_plus},
                     {"monotone", medium.is_monotone()},
                     {"continuous", medium.is_continuous()}};
    run["identities"] = {{"C_G", medium.green_coefficient()},
                         {"C_T", sharp.transmission},
                         {"C_R", sharp.reflection},
                         {"C_T_closed_form", closed_form_coefficients(medium.green_coefficient()).transmission},
                         {"C_R_closed_form", closed_form_coefficients(medium.green_coefficient()).reflection}};
    json bounds = json::array();
    for (const BoundRow& b : r.bounds)
      bounds.push_back({{"bound", b.bound},
                        {"field", b.field},
                        {"x", b.x},
                        {"t", b.t},
                        {"N", b.order},
                        {"measured", b.measured},
                        {"limit", b.limit},
                        {"holds", b.measured <= b.limit}});
    run["bounds"] = bounds;
    json checks = json::array();
    for (const CheckResult& c : r.checks) checks.push_back(check_json(c));
    run["checks"] = checks;
    if (r.has_oracle) {
      double worst = 0.0;
      for (const ProfileRow& row : r.profile) worst = std::max(worst, std::abs(row.series.back() - row.oracle));
      run["oracle"] = {{"cells", sc.oracle.cells},
                       {"limiter", limiter_name(sc.oracle.limiter)},
                       {"cfl", sc.oracle.cfl},
                       {"max_abs_diff", worst}};
    }
    run["files"] = {(dir / "profile.csv").string(), (dir / "terms.csv").string()};
    runs.push_back(run);
  }
  summary["runs"] = runs;
  json accepted = json::array();
  for (const CheckResult& c : acceptance) accepted.push_back(check_json(c));
  summary["acceptance"] = accepted;
  summary["metadata"] = {{"nodes", sc.quadrature.nodes},
                         {"rel_tol", sc.quadrature.rel_tol},
                         {"abs_tol", sc.quadrature.abs_tol},
                         {"refinements", sc.quadrature.refinements},
                         {"analytic_inner", sc.quadrature.analytic_inner},
                         {"seed", AcceptanceOptions{}.seed}};
  write_file(root / "summary.json", summary.dump(2) + "\n");
  written.push_back((root / "summary.json").string());
  return written;
}

bool VerifyReport::ok() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const CheckResult& c) { return c.status == CheckStatus::Fail; });
}

VerifyReport verify_scenario(const Scenario& sc) {
  VerifyReport report;
  try {
    for (ScenarioResult& r : compute_scenario(sc))
      for (CheckResult& c : r.checks) {
        c.name = r.label + ": " + c.name;
        report.checks.push_back(std::move(c));
      }
  } catch (const Error& e) {
    report.checks.push_back(make_check(sc.name + ": series computation", CheckStatus::Fail,
                                       std::string(to_string(e.code())) + ": " + e.what()));
  }
  AcceptanceOptions options;
  options.oracle_cells = sc.oracle.cells;
  options.workers = sc.quadrature.workers;
  std::vector<int> ids;
  if (sc.criteria) {
    ids = *sc.criteria;
  } else {
    for (int k = 1; k <= acceptance_count(); ++k) ids.push_back(k);
  }
  if (!ids.empty())
    for (CheckResult& c : run_acceptance(ids, options)) report.checks.push_back(std::move(c));
  return report;
}

}  // namespace pathsum
