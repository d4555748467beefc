#include "pathsum/checks.hpp"

#include "pathsum/asymptotics.hpp"
#include "pathsum/characteristics.hpp"
#include "pathsum/error.hpp"
#include "pathsum/fv_oracle.hpp"
#include "pathsum/path_series.hpp"
#include "pathsum/quadrature.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

namespace pathsum {

namespace {

// Collects the verdict and a short human-readable trail.
class Verdict {
public:
  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass_ = false;
      if (failures_++ < 3) note("FAILED " + what);
    }
  }
  void note(const std::string& s) {
    if (!detail_.empty()) detail_ += "; ";
    detail_ += s;
  }
  bool pass() const { return pass_; }
  const std::string& detail() const { return detail_; }

private:
  bool pass_ = true;
  int failures_ = 0;
  std::string detail_;
};

std::string fmt(double v, int digits = 3) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

QuadratureSpec base_spec(const AcceptanceOptions& o) {
  QuadratureSpec spec;
  spec.workers = o.workers;
  return spec;
}

// The three linear reference media: x_plus = 1, c from 2 to 1.
MediumProfile example_medium(double z_minus, double z_plus) {
  return MediumProfile::linear(1.0, z_minus, z_plus, 2.0, 1.0);
}

FvResult superbee(const MediumProfile& medium, double t_final, int cells,
                  std::vector<double> probes = {}) {
  FvOptions options;
  options.limiter = Limiter::Superbee;
  options.probes = std::move(probes);
  return solve(medium, InitialData::step(), t_final, default_grid(medium, t_final, cells), options);
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

void zigzag_exactness(Verdict& v, const AcceptanceOptions&) {
  const ZigzagTable table = zigzag(12);
  const Rational expected[] = {Rational(1),         Rational(1, 2),        Rational(5, 24),
                               Rational(61, 720),   Rational(277, 8064),   Rational(50521, 3628800),
                               Rational(540553, 95800320)};
  for (int k = 0; k < 7; ++k)
    v.expect(table.coefficients[2 * k] == expected[k], "a_" + std::to_string(2 * k));
  for (int n = 0; n <= 10; ++n)
    v.expect(table.counts[n] == BigInt(alternating_count_bruteforce(n)),
             "A_" + std::to_string(n) + " against enumeration");
  v.note("a_0..a_12 exact, A_n enumerated for n <= 10");
}

void coefficient_identities(Verdict& v, const AcceptanceOptions&) {
  double worst_identity = 0.0;
  for (double ratio : {0.25, 0.5, 1.5, 3.0, 8.0}) {
    const double green = std::sqrt(ratio);
    const InterfaceCoefficients closed = closed_form_coefficients(green);
    const InterfaceCoefficients exact = interface_coefficients(1.0, ratio);
    const double d = std::max(std::abs(closed.transmission - exact.transmission),
                              std::abs(closed.reflection - exact.reflection));
    worst_identity = std::max(worst_identity, d);
    v.expect(d <= 1e-14, "closed form at ratio " + fmt(ratio));

    double sum_t = 0.0;
    double sum_r = 0.0;
    for (int n = 0; n <= 14; ++n) {
      const bool even = n % 2 == 0;
      const auto kind = even ? BoundaryTerm::Transmission : BoundaryTerm::Reflection;
      (even ? sum_t : sum_r) += asymptotic_term(kind, n, green);
      const double limit = even ? exact.transmission : exact.reflection;
      const double error = std::abs(limit - (even ? sum_t : sum_r));
      const double omitted = std::abs(asymptotic_term(kind, n + 2, green));
      v.expect(error <= omitted * (1.0 + 1e-12) + 1e-15,
               "alternating bound at ratio " + fmt(ratio) + ", n = " + std::to_string(n));
    }
  }
  v.note("max identity gap " + fmt(worst_identity));
}

void simplex_volumes(Verdict& v, const AcceptanceOptions& o) {
  const ZigzagTable table = zigzag(8);
  double worst = 0.0;
  for (int n = 1; n <= 6; ++n) {
    NestedProblem p;
    p.levels = n;
    p.floor = 0.0;
    p.ceiling = 1.0;
    p.side = n % 2 == 1 ? NestedProblem::Arrival::Left : NestedProblem::Arrival::Right;
    p.arrival = n % 2 == 1 ? 0.0 : 1.0;  // inactive
    const double got = integrate_nested(p, 8, 1).value;
    const double want = static_cast<double>(table.coefficients[n]);
    worst = std::max(worst, std::abs(got - want));
    v.expect(std::abs(got - want) <= 1e-10, "nested volume n = " + std::to_string(n));
  }
  v.note("nested volume gap " + fmt(worst));

  // Monte Carlo volume of alternating paths with travel time <= t.
  const MediumProfile medium = example_medium(0.5, 1.0);
  const TravelTimeMap map(medium);
  const double c = medium.max_speed();
  const double x_plus = medium.x_plus();
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> uniform(0.0, x_plus);
  const int samples = 200000;
  double worst_ratio = 0.0;
  std::vector<double> x(8);
  for (int n = 1; n <= 8; ++n) {
    for (double f : {0.25, 0.5, 1.0, 2.0}) {
      const double t = f * map.crossing_time();
      int hits = 0;
      for (int k = 0; k < samples; ++k) {
        for (int j = 0; j < n; ++j) x[j] = uniform(rng);
        bool alternating = x[0] >= 0.0;
        for (int j = 1; j < n && alternating; ++j)
          alternating = j % 2 == 0 ? x[j] >= x[j - 1] : x[j] <= x[j - 1];
        if (!alternating) continue;
        double t_hat = 0.0;
        for (int j = 0; j < n; ++j) t_hat += (j % 2 == 0 ? 2.0 : -2.0) * map.travel_time(x[j]);
        if (t_hat <= t) ++hits;
      }
      const double box = std::pow(x_plus, n);
      const double fraction = static_cast<double>(hits) / samples;
      const double estimate = box * fraction;
      const double sigma = box * std::sqrt(fraction * (1.0 - fraction) / samples);
      const double bound = volume_bound(n, t, c);
      worst_ratio = std::max(worst_ratio, estimate / bound);
      v.expect(estimate - 3.0 * sigma <= bound,
               "volume bound n = " + std::to_string(n) + ", t = " + fmt(f) + " t_plus");
    }
  }
  v.note("largest Monte Carlo volume / bound " + fmt(worst_ratio));
}

void closed_form_terms(Verdict& v, const AcceptanceOptions& o) {
  QuadratureSpec spec = base_spec(o);
  spec.analytic_inner = false;
  const InitialData step = InitialData::step();
  double worst = 0.0;
  for (auto [zm, zp] : {std::pair{0.5, 1.0}, std::pair{0.125, 1.0}, std::pair{1.0, 20.0}}) {
    const MediumProfile medium = example_medium(zm, zp);
    const TravelTimeMap map(medium);
    const double t_plus = map.crossing_time();
    for (int k = 0; k <= 30; ++k) {
      const double t = 3.0 * t_plus * k / 30.0;
      const double got = term_R(medium, map, step, 0, t, spec).value;
      const double want = 0.5 * std::log(medium.impedance(map.position(0.5 * t)) / zm);
      worst = std::max(worst, std::abs(got - want));
      v.expect(std::abs(got - want) <= 1e-9, "R_1 at Z_- = " + fmt(zm) + ", t = " + fmt(t));
    }

    // Jump of T_0 on the integrated (not closed-form) travel-time map.
    const TravelTimeMap ode(medium, TravelTimeMap::Method::Ode);
    const double tol = 1e-10;
    v.expect(std::abs(ode.crossing_time() - t_plus) <= tol, "integrated t_plus");
    const double before = term_T(medium, ode, step, 0, t_plus - tol, spec).value;
    const double after = term_T(medium, ode, step, 0, t_plus + tol, spec).value;
    v.expect(before == 0.0 && after == medium.green_coefficient(), "T_0 jump at t_plus");
  }
  v.note("max R_1 gap " + fmt(worst));
}

void example_reproduction(Verdict& v, const AcceptanceOptions& o) {
  const QuadratureSpec spec = base_spec(o);
  const InitialData step = InitialData::step();

  {  // Example 1: full profile at 3 t_plus, N = 2.
    const MediumProfile medium = example_medium(0.5, 1.0);
    const TravelTimeMap map(medium);
    const double t = 3.0 * map.crossing_time();
    const FvResult fv = superbee(medium, t, o.oracle_cells);
    const double dx = fv.field.x[1] - fv.field.x[0];
    const double front = medium.x_plus() + medium.c_right() * (t - map.crossing_time());
    const double scale = max_abs(fv.field.p);
    double worst = 0.0;
    for (std::size_t i = 0; i < fv.field.x.size(); ++i) {
      const double x = fv.field.x[i];
      if (std::abs(x - front) <= 3.0 * dx) continue;
      const double s = partial_sum(medium, map, step, 2, x, t, spec).value;
      worst = std::max(worst, std::abs(s - fv.field.p[i]));
    }
    v.expect(worst <= 0.01 * scale, "example 1 within 1%");
    v.note("example 1 max gap " + fmt(100.0 * worst / scale) + "% of max|p|");
  }

  {  // Example 2: N = 4 improves on N = 2 in L2 over a sparse sample.
    const MediumProfile medium = example_medium(0.125, 1.0);
    const TravelTimeMap map(medium);
    const double t = 3.0 * map.crossing_time();
    const FvResult fv = superbee(medium, t, o.oracle_cells);
    const double dx = fv.field.x[1] - fv.field.x[0];
    const double front = medium.x_plus() + medium.c_right() * (t - map.crossing_time());
    const std::size_t stride = std::max<std::size_t>(1, fv.field.x.size() / 60);
    double l2_two = 0.0;
    double l2_four = 0.0;
    for (std::size_t i = stride / 2; i < fv.field.x.size(); i += stride) {
      const double x = fv.field.x[i];
      if (std::abs(x - front) <= 3.0 * dx) continue;
      const PartialSum s = partial_sum(medium, map, step, 4, x, t, spec);
      // The N = 2 sum is a prefix of the N = 4 terms.
      double two = x < 0.0 ? step.value(x - medium.c_left() * t) : 0.0;
      for (const SeriesTerm& term : s.terms)
        if (term.order <= 3) two += term.value;
      l2_two += (two - fv.field.p[i]) * (two - fv.field.p[i]);
      l2_four += (s.value - fv.field.p[i]) * (s.value - fv.field.p[i]);
    }
    l2_two = std::sqrt(l2_two * stride * dx);
    l2_four = std::sqrt(l2_four * stride * dx);
    v.expect(l2_four < l2_two, "example 2 N = 4 improves on N = 2");
    v.note("example 2 L2 gap N=2 " + fmt(l2_two) + ", N=4 " + fmt(l2_four));
  }

  {  // Example 3: boundary time series, N = 4.
    const MediumProfile medium = example_medium(1.0, 20.0);
    const TravelTimeMap map(medium);
    const double t_plus = map.crossing_time();
    const double x_plus = medium.x_plus();
    const FvResult fv = superbee(medium, 3.0 * t_plus, o.oracle_cells, {0.0, x_plus});
    const double dx = fv.field.x[1] - fv.field.x[0];
    double scale = 0.0;
    for (const auto& probe : fv.probes) scale = std::max(scale, max_abs(probe.p));
    const double front_window = 3.0 * dx / medium.c_right();
    double horizon = 0.0;  // last sampled time before the first miss
    bool missed = false;
    double gap_at_horizon = 0.0;
    double gap_final = 0.0;
    bool stays_degraded = true;
    for (int k = 1; k <= 60; ++k) {
      const std::size_t j = static_cast<std::size_t>(std::lround(k * 0.05 * t_plus / fv.dt));
      const double t = fv.probes[0].t[j];
      if (std::abs(t - t_plus) <= front_window) continue;
      double gap = 0.0;
      for (const auto& probe : fv.probes)
        gap = std::max(gap, std::abs(partial_sum(medium, map, step, 4, probe.x, t, spec).value -
                                     probe.p[j]));
      gap /= scale;
      if (!missed && gap <= 0.02) {
        horizon = t;
        gap_at_horizon = gap;
      } else if (!missed) {
        missed = true;
      } else {
        stays_degraded = stays_degraded && gap > 0.02;
      }
      gap_final = gap;
    }
    v.expect(horizon >= t_plus && horizon <= 2.0 * t_plus, "example 3 agreement horizon near 1.5 t_plus");
    v.expect(missed && stays_degraded && gap_final > gap_at_horizon, "example 3 degrades later");
    v.note("example 3 within 2% up to " + fmt(horizon / t_plus) + " t_plus, gap at 3 t_plus " +
           fmt(100.0 * gap_final) + "%");
  }
}

// Linear impedance 1 -> 3 over [0, x_plus] at unit speed.
MediumProfile shoaling_medium(double x_plus) {
  if (x_plus == 0.0) return MediumProfile::sharp_interface(1.0, 3.0, 1.0, 1.0);
  return MediumProfile::linear(x_plus, 1.0, 3.0, 1.0, 1.0);
}

void greens_law(Verdict& v, const AcceptanceOptions& o) {
  const MediumProfile medium = shoaling_medium(1.0);
  const TravelTimeMap map(medium);
  const double green = medium.green_coefficient();
  const double t_plus = map.crossing_time();
  const InitialData step = InitialData::step();
  const QuadratureSpec spec = base_spec(o);
  const double front = partial_sum(medium, map, step, 4, medium.x_plus(), t_plus, spec).value;
  v.expect(std::abs(front - green) <= 1e-14 * green, "series leading edge equals C_G");

  // Peak of the transmitted wave; the series decreases behind the front.
  const double t = 2.0 * t_plus;
  std::vector<double> gaps;
  for (int cells = o.oracle_cells / 8; cells <= o.oracle_cells; cells *= 2) {
    const FvResult fv = superbee(medium, t, cells);
    double peak = 0.0;
    for (std::size_t i = 0; i < fv.field.x.size(); ++i)
      if (fv.field.x[i] > medium.x_plus()) peak = std::max(peak, fv.field.p[i]);
    gaps.push_back(std::abs(peak - green) / green);
  }
  for (std::size_t k = 1; k < gaps.size(); ++k)
    v.expect(gaps[k] <= gaps[k - 1], "front gap shrinks under refinement");
  v.expect(gaps.back() <= 0.02, "front within 2% of C_G");
  std::string trail;
  for (double g : gaps) trail += (trail.empty() ? "" : ", ") + fmt(100.0 * g) + "%";
  v.note("series front exact; oracle front gaps " + trail);
}

void sharp_limit(Verdict& v, const AcceptanceOptions& o) {
  const double t = 3.0;
  const InterfaceCoefficients sharp = interface_coefficients(1.0, 3.0);
  std::vector<double> widths;
  double middle = 0.0;
  for (double x_plus : {1.0, 0.5, 0.1, 0.0}) {
    const MediumProfile medium = shoaling_medium(x_plus);
    const FvResult fv = superbee(medium, t, o.oracle_cells);
    const double dx = fv.field.x[1] - fv.field.x[0];
    // Width of the region where the excess over C_T is above half its peak.
    double peak = 0.0;
    for (std::size_t i = 0; i < fv.field.x.size(); ++i)
      if (fv.field.x[i] > x_plus) peak = std::max(peak, fv.field.p[i] - sharp.transmission);
    double width = 0.0;
    if (peak > 0.01 * sharp.transmission)
      for (std::size_t i = 0; i < fv.field.x.size(); ++i)
        if (fv.field.x[i] > x_plus && fv.field.p[i] - sharp.transmission > 0.5 * peak) width += dx;
    widths.push_back(width);
    if (x_plus == 0.0) {
      const double x_mid = 0.5 * medium.c_right() * t;
      const std::size_t i = static_cast<std::size_t>((x_mid - fv.field.x[0]) / dx);
      middle = fv.field.p[i];
    }
  }
  for (std::size_t k = 1; k < widths.size(); ++k)
    v.expect(widths[k] < widths[k - 1], "transmitted peak narrows");
  const double gap = std::abs(middle - sharp.transmission) / sharp.transmission;
  v.expect(gap <= 0.01, "x_plus = 0 middle state within 1% of C_T");
  std::string trail;
  for (double w : widths) trail += (trail.empty() ? "" : ", ") + fmt(w);
  v.note("peak widths " + trail + "; middle state gap " + fmt(100.0 * gap) + "%");
}

void strong_decay(Verdict& v, const AcceptanceOptions& o) {
  const MediumProfile medium = example_medium(1.0, 1.5);
  const TravelTimeMap map(medium);
  const double t_plus = map.crossing_time();
  const double green = medium.green_coefficient();
  const InitialData step = InitialData::step();
  QuadratureSpec spec = base_spec(o);
  spec.nodes = 12;
  double worst_ratio = 0.0;
  double worst_tail = 0.0;  // measured tail / bound
  for (int k = 1; k <= 10; ++k) {
    const double t = t_plus * (1.0 + 0.25 * k);
    double terms[4];
    for (int m = 0; m <= 3; ++m) terms[m] = term_T(medium, map, step, m, t, spec).value;
    const StrongTailBound b0 = tail_bound_strong(BoundaryTerm::Transmission, 0, green,
                                                 std::abs(terms[0]), medium.is_monotone());
    v.expect(b0.contracting, "ratio 1.5 is contracting");
    for (int m = 0; m <= 2; ++m) {
      const double ratio = std::abs(terms[m + 1]) / std::abs(terms[m]);
      worst_ratio = std::max(worst_ratio, ratio);
      v.expect(ratio <= b0.ratio, "|T_" + std::to_string(2 * m + 2) + "/T_" +
                                      std::to_string(2 * m) + "| at t = " + fmt(t));
    }
    for (int n = 0; n <= 2; ++n) {
      double tail = 0.0;
      for (int m = n + 1; m <= 3; ++m) tail += terms[m];
      const double bound = tail_bound_strong(BoundaryTerm::Transmission, n, green,
                                             std::abs(terms[0]), medium.is_monotone())
                               .bound;
      worst_tail = std::max(worst_tail, std::abs(tail) / bound);
      v.expect(std::abs(tail) <= bound, "tail beyond N = " + std::to_string(n));
    }
  }
  v.note("largest term ratio " + fmt(worst_ratio) + " against C_G^2/2 = " +
         fmt(0.5 * green * green) + "; largest tail / bound " + fmt(worst_tail));
}

void uniform_bound(Verdict& v, const AcceptanceOptions& o) {
  const MediumProfile medium = example_medium(0.5, 1.0);
  const TravelTimeMap map(medium);
  const double t = 3.0 * map.crossing_time();
  const InitialData step = InitialData::step();
  QuadratureSpec spec = base_spec(o);
  spec.nodes = 12;
  BoundInputs in;
  in.max_speed = medium.max_speed();
  in.max_reflectivity = medium.max_reflectivity();
  in.max_value = step.max_value;
  double loosest = 0.0;
  for (double x : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    // Terms past n = 5 are far below the bound and costly at 7 levels.
    double w1[3];
    double w2[3];
    for (int m = 0; m <= 2; ++m) {
      w1[m] = field_w1(medium, map, step, m, x, t, spec).value;
      w2[m] = field_w2(medium, map, step, m, x, t, spec).value;
    }
    for (int n = 0; n <= 1; ++n) {
      double tail1 = 0.0;
      double tail2 = 0.0;
      for (int m = n + 1; m <= 2; ++m) {
        tail1 += w1[m];
        tail2 += w2[m];
      }
      const auto [b1, b2] = tail_bound_uniform(in, n, x, t, map, medium.green_coefficient(x));
      v.expect(std::abs(tail1) <= b1, "w1 tail at x = " + fmt(x) + ", N = " + std::to_string(n));
      v.expect(std::abs(tail2) <= b2, "w2 tail at x = " + fmt(x) + ", N = " + std::to_string(n));
      if (tail1 != 0.0) loosest = std::max(loosest, b1 / std::abs(tail1));
      if (tail2 != 0.0) loosest = std::max(loosest, b2 / std::abs(tail2));
    }
  }
  v.note("bound exceeds the measured tail by up to " + fmt(loosest) + "x");
}

void piecewise_reflection(Verdict& v, const AcceptanceOptions& o) {
  const MediumProfile medium = MediumProfile::piecewise({{0.0, 1.0, 1.0, 1.0, 1.0},
                                                         {0.5, 1.2, 1.8, 1.0, 1.0},
                                                         {1.0, 2.0, 2.0, 1.0, 1.0}});
  const TravelTimeMap map(medium);
  const double t_plus = map.crossing_time();
  const QuadratureSpec spec = base_spec(o);
  const FvResult fv = superbee(medium, 2.0 * t_plus, o.oracle_cells, {0.0});
  const ProbeSeries& probe = fv.probes[0];
  const double dx = fv.field.x[1] - fv.field.x[0];
  const double echo = 2.0 * map.travel_time(0.5);
  const double window = 3.0 * dx / medium.c_left();
  const double plateau = r1_piecewise(medium, map, std::numeric_limits<double>::infinity(), spec);
  double worst = 0.0;
  for (std::size_t j = 0; j < probe.t.size(); j += 8) {
    const double t = probe.t[j];
    if (std::abs(t - echo) <= window) continue;
    worst = std::max(worst, std::abs(r1_piecewise(medium, map, t, spec) - probe.w1[j]));
  }
  v.expect(worst <= 0.03 * std::abs(plateau), "within 3% of the plateau");
  v.note("max gap " + fmt(100.0 * worst / std::abs(plateau)) + "% of plateau " + fmt(plateau));
}

struct Criterion {
  const char* name;
  double time_limit;
  void (*body)(Verdict&, const AcceptanceOptions&);
};

const Criterion kCriteria[] = {
    {"zigzag exactness", 1.0, zigzag_exactness},
    {"coefficient identities", 1.0, coefficient_identities},
    {"simplex volume", 60.0, simplex_volumes},
    {"closed-form terms", 10.0, closed_form_terms},
    {"example reproduction", 600.0, example_reproduction},
    {"Green's-law front", 300.0, greens_law},
    {"sharp-interface limit", 600.0, sharp_limit},
    {"strong-theorem decay", 300.0, strong_decay},
    {"uniform bound", 60.0, uniform_bound},
    {"piecewise R_1", 300.0, piecewise_reflection},
};

}  // namespace

const char* to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::Pass:
      return "pass";
    case CheckStatus::Fail:
      return "FAIL";
    case CheckStatus::Skipped:
      return "skipped";
  }
  return "?";
}

int acceptance_count() { return static_cast<int>(std::size(kCriteria)); }

CheckResult run_criterion(int criterion, const AcceptanceOptions& options) {
  if (criterion < 1 || criterion > acceptance_count())
    throw Error(ErrorCode::InvalidArgument, "no acceptance criterion " + std::to_string(criterion));
  const Criterion& c = kCriteria[criterion - 1];
  CheckResult r;
  r.criterion = criterion;
  r.name = c.name;
  r.time_limit = c.time_limit;
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  try {
    c.body(v, options);
  } catch (const Error& e) {
    v.expect(false, std::string(to_string(e.code())) + ": " + e.what());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  v.expect(r.seconds <= r.time_limit, "runtime " + fmt(r.seconds) + " s over " + fmt(r.time_limit) + " s");
  r.status = v.pass() ? CheckStatus::Pass : CheckStatus::Fail;
  r.detail = v.detail();
  return r;
}

std::vector<CheckResult> run_acceptance(const std::vector<int>& criteria,
                                        const AcceptanceOptions& options) {
  std::vector<int> ids = criteria;
  if (ids.empty())
    for (int k = 1; k <= acceptance_count(); ++k) ids.push_back(k);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::vector<CheckResult> out;
  for (int id : ids) out.push_back(run_criterion(id, options));
  return out;
}

}  // namespace pathsum
