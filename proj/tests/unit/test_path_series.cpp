#include "pathsum/asymptotics.hpp"
#include "pathsum/error.hpp"
#include "pathsum/fv_oracle.hpp"
#include "pathsum/path_series.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>

using namespace pathsum;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::ComputeError;
}

MediumProfile example(double zm, double zp) { return MediumProfile::linear(1.0, zm, zp, 2.0, 1.0); }

QuadratureSpec tight() {
  QuadratureSpec s;
  s.nodes = 16;
  s.rel_tol = 1e-10;
  s.abs_tol = 1e-12;
  s.refinements = 2;
  s.workers = 1;
  return s;
}

}  // namespace

TEST_CASE("once-reflected step response is half the log impedance ratio") {
  const MediumProfile m = MediumProfile::sine_overlay(1.0, 0.5, 1.0, 2.0, 1.0, {0.05, 3.0});
  const TravelTimeMap map(m);
  const InitialData step = InitialData::step();
  QuadratureSpec spec = tight();
  spec.analytic_inner = false;
  for (double f : {0.0, 0.3, 1.0, 1.7, 2.0, 2.6}) {
    const double t = f * map.crossing_time();
    const double want = 0.5 * std::log(m.impedance(map.position(0.5 * t)) / 0.5);
    CHECK(std::abs(term_R(m, map, step, 0, t, spec).value - want) < 1e-9);
  }
}

TEST_CASE("direct transmission is a Green's-law step") {
  const MediumProfile m = example(0.5, 1.0);
  const TravelTimeMap map(m);
  const double t_plus = map.crossing_time();
  const InitialData step = InitialData::step();
  CHECK(term_T(m, map, step, 0, 0.999 * t_plus, tight()).value == 0.0);
  CHECK(term_T(m, map, step, 0, t_plus, tight()).value == doctest::Approx(std::sqrt(2.0)));
  CHECK(field_w2(m, map, step, 0, 0.5, 2.0 * t_plus, tight()).value == doctest::Approx(std::sqrt(1.5)));
}

TEST_CASE("boundary terms settle on their long-time limits") {
  // Every path of order n has travel time at most n t_plus, so the
  // terms reach the asymptotic value in finite time.
  const MediumProfile m = example(0.5, 1.0);
  const TravelTimeMap map(m);
  const double t_plus = map.crossing_time();
  const double green = std::sqrt(2.0);
  const double y = std::log(green);
  const InitialData step = InitialData::step();
  const double t2 = term_T(m, map, step, 1, 4.0 * t_plus, tight()).value;
  CHECK(t2 == doctest::Approx(-0.5 * y * y * green).epsilon(1e-9));
  const double r3 = term_R(m, map, step, 1, 4.0 * t_plus, tight()).value;
  CHECK(r3 == doctest::Approx(-y * y * y / 3.0).epsilon(1e-9));
  const double limit = std::numeric_limits<double>::infinity();
  CHECK(term_T(m, map, step, 1, limit, tight()).value == doctest::Approx(t2).epsilon(1e-9));
  CHECK(term_R(m, map, step, 1, limit, tight()).value == doctest::Approx(r3).epsilon(1e-9));
}

TEST_CASE("delta response is the time derivative of the step response") {
  const MediumProfile m = example(0.5, 1.0);
  const TravelTimeMap map(m);
  const double t_plus = map.crossing_time();
  const InitialData step = InitialData::step();
  const InitialData delta = InitialData::delta();
  const double h = 1e-5;
  for (double f : {0.7, 1.4, 2.3}) {
    const double t = f * t_plus;
    const double r_step = (term_R(m, map, step, 1, t + h, tight()).value -
                           term_R(m, map, step, 1, t - h, tight()).value) /
                          (2.0 * h);
    CHECK(term_R(m, map, delta, 1, t, tight()).value == doctest::Approx(r_step / 2.0).epsilon(1e-6));
    const double t_step = (term_T(m, map, step, 1, t + t_plus + h, tight()).value -
                           term_T(m, map, step, 1, t + t_plus - h, tight()).value) /
                          (2.0 * h);
    CHECK(term_T(m, map, delta, 1, t + t_plus, tight()).value ==
          doctest::Approx(t_step / 2.0).epsilon(1e-6));
  }
  // The direct wave carries the whole impulse.
  CHECK(term_T(m, map, delta, 0, t_plus, tight()).impulse == doctest::Approx(std::sqrt(2.0) / 2.0));
}

TEST_CASE("quadrature and order limits are enforced") {
  const MediumProfile m = MediumProfile::sine_overlay(1.0, 0.25, 1.0, 2.0, 1.0, {0.1, 10.0});
  const TravelTimeMap map(m);
  const InitialData step = InitialData::step();
  QuadratureSpec coarse;
  coarse.nodes = 4;
  coarse.rel_tol = 1e-12;
  coarse.abs_tol = 0.0;
  coarse.workers = 1;
  CHECK(code_of([&] { term_R(m, map, step, 1, 2.0 * map.crossing_time(), coarse); }) ==
        ErrorCode::ToleranceNotMet);
  QuadratureSpec shallow = tight();
  shallow.max_order = 2;
  CHECK(code_of([&] { term_R(m, map, step, 1, 1.0, shallow); }) == ErrorCode::OrderTooDeep);
  QuadratureSpec tiny = tight();
  tiny.nodes = 3;
  CHECK(code_of([&] { term_R(m, map, step, 0, 1.0, tiny); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { field_w1(m, map, step, 0, 1.5, 1.0, tight()); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("jump media need the piecewise entry point") {
  const MediumProfile m = MediumProfile::piecewise(
      {{0.0, 1.0, 1.0, 1.0, 1.0}, {0.5, 1.2, 1.8, 1.0, 1.0}, {1.0, 2.0, 2.0, 1.0, 1.0}});
  const TravelTimeMap map(m);
  CHECK(code_of([&] { term_R(m, map, InitialData::step(), 0, 1.0, tight()); }) ==
        ErrorCode::UnsupportedTopology);
  // Before the echo returns only the smooth part contributes: log(Z(0.3)) / 2.
  CHECK(r1_piecewise(m, map, 0.6, tight()) == doctest::Approx(0.5 * std::log(1.12)).epsilon(1e-9));
  // After it the far segment is seen through the jump both ways: C_T C_T' = 1.2 * 0.8.
  const double after = 0.5 * std::log(1.2) + 0.2 + 0.96 * 0.5 * std::log(2.0 / 1.8);
  CHECK(r1_piecewise(m, map, 5.0, tight()) == doctest::Approx(after).epsilon(1e-9));
}

TEST_CASE("sharp interface sums reproduce the interface coefficients") {
  const MediumProfile m = MediumProfile::sharp_interface(1.0, 3.0, 1.0, 1.0);
  const TravelTimeMap map(m);
  QuadratureSpec spec = tight();
  spec.max_order = 40;
  const InterfaceCoefficients exact = interface_coefficients(1.0, 3.0);
  const PartialSum right = partial_sum(m, map, InitialData::step(), 30, 0.5, 1.0, spec);
  CHECK(right.value == doctest::Approx(exact.transmission).epsilon(1e-8));
  const PartialSum left = partial_sum(m, map, InitialData::step(), 30, -0.5, 1.0, spec);
  CHECK(left.value == doctest::Approx(1.0 + exact.reflection).epsilon(1e-8));
  CHECK(left.w1 == doctest::Approx(exact.reflection).epsilon(1e-8));
  // Before the waves arrive.
  CHECK(partial_sum(m, map, InitialData::step(), 30, 0.5, 0.4, spec).value == 0.0);
}

TEST_CASE("partial sums track the finite-volume solution") {
  const MediumProfile m = example(0.5, 1.0);
  const TravelTimeMap map(m);
  const double t = 2.0 * map.crossing_time();
  FvOptions options;
  options.limiter = Limiter::Superbee;
  const FvResult fv = solve(m, InitialData::step(), t, default_grid(m, t, 3000), options);
  QuadratureSpec spec;
  spec.workers = 1;
  for (double x : {-0.6, -0.2, 0.3, 0.7, 1.2}) {
    const PartialSum s = partial_sum(m, map, InitialData::step(), 4, x, t, spec);
    const auto& xs = fv.field.x;
    const auto it = std::lower_bound(xs.begin(), xs.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin());
    const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    const double oracle = (1.0 - w) * fv.field.p[i - 1] + w * fv.field.p[i];
    CHECK(std::abs(s.value - oracle) < 1e-2);
  }
}
