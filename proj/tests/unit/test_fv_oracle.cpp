#include "pathsum/error.hpp"
#include "pathsum/fv_oracle.hpp"

#include <doctest.h>

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

std::size_t nearest(const WaveField& f, double x) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < f.x.size(); ++i)
    if (std::abs(f.x[i] - x) < std::abs(f.x[best] - x)) best = i;
  return best;
}

InitialData pulse(double width) {
  const double pi = std::acos(-1.0);
  return InitialData::general(
      [=](double x) {
        if (x < -width || x > 0.0) return 0.0;
        const double s = std::sin(pi * x / width);
        return s * s;
      },
      1.0, pi / width, -width);
}

}  // namespace

TEST_CASE("a sharp interface splits the step into the Riemann states") {
  for (Limiter limiter : {Limiter::None, Limiter::Superbee}) {
    const MediumProfile m = MediumProfile::sharp_interface(1.0, 3.0, 1.0, 1.0);
    FvOptions options;
    options.limiter = limiter;
    const FvResult r = solve(m, InitialData::step(), 0.5, default_grid(m, 0.5, 1000), options);
    const InterfaceCoefficients c = interface_coefficients(1.0, 3.0);
    for (double x : {-0.2, 0.0, 0.2}) {
      const std::size_t i = nearest(r.field, x);
      CHECK(r.field.p[i] == doctest::Approx(c.transmission).epsilon(1e-10));
      // Particle velocity is continuous too: (1 - C_R) / Z_- = C_T / Z_+.
      CHECK(r.field.u[i] == doctest::Approx(c.transmission / 3.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("grid boundaries fall on cell edges") {
  const MediumProfile m = MediumProfile::linear(1.0, 0.5, 1.0, 2.0, 1.0);
  const Grid1D g = default_grid(m, 3.0, 4000);
  const double i0 = (0.0 - g.x_lo) / g.dx();
  const double i1 = (1.0 - g.x_lo) / g.dx();
  CHECK(std::abs(i0 - std::round(i0)) < 1e-8);
  CHECK(std::abs(i1 - std::round(i1)) < 1e-8);
  CHECK(g.x_lo <= -6.0);
  CHECK(g.x_hi >= 4.0);
  CHECK(std::round(i1 - i0) >= 200);
}

TEST_CASE("invalid oracle settings are rejected") {
  const MediumProfile m = MediumProfile::linear(1.0, 0.5, 1.0, 2.0, 1.0);
  Grid1D g = default_grid(m, 1.0, 500);
  g.cfl = 1.2;
  CHECK(code_of([&] { solve(m, InitialData::step(), 1.0, g); }) == ErrorCode::CFLViolation);
  g.cfl = 0.9;
  FvOptions narrow;
  narrow.delta_width_cells = 2.0;
  CHECK(code_of([&] { solve(m, InitialData::delta(), 1.0, g, narrow); }) == ErrorCode::UnresolvedDelta);
  CHECK(code_of([&] { default_grid(m, 1.0, 5); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("delta data carries unit mass") {
  const MediumProfile m = MediumProfile::linear(1.0, 1.0, 1.0, 1.0, 1.0);
  const Grid1D g = default_grid(m, 0.5, 2000);
  const FvResult r = solve(m, InitialData::delta(), 0.5, g);
  double mass = 0.0;
  for (double p : r.field.p) mass += p * g.dx();
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r.delta_center < 0.0);
}

TEST_CASE("upwind converges at first order, limited schemes faster on smooth data") {
  const MediumProfile m = MediumProfile::linear(1.0, 0.5, 1.0, 2.0, 1.0);
  const ConvergenceReport upwind = self_convergence(m, pulse(0.5), 0.6, 4, 400, Limiter::None);
  CHECK(upwind.order == doctest::Approx(1.0).epsilon(0.15));
  const ConvergenceReport mc = self_convergence(m, pulse(0.5), 0.6, 4, 400, Limiter::MC);
  // The kinks of Z' at 0 and x_plus cap the limited scheme below second order.
  CHECK(mc.order > upwind.order + 0.1);
  CHECK(mc.differences.back() < 0.5 * upwind.differences.back());
  CHECK(upwind.differences.size() == 3);
}

TEST_CASE("probes sample the characteristic fields every step") {
  const MediumProfile m = MediumProfile::sharp_interface(1.0, 3.0, 1.0, 1.0);
  FvOptions options;
  options.probes = {-0.5, 0.5};
  const FvResult r = solve(m, InitialData::step(), 1.0, default_grid(m, 1.0, 800), options);
  REQUIRE(r.probes.size() == 2);
  CHECK(r.probes[0].t.size() == static_cast<std::size_t>(r.steps) + 1);  // includes t = 0
  const ProbeSeries& left = r.probes[0];
  // Incident wave only, then the reflection joins the left-going field.
  CHECK(left.w2.back() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(left.w1.back() == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(left.w1[left.w1.size() / 4] == doctest::Approx(0.0).epsilon(1e-6));
  const ProbeSeries& right = r.probes[1];
  CHECK(right.p.back() == doctest::Approx(1.5).epsilon(1e-6));
  CHECK(right.w1.back() == doctest::Approx(0.0).epsilon(1e-6));
}
