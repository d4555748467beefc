#include "pathsum/error.hpp"
#include "pathsum/medium.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

using namespace pathsum;

namespace {

// Central difference of log(Z)/2, independent of the analytic r(x).
double numeric_reflectivity(const MediumProfile& m, double x, double h = 1e-6) {
  return (m.half_log_impedance(x + h) - m.half_log_impedance(x - h)) / (2.0 * h);
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::ComputeError;
}

}  // namespace

TEST_CASE("interface coefficients satisfy continuity and flux balance") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> logz(-4.0, 4.0);
  for (int k = 0; k < 200; ++k) {
    const double zm = std::exp(logz(rng));
    const double zp = std::exp(logz(rng));
    const InterfaceCoefficients c = interface_coefficients(zm, zp);
    // Pressure is continuous: 1 + C_R = C_T.
    CHECK(1.0 + c.reflection == doctest::Approx(c.transmission).epsilon(1e-14));
    // Energy flux p^2/Z is conserved.
    CHECK(1.0 / zm == doctest::Approx(c.reflection * c.reflection / zm + c.transmission * c.transmission / zp)
                          .epsilon(1e-12));
  }
  const InterfaceCoefficients half = interface_coefficients(0.5, 1.0);
  CHECK(half.transmission == doctest::Approx(4.0 / 3.0));
  CHECK(half.reflection == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("linear medium values, reflectivity and Green's coefficient") {
  const MediumProfile m = MediumProfile::linear(1.0, 0.5, 1.0, 2.0, 1.0);
  CHECK(m.impedance(-3.0) == 0.5);
  CHECK(m.impedance(5.0) == 1.0);
  CHECK(m.impedance(0.5) == doctest::Approx(0.75));
  CHECK(m.speed(0.25) == doctest::Approx(1.75));
  CHECK(m.green_coefficient() == doctest::Approx(std::sqrt(2.0)));
  CHECK(m.green_coefficient(0.5) == doctest::Approx(std::sqrt(1.5)));
  for (double x : {0.1, 0.3, 0.5, 0.9}) {
    CHECK(m.reflectivity(x) == doctest::Approx(numeric_reflectivity(m, x)).epsilon(1e-8));
    CHECK(m.reflectivity(x) == doctest::Approx(0.5 / (2.0 * m.impedance(x))));
  }
  CHECK(m.reflectivity(-1.0) == 0.0);
  CHECK(m.reflectivity(2.0) == 0.0);
  CHECK(m.is_continuous());
  CHECK(m.is_monotone());
  CHECK(m.max_speed() == doctest::Approx(2.0));
  CHECK(m.max_reflectivity() == doctest::Approx(0.5));
  CHECK(std::isinf(m.feature_length()));
}

TEST_CASE("sine overlay oscillates and can lose monotonicity") {
  const MediumProfile m = MediumProfile::sine_overlay(1.0, 0.25, 1.0, 2.0, 1.0, {0.1, 10.0});
  const double pi = std::acos(-1.0);
  for (double x : {0.05, 0.33, 0.71}) {
    CHECK(m.impedance(x) == doctest::Approx(0.25 + 0.75 * x + 0.1 * std::sin(10.0 * pi * x)));
    CHECK(m.reflectivity(x) == doctest::Approx(numeric_reflectivity(m, x)).epsilon(1e-7));
  }
  CHECK(m.feature_length() == doctest::Approx(0.2));
  // Slope 0.75 against an overlay slope of pi: Z turns around.
  CHECK_FALSE(m.is_monotone());
  const MediumProfile gentle = MediumProfile::sine_overlay(1.0, 0.25, 1.0, 2.0, 1.0, {0.01, 2.0});
  CHECK(gentle.is_monotone());
}

TEST_CASE("piecewise medium with an interior jump") {
  const MediumProfile m = MediumProfile::piecewise(
      {{0.0, 1.0, 1.0, 1.0, 1.0}, {0.5, 1.2, 1.8, 1.0, 1.0}, {1.0, 2.0, 2.0, 1.0, 1.0}});
  REQUIRE(m.discontinuities().size() == 1);
  CHECK(m.discontinuities()[0].x == 0.5);
  CHECK(m.impedance(0.5) == doctest::Approx(1.2));
  CHECK(m.impedance_right(0.5) == doctest::Approx(1.8));
  CHECK(m.impedance(0.25) == doctest::Approx(1.1));
  CHECK(m.impedance(0.75) == doctest::Approx(1.9));
  CHECK_FALSE(m.is_continuous());
  CHECK(m.is_monotone());
  CHECK(code_of([&] { m.reflectivity(0.5); }) == ErrorCode::DiscontinuityPoint);
  CHECK(m.reflectivity(0.25) == doctest::Approx(0.4 / (2.0 * 1.1)));
}

TEST_CASE("shallow water depth gives Green's law amplification") {
  const double g = 9.81;
  const MediumProfile m = MediumProfile::from_shallow_water(DepthProfile::linear(4.0, 1.0, 1.0), g);
  CHECK(m.speed(-1.0) == doctest::Approx(std::sqrt(g * 4.0)));
  CHECK(m.impedance(2.0) == doctest::Approx(1.0 / std::sqrt(g)));
  // Amplification (h_-/h_+)^(1/4).
  CHECK(m.green_coefficient() == doctest::Approx(std::pow(4.0, 0.25)).epsilon(1e-12));
  CHECK(m.speed(0.5) == doctest::Approx(std::sqrt(g * 2.5)).epsilon(1e-4));
  CHECK(code_of([] { MediumProfile::from_shallow_water(DepthProfile::linear(1.0, -0.5, 1.0), 9.81); }) ==
        ErrorCode::NonPositiveDepth);
}

TEST_CASE("invalid media are rejected") {
  CHECK(code_of([] { MediumProfile::linear(1.0, -1.0, 1.0, 1.0, 1.0); }) == ErrorCode::InvalidMedium);
  CHECK(code_of([] { MediumProfile::linear(-1.0, 1.0, 1.0, 1.0, 1.0); }) == ErrorCode::InvalidMedium);
  CHECK(code_of([] { MediumProfile::piecewise({{0.0, 1, 1, 1, 1}, {0.0, 1, 1, 1, 1}}); }) ==
        ErrorCode::InvalidMedium);
  CHECK(code_of([] { MediumProfile::tabulated({{0.0, 0.5, 0.7, 1.0}, {1, 1, 1, 1}, {1, -1, 1, 1}}); }) ==
        ErrorCode::NonPositiveSpeed);
}

TEST_CASE("sharp interface is the zero-width limit") {
  const MediumProfile m = MediumProfile::sharp_interface(1.0, 3.0, 1.0, 1.0);
  CHECK(m.x_plus() == 0.0);
  CHECK(m.impedance(-1e-9) == 1.0);
  CHECK(m.impedance(1e-9) == 3.0);
  CHECK(m.green_coefficient() == doctest::Approx(std::sqrt(3.0)));
  CHECK(m.is_monotone());
}

TEST_CASE("tabulated samples interpolate monotonically") {
  Tabulated t;
  for (int i = 0; i <= 10; ++i) {
    const double x = 0.1 * i;
    t.x.push_back(x);
    t.z.push_back(1.0 + x * x);
    t.c.push_back(1.0);
  }
  const MediumProfile m = MediumProfile::tabulated(t);
  CHECK(m.impedance(0.35) == doctest::Approx(1.0 + 0.35 * 0.35).epsilon(1e-3));
  CHECK(m.is_monotone());
  for (int i = 0; i < 100; ++i) CHECK(m.impedance(0.01 * (i + 1)) >= m.impedance(0.01 * i));
}
