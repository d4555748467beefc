#include "pathsum/asymptotics.hpp"
#include "pathsum/error.hpp"
#include "pathsum/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

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

// Taylor coefficients of sec + tan by the power-series quotient
// (1 + sin z) / cos z, independent of the library's recursion.
std::vector<double> sec_tan_coefficients(int n_max) {
  std::vector<double> cos_c(n_max + 1, 0.0), num(n_max + 1, 0.0);
  double factorial = 1.0;
  for (int k = 0; k <= n_max; ++k) {
    if (k > 0) factorial *= k;
    if (k % 2 == 0) cos_c[k] = (k / 2 % 2 ? -1.0 : 1.0) / factorial;
    else num[k] = ((k - 1) / 2 % 2 ? -1.0 : 1.0) / factorial;
  }
  num[0] = 1.0;
  std::vector<double> out(n_max + 1, 0.0);
  for (int k = 0; k <= n_max; ++k) {
    double s = num[k];
    for (int j = 1; j <= k; ++j) s -= cos_c[j] * out[k - j];
    out[k] = s;
  }
  return out;
}

// Measure of turning-time sets for a path arriving within budget t when
// c = 1 on [0, 1]; arrival at x = 0 for odd n and x = 1 for even n.
double path_set_measure(int n, double t) {
  NestedProblem p;
  p.levels = n;
  p.budget = t;
  p.side = n % 2 ? NestedProblem::Arrival::Left : NestedProblem::Arrival::Right;
  p.arrival = n % 2 ? 0.0 : 1.0;
  return integrate_nested(p, 16, 1).value;
}

}  // namespace

TEST_CASE("zigzag counts") {
  const ZigzagTable z = zigzag(12);
  const std::vector<int> known{1, 1, 1, 2, 5, 16, 61, 272, 1385, 7936, 50521, 353792, 2702765};
  for (int n = 0; n <= 12; ++n) CHECK(z.counts[n] == known[n]);
  CHECK(z.coefficients[3] == Rational(1, 3));
  CHECK(z.coefficients[4] == Rational(5, 24));
  for (int n = 1; n <= 9; ++n) CHECK(alternating_count_bruteforce(n) == z.counts[n]);
}

TEST_CASE("coefficients are the Taylor coefficients of sec + tan") {
  const auto oracle = sec_tan_coefficients(20);
  const ZigzagTable z = zigzag(20);
  for (int n = 0; n <= 20; ++n) CHECK(z.coefficient(n) == doctest::Approx(oracle[n]).epsilon(1e-13));
}

TEST_CASE("simplex volume scales with the interval") {
  CHECK(simplex_volume(0, 2.0, 3.0) == 1.0);
  CHECK(simplex_volume(3, 0.0, 2.0) == doctest::Approx(8.0 / 3.0));
  CHECK(simplex_volume(4, -1.0, 1.0) == doctest::Approx(16.0 * 5.0 / 24.0));
  CHECK(code_of([] { simplex_volume(2, 1.0, 0.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("asymptotic terms sum to the interface coefficients") {
  for (double green : {0.5, 0.9, 1.3, std::sqrt(2.0), 2.5}) {
    const InterfaceCoefficients exact = closed_form_coefficients(green);
    const InterfaceCoefficients direct = interface_coefficients(1.0, green * green);
    CHECK(exact.transmission == doctest::Approx(direct.transmission).epsilon(1e-14));
    CHECK(exact.reflection == doctest::Approx(direct.reflection).epsilon(1e-14));
    double t = 0.0, r = 0.0;
    for (int n = 0; n <= 40; ++n) {
      if (n % 2 == 0) t += asymptotic_term(BoundaryTerm::Transmission, n, green);
      else r += asymptotic_term(BoundaryTerm::Reflection, n, green);
    }
    CHECK(t == doctest::Approx(exact.transmission).epsilon(1e-8));
    CHECK(r == doctest::Approx(exact.reflection).epsilon(1e-8));
  }
}

TEST_CASE("asymptotic terms check parity") {
  CHECK(code_of([] { asymptotic_term(BoundaryTerm::Transmission, 3, 1.2); }) == ErrorCode::ParityMismatch);
  CHECK(code_of([] { asymptotic_term(BoundaryTerm::Reflection, 2, 1.2); }) == ErrorCode::ParityMismatch);
  CHECK(asymptotic_term(BoundaryTerm::Transmission, 0, 1.7) == 1.7);
  CHECK(asymptotic_term(BoundaryTerm::Reflection, 1, std::exp(0.3)) == doctest::Approx(0.3));
}

TEST_CASE("secant-tangent partial sums converge inside the disk only") {
  for (double z : {-1.2, -0.4, 0.3, 1.0, 1.3}) {
    CHECK(andre_partial_sum(z, 200) == doctest::Approx(1.0 / std::cos(z) + std::tan(z)).epsilon(1e-9));
  }
  CHECK(code_of([] { andre_partial_sum(1.6, 10); }) == ErrorCode::OutOfDisk);
  CHECK(code_of([] { andre_partial_sum(-2.0, 10); }) == ErrorCode::OutOfDisk);
}

TEST_CASE("strong bound hypotheses") {
  const StrongTailBound b = tail_bound_strong(BoundaryTerm::Transmission, 3, std::sqrt(1.5), 0.2, true);
  CHECK(b.ratio == doctest::Approx(0.75));
  CHECK(b.contracting);
  CHECK(b.bound == doctest::Approx(0.2 * 0.75 * 0.75 * 0.75));
  // |log 50| > 2 sqrt 2.
  CHECK(code_of([] { tail_bound_strong(BoundaryTerm::Reflection, 1, std::sqrt(50.0), 1.0, true); }) ==
        ErrorCode::HypothesisViolated);
  CHECK(code_of([] { tail_bound_strong(BoundaryTerm::Reflection, 1, 1.1, 1.0, false); }) ==
        ErrorCode::HypothesisViolated);
  // Allowed but not contracting: C_G^2 / 2 = 2.
  CHECK_FALSE(tail_bound_strong(BoundaryTerm::Transmission, 1, 2.0, 1.0, true).contracting);
}

TEST_CASE("volume bound values") {
  CHECK(volume_bound(3, 1.0, 1.0) == doctest::Approx(1.0 / 6.0));
  CHECK(volume_bound(0, 0.0, 1.0) == 1.0);
  CHECK(volume_bound(2, 0.0, 1.0) == 0.0);
  CHECK(volume_bound(4, 2.0, 1.5) == doctest::Approx(std::pow(3.0, 4) / 24.0));
}

TEST_CASE("path-set measure stays below the volume bound for odd n") {
  for (int n : {1, 3, 5}) {
    for (double t : {0.1, 0.5, 1.0, 2.0, 4.0}) CHECK(path_set_measure(n, t) <= volume_bound(n, t, 1.0) + 1e-14);
  }
}

TEST_CASE("path-set measure exceeds the volume bound for even n at short times") {
  // For n = 2 the set {0 <= s2 <= s1 <= 1, 2 (s1 - s2) <= t} has area
  // t/2 - t^2/8, which is linear in t, while (C t)^2 / 2 is quadratic.
  // Only the n/2 gaps s_(2j-1) - s_(2j) are tied to t, which gives
  // x_plus^(n/2) (C t / 2)^(n/2) / (n/2)! instead.
  const double t = 0.1;
  const double measure = path_set_measure(2, t);
  CHECK(measure == doctest::Approx(t / 2 - t * t / 8).epsilon(1e-13));
  CHECK(measure > volume_bound(2, t, 1.0));
  for (int n : {2, 4}) {
    for (double s : {0.1, 0.5, 1.0}) CHECK(path_set_measure(n, s) <= volume_bound(n / 2, s / 2, 1.0) + 1e-14);
  }
}
