#include "pathsum/error.hpp"
#include "pathsum/quadrature.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace pathsum;

namespace {

// Down-up permutation counts from the Seidel-Entringer triangle.
std::vector<double> alternating_fractions(int n_max) {
  std::vector<double> out{1.0};
  std::vector<double> row{1.0};
  double factorial = 1.0;
  for (int n = 1; n <= n_max; ++n) {
    std::vector<double> next(n + 1, 0.0);
    for (int k = 1; k <= n; ++k) next[k] = next[k - 1] + row[n - k];
    row = next;
    factorial *= n;
    out.push_back(row[n] / factorial);
  }
  return out;
}

NestedProblem volume(int levels) {
  NestedProblem p;
  p.levels = levels;
  p.side = levels % 2 ? NestedProblem::Arrival::Left : NestedProblem::Arrival::Right;
  p.arrival = levels % 2 ? 0.0 : 1.0;  // never binding
  return p;
}

}  // namespace

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2n - 1 exactly") {
  for (int n : {1, 2, 5, 12, 24}) {
    const GaussRule& g = gauss_legendre(n);
    REQUIRE(g.nodes.size() == static_cast<std::size_t>(n));
    for (int d = 0; d <= 2 * n - 1; ++d) {
      double sum = 0.0;
      for (int i = 0; i < n; ++i) sum += g.weights[i] * std::pow(g.nodes[i], d);
      const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
      CHECK(std::abs(sum - exact) < 1e-14);
    }
  }
}

TEST_CASE("alternating region volumes match the Entringer counts") {
  const auto a = alternating_fractions(7);
  for (int n = 1; n <= 7; ++n) {
    const NestedResult r = integrate_nested(volume(n), 8, 1);
    CHECK(std::abs(r.value - a[n]) < 1e-12);
    CHECK(r.evaluations > 0);
  }
}

TEST_CASE("volume over a sub-interval scales as the n-th power") {
  const auto a = alternating_fractions(5);
  NestedProblem p = volume(5);
  p.floor = 0.25;
  p.ceiling = 0.75;
  p.arrival = 0.25;
  CHECK(std::abs(integrate_nested(p, 8, 1).value - a[5] * std::pow(0.5, 5)) < 1e-14);
}

TEST_CASE("budget cuts the region exactly") {
  for (double b : {0.3, 1.0, 1.7, 2.5}) {
    const double d = std::min(b / 2.0, 1.0);
    NestedProblem one = volume(1);
    one.budget = b;
    CHECK(integrate_nested(one, 8, 1).value == doctest::Approx(d).epsilon(1e-14));

    // {0 <= s2 <= s1 <= 1, s1 - s2 <= b/2}
    NestedProblem two = volume(2);
    two.budget = b;
    CHECK(integrate_nested(two, 8, 1).value == doctest::Approx(0.5 - 0.5 * (1 - d) * (1 - d)).epsilon(1e-13));
  }
}

TEST_CASE("data mode integrates against the remaining budget") {
  // int_0^{b/2} (b - 2 s) ds = b^2 / 4 for b <= 2.
  NestedProblem p = volume(1);
  p.budget = 1.2;
  p.inner = NestedProblem::Inner::Data;
  p.data = [](double r) { return r; };
  CHECK(integrate_nested(p, 8, 1).value == doctest::Approx(0.36).epsilon(1e-14));

  // A weight and a kink: int_0^{0.6} e^s (1.2 - 2 s) ds.
  p.weight = [](double s) { return std::exp(s); };
  const double exact = 1.2 * (std::exp(0.6) - 1.0) - 2.0 * (0.6 * std::exp(0.6) - std::exp(0.6) + 1.0);
  CHECK(integrate_nested(p, 8, 1).value == doctest::Approx(exact).epsilon(1e-13));
}

TEST_CASE("budget-edge mode is the derivative of the budget-cut integral") {
  NestedProblem p = volume(3);
  p.weight = [](double s) { return 1.0 + s * s; };
  p.antiderivative = [](double s) { return s + s * s * s / 3.0; };
  const double b = 1.3;
  const double h = 1e-5;
  auto at = [&](double budget) {
    NestedProblem q = p;
    q.budget = budget;
    return integrate_nested(q, 16, 1).value;
  };
  NestedProblem edge = p;
  edge.budget = b;
  edge.inner = NestedProblem::Inner::BudgetEdge;
  const double derivative = (at(b + h) - at(b - h)) / (2.0 * h);
  CHECK(integrate_nested(edge, 16, 1).value == doctest::Approx(derivative).epsilon(1e-7));
}

TEST_CASE("worker count does not change the value") {
  NestedProblem p = volume(4);
  p.budget = 1.1;
  p.weight = [](double s) { return std::cos(3.0 * s); };
  p.antiderivative = [](double s) { return std::sin(3.0 * s) / 3.0; };
  const double serial = integrate_nested(p, 12, 1).value;
  for (int workers : {2, 3, 7}) CHECK(integrate_nested(p, 12, workers).value == serial);
}

TEST_CASE("malformed problems are rejected") {
  NestedProblem p = volume(0);
  CHECK_THROWS_AS(integrate_nested(p, 8, 1), Error);
  NestedProblem q = volume(1);
  q.inner = NestedProblem::Inner::Data;
  CHECK_THROWS_AS(integrate_nested(q, 8, 1), Error);
  CHECK_THROWS_AS(gauss_legendre(0), Error);
}
