#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace pathsum {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached n-point rule; safe to call concurrently.
const GaussRule& gauss_legendre(int n);

/**
 * An iterated integral over alternating turning times s_1..s_n in
 * [floor, ceiling]: s_1 >= s_0 = floor, s_2 <= s_1, s_3 >= s_2, ...
 *
 * With a finite budget the region is further cut by S_n <= budget, where
 * S_k = 2 sum_j (-1)^(j+1) s_j, and by the arrival constraint: s_n >= arrival
 * (left arrival, n odd) or s_n <= arrival (right arrival, n even). The level
 * limits are the exact projections of that region, so no inner level is
 * ever empty on the interior of an outer panel.
 */
struct NestedProblem {
  enum class Arrival { Left, Right };
  enum class Inner {
    Antiderivative,  // W(hi) - W(lo)
    Data,            // quadrature of weight(s) * data(budget - S_n)
    BudgetEdge,      // d/d(budget) of the Antiderivative form
  };

  int levels = 1;
  double floor = 0.0;
  double ceiling = 1.0;
  double budget = std::numeric_limits<double>::infinity();
  double arrival = 0.0;
  Arrival side = Arrival::Left;
  Inner inner = Inner::Antiderivative;

  std::function<double(double)> weight;          // empty means 1
  std::function<double(double)> antiderivative;  // empty means s
  std::function<double(double)> data;            // for Inner::Data
  std::function<double(double)> edge_weight;     // for Inner::BudgetEdge; empty means weight / 2

  /// Points where the weight loses smoothness; panels split there.
  std::vector<double> weight_breaks;
  /// Panels longer than this are split evenly.
  double max_panel = std::numeric_limits<double>::infinity();
};

struct NestedResult {
  double value = 0.0;
  std::size_t evaluations = 0;  // innermost evaluations
};

/// Tensor Gauss-Legendre with `nodes` points per panel at every level.
/// The outermost level is spread over `workers` threads and summed in
/// a fixed order, so the value does not depend on the worker count.
NestedResult integrate_nested(const NestedProblem& problem, int nodes, int workers = 1);

/// PATHSUM_WORKERS if set and positive, else 1.
int default_workers();

}  // namespace pathsum
