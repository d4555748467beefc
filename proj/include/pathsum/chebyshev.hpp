#pragma once

#include <functional>
#include <span>
#include <vector>

namespace pathsum {

/**
 * Piecewise Chebyshev interpolant built by adaptive bisection. Each panel
 * stores values at Chebyshev-Lobatto points and is evaluated with the
 * barycentric formula. Panels are refined until the interpolant agrees with
 * the source function to `tolerance` at points interleaved between nodes.
 */
class PiecewiseChebyshev {
public:
  PiecewiseChebyshev() = default;

  /// `edges` are mandatory panel boundaries (sorted, at least two).
  PiecewiseChebyshev(const std::function<double(double)>& f, std::span<const double> edges,
                     double tolerance, int degree = 16);

  double operator()(double x) const;

  double lower() const { return edges_.front(); }
  double upper() const { return edges_.back(); }
  std::size_t panels() const { return edges_.size() - 1; }
  /// Largest deviation observed at the check points during construction.
  double certified_error() const { return certified_error_; }

private:
  double evaluate(const double* values, double a, double b, double x) const;
  void build_panel(const std::function<double(double)>& f, double a, double b, double tolerance,
                   int depth);

  int degree_ = 16;
  std::vector<double> nodes_;    // reference Lobatto points on [-1, 1]
  std::vector<double> weights_;  // barycentric weights
  std::vector<double> edges_;
  std::vector<double> values_;  // (degree + 1) per panel
  double certified_error_ = 0.0;
};

}  // namespace pathsum
