#include "pathsum/chebyshev.hpp"

#include "pathsum/error.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/constants/constants.hpp>

namespace pathsum {

namespace {

constexpr double pi = boost::math::constants::pi<double>();
constexpr int max_depth = 40;

}  // namespace

PiecewiseChebyshev::PiecewiseChebyshev(const std::function<double(double)>& f,
                                       std::span<const double> edges, double tolerance, int degree)
    : degree_(degree) {
  if (edges.size() < 2 || degree < 2)
    throw Error(ErrorCode::InvalidArgument, "Chebyshev proxy needs two edges and degree >= 2");
  for (int j = 0; j <= degree_; ++j) {
    nodes_.push_back(-std::cos(pi * j / degree_));
    double w = (j % 2 == 0) ? 1.0 : -1.0;
    if (j == 0 || j == degree_) w *= 0.5;
    weights_.push_back(w);
  }
  edges_.push_back(edges.front());
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (!(edges[i + 1] > edges[i]))
      throw Error(ErrorCode::InvalidArgument, "Chebyshev panel edges must increase");
    build_panel(f, edges[i], edges[i + 1], tolerance, 0);
  }
}

double PiecewiseChebyshev::evaluate(const double* values, double a, double b, double x) const {
  const double t = (2.0 * x - a - b) / (b - a);
  double num = 0.0;
  double den = 0.0;
  for (int j = 0; j <= degree_; ++j) {
    const double diff = t - nodes_[j];
    if (diff == 0.0) return values[j];
    const double w = weights_[j] / diff;
    num += w * values[j];
    den += w;
  }
  return num / den;
}

void PiecewiseChebyshev::build_panel(const std::function<double(double)>& f, double a, double b,
                                     double tolerance, int depth) {
  auto node = [&](int j) { return 0.5 * (a + b) + 0.5 * (b - a) * nodes_[j]; };
  std::vector<double> vals(degree_ + 1);
  for (int j = 0; j <= degree_; ++j) vals[j] = f(node(j));
  double err = 0.0;
  for (int j = 0; j < degree_; ++j) {
    const double x = 0.5 * (node(j) + node(j + 1));
    err = std::max(err, std::abs(evaluate(vals.data(), a, b, x) - f(x)));
  }
  if (err > tolerance && depth < max_depth && (b - a) > 1e-12 * std::max(1.0, std::abs(a))) {
    const double mid = 0.5 * (a + b);
    build_panel(f, a, mid, tolerance, depth + 1);
    build_panel(f, mid, b, tolerance, depth + 1);
    return;
  }
  certified_error_ = std::max(certified_error_, err);
  values_.insert(values_.end(), vals.begin(), vals.end());
  edges_.push_back(b);
}

double PiecewiseChebyshev::operator()(double x) const {
  x = std::clamp(x, edges_.front(), edges_.back());
  auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
  std::size_t p = static_cast<std::size_t>(std::distance(edges_.begin(), it));
  p = p == 0 ? 0 : std::min(p - 1, edges_.size() - 2);
  return evaluate(values_.data() + p * (degree_ + 1), edges_[p], edges_[p + 1], x);
}

}  // namespace pathsum
