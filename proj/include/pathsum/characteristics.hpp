#pragma once

#include "pathsum/chebyshev.hpp"
#include "pathsum/medium.hpp"

#include <vector>

namespace pathsum {

/**
 * The right-going characteristic from the origin, X'(t) = c(X), X(0) = 0,
 * and its inverse tau(x). Both maps are clamped outside [0, t_plus] and
 * [0, x_plus]. Linear media use the exponential closed form; otherwise
 * the ODE is integrated piece by piece and cached as Chebyshev proxies.
 */
class TravelTimeMap {
public:
  enum class Method { Auto, Ode };

  explicit TravelTimeMap(const MediumProfile& profile, Method method = Method::Auto);

  double crossing_time() const { return t_plus_; }
  double x_plus() const { return x_plus_; }
  double c_left() const { return c_left_; }
  double c_right() const { return c_right_; }

  /// X(t), with X = 0 for t <= 0 and X = x_plus for t >= t_plus.
  double position(double t) const;
  /// tau(x), with tau = 0 for x <= 0 and tau = t_plus for x >= x_plus.
  double travel_time(double x) const;

  bool closed_form() const { return closed_form_; }
  /// Bound on the proxy error observed at construction; 0 for the closed form.
  double certified_error() const { return certified_error_; }
  /// Travel times of the medium breakpoints, ascending, starting at 0.
  const std::vector<double>& breakpoint_times() const { return breakpoint_times_; }

private:
  double x_plus_ = 0.0;
  double t_plus_ = 0.0;
  double c_left_ = 1.0;
  double c_right_ = 1.0;
  bool closed_form_ = false;
  double rate_ = 0.0;  // dc/dx for the closed form
  double certified_error_ = 0.0;
  std::vector<double> breakpoint_times_;
  std::vector<double> breakpoint_positions_;
  std::vector<PiecewiseChebyshev> forward_;  // one per smooth piece
  std::vector<PiecewiseChebyshev> inverse_;
};

/// Turning points x_1..x_n with x_j >= x_{j-1} for odd j and <= for even j.
class ReflectionSequence {
public:
  ReflectionSequence() = default;
  /// Throws InvalidArgument unless the points alternate down-up.
  explicit ReflectionSequence(std::vector<double> points);

  const std::vector<double>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

private:
  std::vector<double> points_;
};

/// 2 * sum_j (-1)^(j+1) tau(x_j).
double path_travel_time(const TravelTimeMap& map, const ReflectionSequence& seq);

/// Initial position of a reflected path arriving at x at time t.
double origin_reflected(const TravelTimeMap& map, const ReflectionSequence& seq, double x, double t);

/// Initial position of a transmitted path arriving at x at time t.
double origin_transmitted(const TravelTimeMap& map, const ReflectionSequence& seq, double x,
                          double t);

/// X(t_remaining / 2), the deepest turning point reachable in the remaining time.
double frontier_point(const TravelTimeMap& map, double t_remaining);

}  // namespace pathsum
