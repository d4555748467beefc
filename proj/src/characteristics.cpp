#include "pathsum/characteristics.hpp"

#include "pathsum/error.hpp"

#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <sstream>

namespace pathsum {

namespace {

namespace odeint = boost::numeric::odeint;

using State = std::array<double, 1>;
using Stepper = odeint::result_of::make_dense_output<odeint::runge_kutta_dopri5<State>>::type;

constexpr double ode_tolerance = 1e-13;
constexpr double proxy_tolerance = 1e-12;

// Dense solution of X' = c(X) across one smooth piece, stored as the
// sequence of accepted steps.
class PieceSolution {
public:
  PieceSolution(const MediumProfile& profile, std::size_t piece, double x_a, double x_b, double t_a)
      : x_a_(x_a), x_b_(x_b), t_a_(t_a) {
    auto rhs = [&profile, piece](const State& x, State& dxdt, double) {
      dxdt[0] = profile.speed_on_piece(piece, x[0]);
    };
    Stepper stepper = odeint::make_dense_output(ode_tolerance, ode_tolerance,
                                                odeint::runge_kutta_dopri5<State>());
    const double c0 = profile.speed_on_piece(piece, x_a);
    stepper.initialize(State{x_a}, t_a, 1e-3 * (x_b - x_a) / c0);
    for (int guard = 0; stepper.current_state()[0] < x_b; ++guard) {
      if (guard > 1000000) throw Error(ErrorCode::ComputeError, "characteristic ODE did not cross");
      stepper.do_step(rhs);
      steps_.push_back(stepper);
      t_end_.push_back(stepper.current_time());
      x_end_.push_back(stepper.current_state()[0]);
    }
    t_b_ = solve_time(x_b);
  }

  double t_begin() const { return t_a_; }
  double t_end() const { return t_b_; }

  double position(double t) const {
    if (t <= t_a_) return x_a_;
    auto it = std::lower_bound(t_end_.begin(), t_end_.end(), t);
    const std::size_t k = std::min<std::size_t>(it - t_end_.begin(), steps_.size() - 1);
    State x{};
    steps_[k].calc_state(t, x);
    return x[0];
  }

  double time_at(double x) const {
    if (x <= x_a_) return t_a_;
    if (x >= x_b_) return t_b_;
    return solve_time(x);
  }

private:
  double solve_time(double x) const {
    auto it = std::lower_bound(x_end_.begin(), x_end_.end(), x);
    const std::size_t k = std::min<std::size_t>(it - x_end_.begin(), steps_.size() - 1);
    const double lo = k == 0 ? t_a_ : t_end_[k - 1];
    const double hi = t_end_[k];
    State s{};
    auto f = [&](double t) {
      steps_[k].calc_state(t, s);
      return s[0] - x;
    };
    const double f_lo = f(lo);
    const double f_hi = f(hi);
    if (f_lo >= 0.0) return lo;
    if (f_hi <= 0.0) return hi;
    std::uintmax_t iterations = 200;
    auto r = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi,
                                               boost::math::tools::eps_tolerance<double>(50),
                                               iterations);
    return 0.5 * (r.first + r.second);
  }

  double x_a_;
  double x_b_;
  double t_a_;
  double t_b_ = 0.0;
  std::vector<Stepper> steps_;
  std::vector<double> t_end_;
  std::vector<double> x_end_;
};

}  // namespace

TravelTimeMap::TravelTimeMap(const MediumProfile& profile, Method method)
    : x_plus_(profile.x_plus()), c_left_(profile.c_left()), c_right_(profile.c_right()) {
  if (x_plus_ == 0.0) {
    closed_form_ = true;
    breakpoint_times_ = {0.0};
    breakpoint_positions_ = {0.0};
    return;
  }
  const bool linear_speed = std::holds_alternative<LinearInterp>(profile.interior()) ||
                            std::holds_alternative<SineOverlay>(profile.interior());
  if (linear_speed && method == Method::Auto) {
    closed_form_ = true;
    rate_ = (c_right_ - c_left_) / x_plus_;
    if (std::abs(rate_) * x_plus_ <= 1e-14 * c_left_) rate_ = 0.0;
    t_plus_ = rate_ == 0.0 ? x_plus_ / c_left_ : std::log1p(rate_ * x_plus_ / c_left_) / rate_;
    breakpoint_times_ = {0.0, t_plus_};
    breakpoint_positions_ = {0.0, x_plus_};
    return;
  }

  const auto& xs = profile.breakpoints();
  breakpoint_positions_ = xs;
  breakpoint_times_ = {0.0};
  double t_a = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const PieceSolution piece(profile, i, xs[i], xs[i + 1], t_a);
    const double t_b = piece.t_end();
    const std::array<double, 2> t_edges{t_a, t_b};
    const std::array<double, 2> x_edges{xs[i], xs[i + 1]};
    forward_.emplace_back([&](double t) { return piece.position(t); }, t_edges, proxy_tolerance);
    inverse_.emplace_back([&](double x) { return piece.time_at(x); }, x_edges, proxy_tolerance);
    certified_error_ = std::max({certified_error_, forward_.back().certified_error(),
                                 inverse_.back().certified_error()});
    breakpoint_times_.push_back(t_b);
    t_a = t_b;
  }
  t_plus_ = t_a;
  if (certified_error_ > 1e-10) {
    std::ostringstream msg;
    msg << "travel-time proxy error " << certified_error_ << " exceeds 1e-10";
    throw Error(ErrorCode::ToleranceNotMet, msg.str());
  }
}

double TravelTimeMap::position(double t) const {
  if (t <= 0.0) return 0.0;
  if (t >= t_plus_) return x_plus_;
  if (closed_form_) {
    const double x = rate_ == 0.0 ? c_left_ * t : c_left_ * std::expm1(rate_ * t) / rate_;
    return std::min(x, x_plus_);
  }
  auto it = std::upper_bound(breakpoint_times_.begin(), breakpoint_times_.end(), t);
  const std::size_t i = std::min<std::size_t>(it - breakpoint_times_.begin() - 1, forward_.size() - 1);
  return std::clamp(forward_[i](t), breakpoint_positions_[i], breakpoint_positions_[i + 1]);
}

double TravelTimeMap::travel_time(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= x_plus_) return t_plus_;
  if (closed_form_) {
    const double t = rate_ == 0.0 ? x / c_left_ : std::log1p(rate_ * x / c_left_) / rate_;
    return std::min(t, t_plus_);
  }
  auto it = std::upper_bound(breakpoint_positions_.begin(), breakpoint_positions_.end(), x);
  const std::size_t i =
      std::min<std::size_t>(it - breakpoint_positions_.begin() - 1, inverse_.size() - 1);
  return std::clamp(inverse_[i](x), breakpoint_times_[i], breakpoint_times_[i + 1]);
}

ReflectionSequence::ReflectionSequence(std::vector<double> points) : points_(std::move(points)) {
  for (std::size_t j = 1; j < points_.size(); ++j) {
    // 0-based index j holds x_{j+1}; x_{j+1} is odd-indexed when j is even.
    const bool up = j % 2 == 0;
    const bool ok = up ? points_[j] >= points_[j - 1] : points_[j] <= points_[j - 1];
    if (!ok) {
      std::ostringstream msg;
      msg << "sequence is not alternating at position " << j + 1;
      throw Error(ErrorCode::InvalidArgument, msg.str());
    }
  }
}

double path_travel_time(const TravelTimeMap& map, const ReflectionSequence& seq) {
  double sum = 0.0;
  double sign = 1.0;
  for (double x : seq.points()) {
    sum += sign * map.travel_time(x);
    sign = -sign;
  }
  return 2.0 * sum;
}

double origin_reflected(const TravelTimeMap& map, const ReflectionSequence& seq, double x, double t) {
  return -map.c_left() * (t - path_travel_time(map, seq) + map.travel_time(x));
}

double origin_transmitted(const TravelTimeMap& map, const ReflectionSequence& seq, double x,
                          double t) {
  return -map.c_left() * (t - path_travel_time(map, seq) - map.travel_time(x));
}

double frontier_point(const TravelTimeMap& map, double t_remaining) {
  return map.position(0.5 * t_remaining);
}

}  // namespace pathsum
