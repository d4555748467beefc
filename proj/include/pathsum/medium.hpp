#pragma once

#include <memory>
#include <variant>
#include <vector>

namespace pathsum {

/// Z and c vary linearly across [0, x_plus].
struct LinearInterp {};

/// Linear impedance plus amplitude * sin(frequency * pi * x / x_plus); c stays linear.
struct SineOverlay {
  double amplitude = 0.1;
  double frequency = 10.0;
};

/**
 * Breakpoint of a piecewise-linear profile. Left/right values differ at an
 * interior jump; at the region edges they must agree with the exterior.
 */
struct Knot {
  double x = 0.0;
  double z_left = 1.0;
  double z_right = 1.0;
  double c_left = 1.0;
  double c_right = 1.0;
};

struct PiecewiseLinear {
  std::vector<Knot> knots;
};

/// Samples interpolated with monotone (PCHIP) cubics for both Z and c.
struct Tabulated {
  std::vector<double> x;
  std::vector<double> z;
  std::vector<double> c;
};

using InteriorProfile = std::variant<LinearInterp, SineOverlay, PiecewiseLinear, Tabulated>;

/// An interior jump in the coefficients, with the one-sided values.
struct Discontinuity {
  double x = 0.0;
  double z_left = 1.0;
  double z_right = 1.0;
  double c_left = 1.0;
  double c_right = 1.0;
};

struct InterfaceCoefficients {
  double transmission = 1.0;
  double reflection = 0.0;
};

/// Sharp-interface coefficients for a wave incident from the z_minus side.
InterfaceCoefficients interface_coefficients(double z_minus, double z_plus);

/// Background depth samples for the linearized shallow water equations.
struct DepthProfile {
  std::vector<double> x;
  std::vector<double> h;

  /// Depth varying linearly from h_left at x=0 to h_right at x=x_plus.
  static DepthProfile linear(double h_left, double h_right, double x_plus, int samples = 65);
};

/**
 * Impedance Z(x) and sound speed c(x) on the three-region layout: constant
 * (Z_-, c_-) for x < 0, a variable interior on [0, x_plus], and constant
 * (Z_+, c_+) for x > x_plus. Immutable after construction.
 */
class MediumProfile {
public:
  static MediumProfile linear(double x_plus, double z_left, double z_right, double c_left,
                              double c_right);
  static MediumProfile sine_overlay(double x_plus, double z_left, double z_right, double c_left,
                                    double c_right, SineOverlay overlay = {});
  static MediumProfile piecewise(std::vector<Knot> knots);
  static MediumProfile tabulated(Tabulated samples);
  /// The x_plus = 0 limit: a single jump at the origin.
  static MediumProfile sharp_interface(double z_left, double z_right, double c_left,
                                       double c_right);
  /// K = 1, rho = 1/(g h): c = sqrt(g h), Z = 1/sqrt(g h).
  static MediumProfile from_shallow_water(const DepthProfile& depth, double gravity);

  double x_plus() const { return x_plus_; }
  double z_left() const { return z_left_; }
  double z_right() const { return z_right_; }
  double c_left() const { return c_left_; }
  double c_right() const { return c_right_; }
  const InteriorProfile& interior() const { return interior_; }

  /// Z(x); the left limit at a declared jump.
  double impedance(double x) const;
  double impedance_right(double x) const;
  /// c(x); the left limit at a declared jump.
  double speed(double x) const;
  double speed_right(double x) const;

  /// r(x) = Z'(x) / (2 Z(x)). Zero outside [0, x_plus].
  double reflectivity(double x) const;

  /// sqrt(Z(x) / Z_-).
  double green_coefficient(double x) const;
  /// C_G = sqrt(Z_+ / Z_-).
  double green_coefficient() const;

  /// log(Z(x)) / 2, an antiderivative of r on every continuous piece.
  double half_log_impedance(double x) const;

  const std::vector<Discontinuity>& discontinuities() const { return discontinuities_; }
  bool is_continuous() const { return discontinuities_.empty(); }
  bool is_linear() const { return std::holds_alternative<LinearInterp>(interior_); }
  /// Z non-decreasing or non-increasing over the whole line.
  bool is_monotone() const { return monotone_; }

  /// Points of [0, x_plus] (always including both ends) where the
  /// coefficients may lose smoothness.
  const std::vector<double>& breakpoints() const { return breakpoints_; }

  /// c on the smooth piece [breakpoints()[piece], breakpoints()[piece + 1]],
  /// extended past the piece ends with the same formula where one exists.
  double speed_on_piece(std::size_t piece, double x) const;

  /// Shortest length over which the interior oscillates; infinite if it does not.
  double feature_length() const;

  double max_speed() const { return max_speed_; }
  /// max |r(x)| over the variable region.
  double max_reflectivity() const { return max_reflectivity_; }

private:
  MediumProfile() = default;
  void finalize();
  double interior_z(double x, bool right) const;
  double interior_c(double x, bool right) const;
  double interior_dz(double x) const;

  struct Spline;

  double x_plus_ = 1.0;
  double z_left_ = 1.0;
  double z_right_ = 1.0;
  double c_left_ = 1.0;
  double c_right_ = 1.0;
  InteriorProfile interior_ = LinearInterp{};
  std::shared_ptr<const Spline> spline_;
  std::vector<Discontinuity> discontinuities_;
  std::vector<double> breakpoints_;
  bool monotone_ = true;
  double max_speed_ = 1.0;
  double max_reflectivity_ = 0.0;
};

}  // namespace pathsum
