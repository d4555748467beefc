#include "pathsum/medium.hpp"

#include "pathsum/error.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/interpolators/pchip.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace pathsum {

namespace {

constexpr double pi = boost::math::constants::pi<double>();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << what << " must be positive and finite (got " << value << ")";
    throw Error(ErrorCode::InvalidMedium, msg.str());
  }
}

// Index of the piecewise segment [knots[i], knots[i+1]] containing x.
std::size_t segment_of(const std::vector<Knot>& knots, double x) {
  auto it = std::upper_bound(knots.begin(), knots.end(), x,
                             [](double v, const Knot& k) { return v < k.x; });
  std::size_t i = static_cast<std::size_t>(std::distance(knots.begin(), it));
  if (i == 0) return 0;
  return std::min(i - 1, knots.size() - 2);
}

}  // namespace

struct MediumProfile::Spline {
  boost::math::interpolators::pchip<std::vector<double>> z;
  boost::math::interpolators::pchip<std::vector<double>> c;
  double lo;
  double hi;
};

InterfaceCoefficients interface_coefficients(double z_minus, double z_plus) {
  require_positive(z_minus, "z_minus");
  require_positive(z_plus, "z_plus");
  const double sum = z_minus + z_plus;
  return {2.0 * z_plus / sum, (z_plus - z_minus) / sum};
}

DepthProfile DepthProfile::linear(double h_left, double h_right, double x_plus, int samples) {
  if (samples < 4) throw Error(ErrorCode::InvalidArgument, "depth profile needs >= 4 samples");
  DepthProfile d;
  for (int i = 0; i < samples; ++i) {
    const double f = static_cast<double>(i) / (samples - 1);
    d.x.push_back(f * x_plus);
    d.h.push_back((1.0 - f) * h_left + f * h_right);
  }
  return d;
}

MediumProfile MediumProfile::linear(double x_plus, double z_left, double z_right, double c_left,
                                    double c_right) {
  MediumProfile m;
  if (!(x_plus >= 0.0)) throw Error(ErrorCode::InvalidMedium, "x_plus must be >= 0");
  m.x_plus_ = x_plus;
  m.z_left_ = z_left;
  m.z_right_ = z_right;
  m.c_left_ = c_left;
  m.c_right_ = c_right;
  m.interior_ = LinearInterp{};
  m.finalize();
  return m;
}

MediumProfile MediumProfile::sine_overlay(double x_plus, double z_left, double z_right,
                                          double c_left, double c_right, SineOverlay overlay) {
  if (!(x_plus > 0.0)) throw Error(ErrorCode::InvalidMedium, "sine overlay needs x_plus > 0");
  if (std::abs(overlay.amplitude * std::sin(overlay.frequency * pi)) > 1e-12 * std::abs(z_right))
    throw Error(ErrorCode::InvalidMedium,
                "sine overlay must vanish at x_plus (integer frequency required)");
  MediumProfile m;
  m.x_plus_ = x_plus;
  m.z_left_ = z_left;
  m.z_right_ = z_right;
  m.c_left_ = c_left;
  m.c_right_ = c_right;
  m.interior_ = overlay;
  m.finalize();
  return m;
}

MediumProfile MediumProfile::piecewise(std::vector<Knot> knots) {
  if (knots.size() < 2) throw Error(ErrorCode::InvalidMedium, "piecewise profile needs >= 2 knots");
  if (knots.front().x != 0.0) throw Error(ErrorCode::InvalidMedium, "first knot must be at x = 0");
  for (std::size_t i = 1; i < knots.size(); ++i)
    if (!(knots[i].x > knots[i - 1].x))
      throw Error(ErrorCode::InvalidMedium, "knots must be strictly increasing");
  const Knot& first = knots.front();
  const Knot& last = knots.back();
  if (first.z_left != first.z_right || first.c_left != first.c_right || last.z_left != last.z_right ||
      last.c_left != last.c_right)
    throw Error(ErrorCode::InvalidMedium, "jumps are only allowed at interior knots");
  MediumProfile m;
  m.x_plus_ = last.x;
  m.z_left_ = first.z_left;
  m.z_right_ = last.z_right;
  m.c_left_ = first.c_left;
  m.c_right_ = last.c_right;
  m.interior_ = PiecewiseLinear{std::move(knots)};
  m.finalize();
  return m;
}

MediumProfile MediumProfile::tabulated(Tabulated samples) {
  const std::size_t n = samples.x.size();
  if (n < 4 || samples.z.size() != n || samples.c.size() != n)
    throw Error(ErrorCode::InvalidMedium, "tabulated profile needs >= 4 matching samples");
  if (samples.x.front() != 0.0) throw Error(ErrorCode::InvalidMedium, "samples must start at x = 0");
  for (std::size_t i = 1; i < n; ++i)
    if (!(samples.x[i] > samples.x[i - 1]))
      throw Error(ErrorCode::InvalidMedium, "sample positions must be strictly increasing");
  for (std::size_t i = 0; i < n; ++i) {
    require_positive(samples.z[i], "tabulated impedance");
    if (!(samples.c[i] > 0.0)) throw Error(ErrorCode::NonPositiveSpeed, "tabulated speed must be > 0");
  }
  MediumProfile m;
  m.x_plus_ = samples.x.back();
  m.z_left_ = samples.z.front();
  m.z_right_ = samples.z.back();
  m.c_left_ = samples.c.front();
  m.c_right_ = samples.c.back();
  auto xs = samples.x;
  auto zs = samples.z;
  auto xs2 = samples.x;
  auto cs = samples.c;
  m.spline_ = std::make_shared<const Spline>(
      Spline{boost::math::interpolators::pchip<std::vector<double>>(std::move(xs), std::move(zs)),
             boost::math::interpolators::pchip<std::vector<double>>(std::move(xs2), std::move(cs)),
             samples.x.front(), samples.x.back()});
  m.interior_ = std::move(samples);
  m.finalize();
  return m;
}

MediumProfile MediumProfile::sharp_interface(double z_left, double z_right, double c_left,
                                             double c_right) {
  return linear(0.0, z_left, z_right, c_left, c_right);
}

MediumProfile MediumProfile::from_shallow_water(const DepthProfile& depth, double gravity) {
  if (!(gravity > 0.0)) throw Error(ErrorCode::InvalidArgument, "gravity must be > 0");
  if (depth.x.size() != depth.h.size())
    throw Error(ErrorCode::InvalidArgument, "depth samples must match positions");
  Tabulated t;
  for (std::size_t i = 0; i < depth.h.size(); ++i) {
    const double h = depth.h[i];
    if (!(h > 0.0)) {
      std::ostringstream msg;
      msg << "depth must be positive (h = " << h << " at x = " << depth.x[i] << ")";
      throw Error(ErrorCode::NonPositiveDepth, msg.str());
    }
    const double speed = std::sqrt(gravity * h);
    t.x.push_back(depth.x[i]);
    t.c.push_back(speed);
    t.z.push_back(1.0 / speed);
  }
  return tabulated(std::move(t));
}

void MediumProfile::finalize() {
  require_positive(z_left_, "Z_-");
  require_positive(z_right_, "Z_+");
  if (!(c_left_ > 0.0) || !(c_right_ > 0.0))
    throw Error(ErrorCode::NonPositiveSpeed, "exterior sound speeds must be > 0");

  breakpoints_ = {0.0};
  discontinuities_.clear();
  if (x_plus_ == 0.0) {
    if (z_left_ != z_right_ || c_left_ != c_right_)
      discontinuities_.push_back({0.0, z_left_, z_right_, c_left_, c_right_});
  } else {
    std::visit(overloaded{
                   [](const LinearInterp&) {},
                   [](const SineOverlay&) {},
                   [this](const PiecewiseLinear& p) {
                     for (std::size_t i = 1; i + 1 < p.knots.size(); ++i) {
                       const Knot& k = p.knots[i];
                       breakpoints_.push_back(k.x);
                       if (k.z_left != k.z_right || k.c_left != k.c_right)
                         discontinuities_.push_back({k.x, k.z_left, k.z_right, k.c_left, k.c_right});
                     }
                   },
                   [this](const Tabulated& t) {
                     for (std::size_t i = 1; i + 1 < t.x.size(); ++i) breakpoints_.push_back(t.x[i]);
                   },
               },
               interior_);
    breakpoints_.push_back(x_plus_);
  }

  // Sampled checks of positivity, monotonicity and the bound constants.
  max_speed_ = std::max(c_left_, c_right_);
  max_reflectivity_ = 0.0;
  bool increasing = true;
  bool decreasing = true;
  if (x_plus_ > 0.0) {
    constexpr int samples = 4096;
    std::vector<double> probes;
    for (int i = 0; i <= samples; ++i) probes.push_back(x_plus_ * i / samples);
    for (double b : breakpoints_) probes.push_back(b);
    for (double x : probes) {
      for (bool right : {false, true}) {
        const double z = interior_z(x, right);
        const double c = interior_c(x, right);
        require_positive(z, "Z(x)");
        if (!(c > 0.0)) throw Error(ErrorCode::NonPositiveSpeed, "c(x) must be > 0");
        max_speed_ = std::max(max_speed_, c);
      }
      bool at_jump = false;
      for (const auto& d : discontinuities_) at_jump = at_jump || d.x == x;
      if (!at_jump) {
        const double dz = interior_dz(x);
        max_reflectivity_ = std::max(max_reflectivity_, std::abs(dz) / (2.0 * interior_z(x, true)));
        if (dz > 0.0) decreasing = false;
        if (dz < 0.0) increasing = false;
      }
    }
    for (const auto& d : discontinuities_) {
      if (d.z_right > d.z_left) decreasing = false;
      if (d.z_right < d.z_left) increasing = false;
    }
  }
  if (z_right_ > z_left_) decreasing = false;
  if (z_right_ < z_left_) increasing = false;
  monotone_ = increasing || decreasing;
}

double MediumProfile::interior_z(double x, bool right) const {
  const double f = x / x_plus_;
  return std::visit(
      overloaded{
          [&](const LinearInterp&) { return (1.0 - f) * z_left_ + f * z_right_; },
          [&](const SineOverlay& s) {
            return (1.0 - f) * z_left_ + f * z_right_ + s.amplitude * std::sin(s.frequency * pi * f);
          },
          [&](const PiecewiseLinear& p) {
            const auto& k = p.knots;
            std::size_t i = segment_of(k, x);
            if (!right && x == k[i].x && i > 0) i -= 1;
            const double w = (x - k[i].x) / (k[i + 1].x - k[i].x);
            return (1.0 - w) * k[i].z_right + w * k[i + 1].z_left;
          },
          [&](const Tabulated&) {
            return spline_->z(std::clamp(x, spline_->lo, spline_->hi));
          },
      },
      interior_);
}

double MediumProfile::interior_c(double x, bool right) const {
  const double f = x / x_plus_;
  return std::visit(
      overloaded{
          [&](const LinearInterp&) { return (1.0 - f) * c_left_ + f * c_right_; },
          [&](const SineOverlay&) { return (1.0 - f) * c_left_ + f * c_right_; },
          [&](const PiecewiseLinear& p) {
            const auto& k = p.knots;
            std::size_t i = segment_of(k, x);
            if (!right && x == k[i].x && i > 0) i -= 1;
            const double w = (x - k[i].x) / (k[i + 1].x - k[i].x);
            return (1.0 - w) * k[i].c_right + w * k[i + 1].c_left;
          },
          [&](const Tabulated&) {
            return spline_->c(std::clamp(x, spline_->lo, spline_->hi));
          },
      },
      interior_);
}

// Right derivative of Z on the interior.
double MediumProfile::interior_dz(double x) const {
  return std::visit(
      overloaded{
          [&](const LinearInterp&) { return (z_right_ - z_left_) / x_plus_; },
          [&](const SineOverlay& s) {
            const double k = s.frequency * pi / x_plus_;
            return (z_right_ - z_left_) / x_plus_ + s.amplitude * k * std::cos(k * x);
          },
          [&](const PiecewiseLinear& p) {
            const auto& k = p.knots;
            const std::size_t i = segment_of(k, x);
            return (k[i + 1].z_left - k[i].z_right) / (k[i + 1].x - k[i].x);
          },
          [&](const Tabulated&) {
            return spline_->z.prime(std::clamp(x, spline_->lo, spline_->hi));
          },
      },
      interior_);
}

double MediumProfile::speed_on_piece(std::size_t piece, double x) const {
  if (x_plus_ == 0.0) return c_right_;
  return std::visit(
      overloaded{
          [&](const PiecewiseLinear& p) {
            const auto& k = p.knots;
            const std::size_t i = std::min(piece, k.size() - 2);
            const double w = (x - k[i].x) / (k[i + 1].x - k[i].x);
            return (1.0 - w) * k[i].c_right + w * k[i + 1].c_left;
          },
          [&](const Tabulated&) { return spline_->c(std::clamp(x, spline_->lo, spline_->hi)); },
          [&](const auto&) {
            const double f = x / x_plus_;
            return (1.0 - f) * c_left_ + f * c_right_;
          },
      },
      interior_);
}

double MediumProfile::feature_length() const {
  if (const auto* s = std::get_if<SineOverlay>(&interior_); s && s->amplitude != 0.0 && s->frequency != 0.0)
    return 2.0 * x_plus_ / std::abs(s->frequency);
  return std::numeric_limits<double>::infinity();
}

double MediumProfile::impedance(double x) const {
  if (x <= 0.0) return z_left_;
  if (x > x_plus_) return z_right_;
  return interior_z(x, false);
}

double MediumProfile::impedance_right(double x) const {
  if (x < 0.0) return z_left_;
  if (x >= x_plus_) return z_right_;
  return interior_z(x, true);
}

double MediumProfile::speed(double x) const {
  if (x <= 0.0) return c_left_;
  if (x > x_plus_) return c_right_;
  return interior_c(x, false);
}

double MediumProfile::speed_right(double x) const {
  if (x < 0.0) return c_left_;
  if (x >= x_plus_) return c_right_;
  return interior_c(x, true);
}

double MediumProfile::reflectivity(double x) const {
  for (const auto& d : discontinuities_) {
    if (d.x == x) {
      std::ostringstream msg;
      msg << "r(x) is undefined at the jump x = " << x;
      throw Error(ErrorCode::DiscontinuityPoint, msg.str());
    }
  }
  if (x < 0.0 || x > x_plus_ || x_plus_ == 0.0) return 0.0;
  return interior_dz(x) / (2.0 * interior_z(x, true));
}

double MediumProfile::green_coefficient(double x) const {
  return std::sqrt(impedance(x) / z_left_);
}

double MediumProfile::green_coefficient() const { return std::sqrt(z_right_ / z_left_); }

double MediumProfile::half_log_impedance(double x) const { return 0.5 * std::log(impedance(x)); }

}  // namespace pathsum
