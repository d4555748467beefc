#pragma once

#include "pathsum/characteristics.hpp"
#include "pathsum/medium.hpp"

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace pathsum {

/// Right-going initial pressure p0(x), supported in x <= 0.
struct InitialData {
  enum class Kind { Step, Delta, General };

  Kind kind = Kind::Step;
  std::function<double(double)> profile;  // General only
  double support_lo = -std::numeric_limits<double>::infinity();
  double max_value = 1.0;  // M
  double max_slope = 0.0;  // D; infinite for the step

  static InitialData step();
  static InitialData delta();
  /// `f` must vanish outside [support_lo, 0].
  static InitialData general(std::function<double(double)> f, double max_value, double max_slope,
                             double support_lo);

  /// p0(x); throws InvalidArgument for Delta.
  double value(double x) const;
};

enum class TermKind { Reflection, Transmission, InteriorW1, InteriorW2 };

const char* to_string(TermKind kind);

struct SeriesTerm {
  TermKind kind = TermKind::Transmission;
  int order = 0;  // reflection count n
  double x = 0.0;
  double t = 0.0;
  double value = 0.0;
  double sign = 1.0;  // (-1)^m
  double error = 0.0;
  std::size_t nodes = 0;
  /// Weight of a Dirac impulse at t = tau(x) carried by the n = 0 Delta term.
  double impulse = 0.0;
};

struct QuadratureSpec {
  int nodes = 24;  // Gauss-Legendre points per panel, G >= 4
  double rel_tol = 1e-6;
  double abs_tol = 1e-9;
  int max_order = 9;
  int refinements = 0;  // extra passes, each adding 8 nodes, before ToleranceNotMet
  bool analytic_inner = true;  // Step data: integrate the last level exactly
  bool literal_delta = false;  // Delta data: r(x_hat) in place of the time derivative
  int workers = 0;             // 0 reads PATHSUM_WORKERS
};

/// Reflected term R_n(t), n = 2m + 1, observed at x = 0.
SeriesTerm term_R(const MediumProfile& profile, const TravelTimeMap& map, const InitialData& data,
                  int m, double t, const QuadratureSpec& spec);
/// Transmitted term T_n(t), n = 2m, observed at x = x_plus.
SeriesTerm term_T(const MediumProfile& profile, const TravelTimeMap& map, const InitialData& data,
                  int m, double t, const QuadratureSpec& spec);
/// Left-going interior term w1_{2m+1}(x, t).
SeriesTerm field_w1(const MediumProfile& profile, const TravelTimeMap& map,
                    const InitialData& data, int m, double x, double t, const QuadratureSpec& spec);
/// Right-going interior term w2_{2m}(x, t).
SeriesTerm field_w2(const MediumProfile& profile, const TravelTimeMap& map,
                    const InitialData& data, int m, double x, double t, const QuadratureSpec& spec);

struct PartialSum {
  double value = 0.0;  // pressure
  double w1 = 0.0;     // left-going part
  double w2 = 0.0;     // right-going part, including the incident wave for x < 0
  std::vector<SeriesTerm> terms;
  /// Alternating-series bounds on the omitted R and T terms (monotone media only).
  std::optional<double> strong_tail_R;
  std::optional<double> strong_tail_T;
  bool strong_contracting = false;
  /// Taylor-remainder bounds on the omitted w1 and w2 terms (interior points).
  std::optional<double> uniform_tail_w1;
  std::optional<double> uniform_tail_w2;
};

/**
 * Pressure at (x, t) from the terms T_{2m} and R_{2m+1} with 2m <= order.
 * Outside [0, x_plus] the boundary series are transported along the
 * exterior characteristics.
 */
PartialSum partial_sum(const MediumProfile& profile, const TravelTimeMap& map,
                       const InitialData& data, int order, double x, double t,
                       const QuadratureSpec& spec);

/**
 * Once-reflected response to step data for a medium with one interior jump:
 * the continuous part plus C_R of the jump once its echo has returned.
 */
double r1_piecewise(const MediumProfile& profile, const TravelTimeMap& map, double t,
                    const QuadratureSpec& spec = {});

}  // namespace pathsum
