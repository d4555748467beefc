#include "pathsum/path_series.hpp"

#include "pathsum/asymptotics.hpp"
#include "pathsum/error.hpp"
#include "pathsum/quadrature.hpp"

#include <cmath>
#include <sstream>

namespace pathsum {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// Weights of the travel-time formulation: r dx = r(X(s)) c(X(s)) ds.
struct Kernel {
  std::function<double(double)> weight;
  std::function<double(double)> antiderivative;
  std::function<double(double)> reflectivity;
  std::vector<double> breaks;
  double max_panel = inf;
};

Kernel make_kernel(const MediumProfile& profile, const TravelTimeMap& map) {
  Kernel k;
  k.weight = [&profile, &map](double s) {
    const double x = map.position(s);
    return profile.reflectivity(x) * profile.speed(x);
  };
  k.antiderivative = [&profile, &map](double s) {
    return profile.half_log_impedance(map.position(s));
  };
  k.reflectivity = [&profile, &map](double s) { return profile.reflectivity(map.position(s)); };
  if (const auto* p = std::get_if<PiecewiseLinear>(&profile.interior()))
    for (std::size_t i = 1; i + 1 < p->knots.size(); ++i)
      k.breaks.push_back(map.travel_time(p->knots[i].x));
  // One oscillation per panel, measured in the fastest travel time.
  k.max_panel = profile.feature_length() / profile.max_speed();
  return k;
}

void check_common(const MediumProfile& profile, int n, const QuadratureSpec& spec) {
  if (spec.nodes < 4) throw Error(ErrorCode::InvalidArgument, "quadrature needs G >= 4 nodes");
  if (n > spec.max_order) {
    std::ostringstream msg;
    msg << "order " << n << " exceeds the maximum " << spec.max_order;
    throw Error(ErrorCode::OrderTooDeep, msg.str());
  }
  if (!profile.is_continuous() && profile.x_plus() > 0.0)
    throw Error(ErrorCode::UnsupportedTopology,
                "series terms need a continuous impedance; use r1_piecewise for one jump");
}

struct Estimate {
  double value = 0.0;
  double error = 0.0;
  std::size_t nodes = 0;
};

// G versus G+8, refined while the difference exceeds the tolerance.
Estimate integrate_checked(const NestedProblem& problem, const QuadratureSpec& spec, double scale) {
  const int workers = spec.workers > 0 ? spec.workers : default_workers();
  int g = spec.nodes;
  NestedResult coarse = integrate_nested(problem, g, workers);
  Estimate e;
  for (int pass = 0;; ++pass) {
    const NestedResult fine = integrate_nested(problem, g + 8, workers);
    e.value = scale * fine.value;
    e.error = std::abs(scale) * std::abs(fine.value - coarse.value);
    e.nodes += coarse.evaluations + fine.evaluations;
    if (e.error <= spec.abs_tol + spec.rel_tol * std::abs(e.value)) return e;
    if (pass >= spec.refinements) break;
    coarse = fine;
    g += 8;
  }
  std::ostringstream msg;
  msg.precision(3);
  msg << "quadrature error estimate " << e.error << " above tolerance for value " << e.value
      << " with " << g + 8 << " nodes per panel";
  throw Error(ErrorCode::ToleranceNotMet, msg.str());
}

SeriesTerm evaluate(const MediumProfile& profile, const TravelTimeMap& map,
                    const InitialData& data, int n, double x, double t, const QuadratureSpec& spec,
                    TermKind kind) {
  check_common(profile, n, spec);
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "order must be >= 0");
  if (!(x >= 0.0 && x <= profile.x_plus()))
    throw Error(ErrorCode::InvalidArgument, "interior terms need x in [0, x_plus]");
  if (!(t >= 0.0)) throw Error(ErrorCode::InvalidArgument, "t must be >= 0");

  SeriesTerm term;
  term.kind = kind;
  term.order = n;
  term.x = x;
  term.t = t;
  const int m = n / 2;
  term.sign = m % 2 == 0 ? 1.0 : -1.0;
  // At a sharp interface x = 0 is also x_plus; transmitted terms take the far side.
  const double green = profile.x_plus() == 0.0 && n % 2 == 0 ? profile.green_coefficient()
                                                              : profile.green_coefficient(x);
  const double tau = map.travel_time(x);
  const double c_minus = profile.c_left();
  const bool left = n % 2 == 1;

  if (n == 0) {
    if (std::isinf(t)) {
      if (data.kind == InitialData::Kind::General)
        throw Error(ErrorCode::InvalidArgument, "general data has no long-time limit here");
      term.value = data.kind == InitialData::Kind::Step ? green : 0.0;
      return term;
    }
    switch (data.kind) {
      case InitialData::Kind::Step:
        term.value = t >= tau ? green : 0.0;
        break;
      case InitialData::Kind::Delta:
        term.impulse = green / c_minus;
        break;
      case InitialData::Kind::General:
        term.value = green * data.value(-c_minus * (t - tau));
        break;
    }
    return term;
  }

  // Sharp interface: every path crosses in zero time, so each term is its
  // long-time coefficient applied to the data leaving the origin at t.
  if (profile.x_plus() == 0.0) {
    const double coefficient = asymptotic_term(
        left ? BoundaryTerm::Reflection : BoundaryTerm::Transmission, n, profile.green_coefficient());
    switch (data.kind) {
      case InitialData::Kind::Step:
        term.value = coefficient;
        break;
      case InitialData::Kind::Delta:
        if (std::isfinite(t)) term.impulse = coefficient / c_minus;
        break;
      case InitialData::Kind::General:
        if (std::isinf(t))
          throw Error(ErrorCode::InvalidArgument, "general data has no long-time limit here");
        term.value = coefficient * data.value(-c_minus * t);
        break;
    }
    return term;
  }

  const Kernel kernel = make_kernel(profile, map);
  NestedProblem problem;
  problem.levels = n;
  problem.floor = 0.0;
  problem.ceiling = map.crossing_time();
  problem.arrival = tau;
  problem.side = left ? NestedProblem::Arrival::Left : NestedProblem::Arrival::Right;
  problem.weight = kernel.weight;
  problem.antiderivative = kernel.antiderivative;
  problem.weight_breaks = kernel.breaks;
  problem.max_panel = kernel.max_panel;
  double scale = term.sign * green;

  if (std::isinf(t)) {
    if (data.kind == InitialData::Kind::Delta) return term;
    if (data.kind == InitialData::Kind::General)
      throw Error(ErrorCode::InvalidArgument, "general data has no long-time limit here");
    if (profile.is_monotone() && (kind == TermKind::Reflection || kind == TermKind::Transmission)) {
      term.value = asymptotic_term(
          kind == TermKind::Reflection ? BoundaryTerm::Reflection : BoundaryTerm::Transmission, n,
          profile.green_coefficient());
      return term;
    }
    problem.inner = NestedProblem::Inner::Antiderivative;
    const Estimate e = integrate_checked(problem, spec, scale);
    term.value = e.value;
    term.error = e.error;
    term.nodes = e.nodes;
    return term;
  }

  problem.budget = left ? t + tau : t - tau;
  if (t < tau) return term;  // no path has reached x yet

  switch (data.kind) {
    case InitialData::Kind::Step:
      if (spec.analytic_inner) {
        problem.inner = NestedProblem::Inner::Antiderivative;
      } else {
        problem.inner = NestedProblem::Inner::Data;
        problem.data = [](double) { return 1.0; };
      }
      break;
    case InitialData::Kind::Delta:
      problem.inner = NestedProblem::Inner::BudgetEdge;
      if (spec.literal_delta) {
        problem.edge_weight = kernel.reflectivity;
      } else {
        scale /= c_minus;
      }
      break;
    case InitialData::Kind::General:
      problem.inner = NestedProblem::Inner::Data;
      problem.data = [&data, c_minus](double remaining) { return data.value(-c_minus * remaining); };
      break;
  }
  const Estimate e = integrate_checked(problem, spec, scale);
  term.value = e.value;
  term.error = e.error;
  term.nodes = e.nodes;
  return term;
}

}  // namespace

InitialData InitialData::step() {
  InitialData d;
  d.kind = Kind::Step;
  d.max_value = 1.0;
  d.max_slope = inf;
  return d;
}

InitialData InitialData::delta() {
  InitialData d;
  d.kind = Kind::Delta;
  d.max_value = inf;
  d.max_slope = inf;
  d.support_lo = 0.0;
  return d;
}

InitialData InitialData::general(std::function<double(double)> f, double max_value,
                                 double max_slope, double support_lo) {
  if (!f) throw Error(ErrorCode::InvalidArgument, "general data needs a profile");
  if (!std::isfinite(max_value) || !std::isfinite(max_slope) || max_value < 0.0 || max_slope < 0.0)
    throw Error(ErrorCode::InvalidArgument, "general data needs finite M and D");
  if (!(support_lo <= 0.0)) throw Error(ErrorCode::InvalidArgument, "support must lie in x <= 0");
  InitialData d;
  d.kind = Kind::General;
  d.profile = std::move(f);
  d.max_value = max_value;
  d.max_slope = max_slope;
  d.support_lo = support_lo;
  return d;
}

double InitialData::value(double x) const {
  switch (kind) {
    case Kind::Step:
      return x <= 0.0 ? 1.0 : 0.0;
    case Kind::Delta:
      throw Error(ErrorCode::InvalidArgument, "delta data has no pointwise value");
    case Kind::General:
      return x > 0.0 || x < support_lo ? 0.0 : profile(x);
  }
  return 0.0;
}

const char* to_string(TermKind kind) {
  switch (kind) {
    case TermKind::Reflection:
      return "R";
    case TermKind::Transmission:
      return "T";
    case TermKind::InteriorW1:
      return "w1";
    case TermKind::InteriorW2:
      return "w2";
  }
  return "?";
}

SeriesTerm term_R(const MediumProfile& profile, const TravelTimeMap& map, const InitialData& data,
                  int m, double t, const QuadratureSpec& spec) {
  if (m < 0) throw Error(ErrorCode::InvalidArgument, "m must be >= 0");
  return evaluate(profile, map, data, 2 * m + 1, 0.0, t, spec, TermKind::Reflection);
}

SeriesTerm term_T(const MediumProfile& profile, const TravelTimeMap& map, const InitialData& data,
                  int m, double t, const QuadratureSpec& spec) {
  if (m < 0) throw Error(ErrorCode::InvalidArgument, "m must be >= 0");
  return evaluate(profile, map, data, 2 * m, profile.x_plus(), t, spec, TermKind::Transmission);
}

SeriesTerm field_w1(const MediumProfile& profile, const TravelTimeMap& map,
                    const InitialData& data, int m, double x, double t, const QuadratureSpec& spec) {
  if (m < 0) throw Error(ErrorCode::InvalidArgument, "m must be >= 0");
  return evaluate(profile, map, data, 2 * m + 1, x, t, spec, TermKind::InteriorW1);
}

SeriesTerm field_w2(const MediumProfile& profile, const TravelTimeMap& map,
                    const InitialData& data, int m, double x, double t, const QuadratureSpec& spec) {
  if (m < 0) throw Error(ErrorCode::InvalidArgument, "m must be >= 0");
  return evaluate(profile, map, data, 2 * m, x, t, spec, TermKind::InteriorW2);
}

PartialSum partial_sum(const MediumProfile& profile, const TravelTimeMap& map,
                       const InitialData& data, int order, double x, double t,
                       const QuadratureSpec& spec) {
  if (order < 0) throw Error(ErrorCode::InvalidArgument, "order must be >= 0");
  const int m_max = order / 2;
  check_common(profile, 2 * m_max + 1, spec);

  PartialSum out;
  const double x_plus = profile.x_plus();
  double t_left = t;   // time at which w1(0, .) reaches x
  double t_right = t;  // time at which w2(x_plus, .) reaches x
  double at = x;
  if (x < 0.0) {
    t_left = t + x / profile.c_left();
    at = 0.0;
    if (data.kind != InitialData::Kind::Delta) out.w2 = data.value(x - profile.c_left() * t);
  } else if (x > x_plus) {
    t_right = t - (x - x_plus) / profile.c_right();
    at = x_plus;
  }

  // A sharp interface has no interior, and x = 0 belongs to the right side.
  const bool has_w1 = x_plus > 0.0 ? x <= x_plus : x < 0.0;
  for (int m = 0; m <= m_max; ++m) {
    if (has_w1 && t_left >= 0.0) {
      SeriesTerm w = evaluate(profile, map, data, 2 * m + 1, at, t_left, spec,
                              x <= 0.0 ? TermKind::Reflection : TermKind::InteriorW1);
      out.w1 += w.value;
      out.terms.push_back(w);
    }
    if (x >= 0.0 && t_right >= 0.0) {
      SeriesTerm w = evaluate(profile, map, data, 2 * m, at, t_right, spec,
                              x >= x_plus ? TermKind::Transmission : TermKind::InteriorW2);
      out.w2 += w.value;
      out.terms.push_back(w);
    }
  }
  out.value = out.w1 + out.w2;

  // Step-data alternating-series bounds at the boundaries.
  if (data.kind == InitialData::Kind::Step && std::isfinite(t)) {
    const double green = profile.green_coefficient();
    try {
      if (x <= 0.0 && has_w1 && t_left >= 0.0) {
        const SeriesTerm r1 = evaluate(profile, map, data, 1, 0.0, t_left, spec, TermKind::Reflection);
        const auto b = tail_bound_strong(BoundaryTerm::Reflection, m_max + 1, green,
                                         std::abs(r1.value), profile.is_monotone());
        out.strong_tail_R = b.bound;
        out.strong_contracting = b.contracting;
      }
      if (x >= x_plus && t_right >= 0.0) {
        const double t0 = t_right >= map.crossing_time() ? green : 0.0;
        const auto b = tail_bound_strong(BoundaryTerm::Transmission, m_max + 1, green, t0,
                                         profile.is_monotone());
        out.strong_tail_T = b.bound;
        out.strong_contracting = b.contracting;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::HypothesisViolated) throw;
    }
  }

  if (std::isfinite(data.max_value) && std::isfinite(t) && x_plus > 0.0) {
    BoundInputs in;
    in.max_speed = profile.max_speed();
    in.max_reflectivity = profile.max_reflectivity();
    in.max_value = data.max_value;
    in.max_slope = data.max_slope;
    const double green_at = profile.green_coefficient(at);
    if (has_w1 && t_left >= 0.0)
      out.uniform_tail_w1 = tail_bound_uniform(in, m_max, at, t_left, map, green_at).first;
    if (x >= 0.0 && t_right >= 0.0)
      out.uniform_tail_w2 = tail_bound_uniform(in, m_max, at, t_right, map, green_at).second;
  }
  return out;
}

double r1_piecewise(const MediumProfile& profile, const TravelTimeMap& map, double t,
                    const QuadratureSpec& spec) {
  const auto& jumps = profile.discontinuities();
  if (jumps.size() != 1 || !(jumps[0].x > 0.0 && jumps[0].x < profile.x_plus()))
    throw Error(ErrorCode::UnsupportedTopology, "r1_piecewise needs exactly one interior jump");
  if (!(t >= 0.0)) throw Error(ErrorCode::InvalidArgument, "t must be >= 0");
  const Discontinuity& d = jumps[0];
  const double s_jump = map.travel_time(d.x);
  const Kernel kernel = make_kernel(profile, map);

  // Once-reflected paths turning at s in [lo, hi] with 2 s <= t.
  auto segment = [&](double lo, double hi) {
    NestedProblem p;
    p.levels = 1;
    p.floor = lo;
    p.ceiling = hi;
    p.budget = std::isinf(t) ? inf : t;
    p.arrival = lo;
    p.side = NestedProblem::Arrival::Left;
    p.weight = kernel.weight;
    p.weight_breaks = kernel.breaks;
    p.max_panel = kernel.max_panel;
    p.inner = NestedProblem::Inner::Data;
    p.data = [](double) { return 1.0; };
    return integrate_checked(p, spec, 1.0).value;
  };

  const auto forward = interface_coefficients(d.z_left, d.z_right);
  const auto backward = interface_coefficients(d.z_right, d.z_left);
  double value = segment(0.0, s_jump);
  if (t >= 2.0 * s_jump) {
    value += forward.reflection;
    value += forward.transmission * backward.transmission * segment(s_jump, map.crossing_time());
  }
  return value;
}

}  // namespace pathsum
