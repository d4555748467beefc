#pragma once

#include "pathsum/medium.hpp"
#include "pathsum/path_series.hpp"

#include <vector>

namespace pathsum {

/**
 * Uniform cell grid on [x_lo, x_hi]. Cell edges fall on 0 and x_plus so
 * that the variable region is covered by whole cells.
 */
struct Grid1D {
  double x_lo = -1.0;
  double x_hi = 1.0;
  int cells = 8000;
  double cfl = 0.9;

  double dx() const { return (x_hi - x_lo) / cells; }
  double center(int i) const { return x_lo + (i + 0.5) * dx(); }
};

/// Grid covering everything the solution reaches by t_final, about `cells` wide,
/// with at least `min_interior` cells across [0, x_plus].
Grid1D default_grid(const MediumProfile& profile, double t_final, int cells = 8000,
                    int min_interior = 200);

enum class Limiter { None, Minmod, MC, Superbee };

struct FvOptions {
  Limiter limiter = Limiter::None;  // None is first-order upwind
  double delta_width_cells = 4.0;   // standard deviation of the Gaussian stand-in for a delta
  std::vector<double> probes;       // positions sampled after every step
};

struct WaveField {
  double t = 0.0;
  std::vector<double> x;
  std::vector<double> p;
  std::vector<double> u;
  std::vector<double> z;
};

/// Time series at one position, with the local characteristic fields
/// w1 = (p - Z u) / 2 (left-going) and w2 = (p + Z u) / 2.
struct ProbeSeries {
  double x = 0.0;
  std::vector<double> t;
  std::vector<double> p;
  std::vector<double> w1;
  std::vector<double> w2;
};

struct FvResult {
  WaveField field;
  std::vector<ProbeSeries> probes;
  int steps = 0;
  double dt = 0.0;
  /// Delta data only: the Gaussian is centred here (< 0) to keep it in x < 0.
  double delta_center = 0.0;
};

/**
 * Godunov (wave-propagation) solution of p_t + K u_x = 0, rho u_t + p_x = 0
 * from right-going data p = p0, u = p0 / Z. Interface waves come from the
 * exact Riemann solution between neighbouring materials; boundaries
 * extrapolate.
 */
FvResult solve(const MediumProfile& profile, const InitialData& data, double t_final,
               const Grid1D& grid, const FvOptions& options = {});

/// The same update on raw cell arrays with extrapolating ends.
void solve_cells(std::vector<double>& p, std::vector<double>& u, const std::vector<double>& z,
                 const std::vector<double>& c, double dx, double t_final, double cfl,
                 Limiter limiter = Limiter::None);

struct ConvergenceReport {
  std::vector<int> cells;
  std::vector<double> differences;  // L1 distance between successive levels
  double order = 0.0;               // log2 of the last difference ratio
  bool all_zero = false;
};

/// Observed order from `levels` >= 3 grids, each twice as fine as the last.
ConvergenceReport self_convergence(const MediumProfile& profile, const InitialData& data,
                                   double t_final, int levels, int base_cells = 500,
                                   Limiter limiter = Limiter::None);

}  // namespace pathsum
