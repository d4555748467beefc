#include "pathsum/fv_oracle.hpp"

#include "pathsum/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace pathsum {

namespace {

double phi(Limiter limiter, double theta) {
  switch (limiter) {
    case Limiter::None:
      return 0.0;
    case Limiter::Minmod:
      return std::max(0.0, std::min(1.0, theta));
    case Limiter::MC:
      return std::max(0.0, std::min({0.5 * (1.0 + theta), 2.0, 2.0 * theta}));
    case Limiter::Superbee:
      return std::max({0.0, std::min(1.0, 2.0 * theta), std::min(2.0, theta)});
  }
  return 0.0;
}

using StepHook = std::function<void(double t, const std::vector<double>& p,
                                    const std::vector<double>& u)>;

void check_cfl(double cfl) {
  if (!(cfl > 0.0 && cfl <= 1.0)) {
    std::ostringstream msg;
    msg << "CFL number " << cfl << " outside (0, 1]";
    throw Error(ErrorCode::CFLViolation, msg.str());
  }
}

int march(std::vector<double>& p, std::vector<double>& u, const std::vector<double>& z,
          const std::vector<double>& c, double dx, double t_final, double cfl, Limiter limiter,
          const StepHook& hook, double* dt_out) {
  check_cfl(cfl);
  const std::size_t n = p.size();
  if (u.size() != n || z.size() != n || c.size() != n || n < 2)
    throw Error(ErrorCode::InvalidArgument, "cell arrays must have equal length >= 2");
  const double c_max = *std::max_element(c.begin(), c.end());
  const int steps = t_final > 0.0 ? static_cast<int>(std::ceil(t_final / (cfl * dx / c_max))) : 0;
  const double dt = steps > 0 ? t_final / steps : 0.0;
  const double lambda = dt / dx;
  if (dt_out) *dt_out = dt;

  // a1[j], a2[j]: wave strengths at the interface between cells j-1 and j.
  std::vector<double> a1(n + 1, 0.0);
  std::vector<double> a2(n + 1, 0.0);
  std::vector<double> fp(n + 1, 0.0);
  std::vector<double> fu(n + 1, 0.0);
  if (hook) hook(0.0, p, u);
  for (int step = 1; step <= steps; ++step) {
    for (std::size_t j = 1; j < n; ++j) {
      const double dp = p[j] - p[j - 1];
      const double du = u[j] - u[j - 1];
      const double zl = z[j - 1];
      const double zr = z[j];
      const double sum = zl + zr;
      a1[j] = (-dp + zr * du) / sum;
      a2[j] = (dp + zl * du) / sum;
    }
    if (limiter != Limiter::None) {
      for (std::size_t j = 1; j < n; ++j) {
        // Left-going wave: vector a1 (-z_{j-1}, 1), upwind interface j+1.
        const double zl = z[j - 1];
        const double s1 = c[j - 1];
        double l1 = 0.0;
        if (a1[j] != 0.0) {
          const double up = j + 1 < n ? a1[j + 1] : 0.0;
          const double zu = z[j];
          const double theta = up * (zu * zl + 1.0) / (a1[j] * (zl * zl + 1.0));
          l1 = phi(limiter, theta) * a1[j];
        }
        // Right-going wave: vector a2 (z_j, 1), upwind interface j-1.
        const double zr = z[j];
        const double s2 = c[j];
        double l2 = 0.0;
        if (a2[j] != 0.0) {
          const double up = j > 1 ? a2[j - 1] : 0.0;
          const double zu = z[j - 1];
          const double theta = up * (zu * zr + 1.0) / (a2[j] * (zr * zr + 1.0));
          l2 = phi(limiter, theta) * a2[j];
        }
        const double k1 = 0.5 * s1 * (1.0 - lambda * s1) * l1;
        const double k2 = 0.5 * s2 * (1.0 - lambda * s2) * l2;
        fp[j] = -k1 * zl + k2 * zr;
        fu[j] = k1 + k2;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double right = a2[i];     // arriving from the left interface
      const double left = a1[i + 1];  // arriving from the right interface
      const double k = lambda * c[i];
      p[i] -= k * z[i] * (right + left);
      u[i] -= k * (right - left);
      if (limiter != Limiter::None) {
        p[i] -= lambda * (fp[i + 1] - fp[i]);
        u[i] -= lambda * (fu[i + 1] - fu[i]);
      }
    }
    if (hook) hook(step * dt, p, u);
  }
  return steps;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

Grid1D default_grid(const MediumProfile& profile, double t_final, int cells, int min_interior) {
  if (cells < 10) throw Error(ErrorCode::InvalidArgument, "grid needs >= 10 cells");
  const double x_plus = profile.x_plus();
  const double left_reach = profile.c_left() * t_final;
  const double right_reach = profile.c_right() * t_final;
  const double margin = 0.02 * (left_reach + x_plus + right_reach) + 1e-3;
  const double width = left_reach + x_plus + right_reach + 2.0 * margin;
  double dx = width / cells;
  int interior = 0;
  if (x_plus > 0.0) {
    interior = std::max(min_interior, static_cast<int>(std::lround(x_plus / dx)));
    dx = x_plus / interior;
  }
  const int nl = static_cast<int>(std::ceil((left_reach + margin) / dx));
  const int nr = static_cast<int>(std::ceil((right_reach + margin) / dx));
  Grid1D g;
  g.x_lo = -nl * dx;
  g.x_hi = x_plus + nr * dx;
  g.cells = nl + interior + nr;
  return g;
}

void solve_cells(std::vector<double>& p, std::vector<double>& u, const std::vector<double>& z,
                 const std::vector<double>& c, double dx, double t_final, double cfl,
                 Limiter limiter) {
  march(p, u, z, c, dx, t_final, cfl, limiter, nullptr, nullptr);
}

FvResult solve(const MediumProfile& profile, const InitialData& data, double t_final,
               const Grid1D& grid, const FvOptions& options) {
  check_cfl(grid.cfl);
  if (!(t_final >= 0.0)) throw Error(ErrorCode::InvalidArgument, "t_final must be >= 0");
  const int n = grid.cells;
  const double dx = grid.dx();
  FvResult result;
  WaveField& f = result.field;
  f.x.resize(n);
  f.p.resize(n);
  f.u.resize(n);
  f.z.resize(n);
  std::vector<double> c(n);

  double sigma = 0.0;
  if (data.kind == InitialData::Kind::Delta) {
    if (options.delta_width_cells < 4.0) {
      std::ostringstream msg;
      msg << "delta width of " << options.delta_width_cells << " cells is below 4";
      throw Error(ErrorCode::UnresolvedDelta, msg.str());
    }
    sigma = options.delta_width_cells * dx;
    result.delta_center = -6.0 * sigma;
  }
  const double mu = result.delta_center;
  for (int i = 0; i < n; ++i) {
    const double a = grid.x_lo + i * dx;
    const double b = a + dx;
    const double x = 0.5 * (a + b);
    f.x[i] = x;
    f.z[i] = profile.impedance(x);
    c[i] = profile.speed(x);
    double avg = 0.0;
    switch (data.kind) {
      case InitialData::Kind::Step:
        avg = b <= 0.0 ? 1.0 : (a >= 0.0 ? 0.0 : -a / dx);
        break;
      case InitialData::Kind::Delta:
        avg = (normal_cdf((b - mu) / sigma) - normal_cdf((a - mu) / sigma)) / dx;
        break;
      case InitialData::Kind::General: {
        // 4-point Gauss average over the cell
        static const double gx[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                     0.8611363115940526};
        static const double gw[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                     0.3478548451374538};
        for (int k = 0; k < 4; ++k) avg += 0.5 * gw[k] * data.value(x + 0.5 * dx * gx[k]);
        break;
      }
    }
    f.p[i] = avg;
    f.u[i] = avg / f.z[i];
  }

  for (double x : options.probes) {
    ProbeSeries s;
    s.x = x;
    result.probes.push_back(s);
  }
  StepHook hook;
  if (!result.probes.empty()) {
    hook = [&](double t, const std::vector<double>& p, const std::vector<double>& u) {
      for (auto& s : result.probes) {
        const double pos = (s.x - grid.x_lo) / dx - 0.5;
        const int i = std::clamp(static_cast<int>(std::floor(pos)), 0, n - 2);
        const double w = std::clamp(pos - i, 0.0, 1.0);
        auto field = [&](int k, double sign) { return 0.5 * (p[k] + sign * f.z[k] * u[k]); };
        s.t.push_back(t);
        s.p.push_back((1.0 - w) * p[i] + w * p[i + 1]);
        s.w1.push_back((1.0 - w) * field(i, -1.0) + w * field(i + 1, -1.0));
        s.w2.push_back((1.0 - w) * field(i, 1.0) + w * field(i + 1, 1.0));
      }
    };
  }
  result.steps = march(f.p, f.u, f.z, c, dx, t_final, grid.cfl, options.limiter, hook, &result.dt);
  f.t = t_final;
  return result;
}

ConvergenceReport self_convergence(const MediumProfile& profile, const InitialData& data,
                                   double t_final, int levels, int base_cells, Limiter limiter) {
  if (levels < 3) throw Error(ErrorCode::InvalidArgument, "self-convergence needs >= 3 levels");
  const Grid1D base = default_grid(profile, t_final, base_cells, 1);
  FvOptions options;
  options.limiter = limiter;
  std::vector<std::vector<double>> solutions;
  ConvergenceReport report;
  for (int level = 0; level < levels; ++level) {
    Grid1D g = base;
    g.cells = base.cells << level;
    // Each level's delta must resolve on its own grid; widen in cells as it refines.
    options.delta_width_cells = 4.0 * (1 << level);
    report.cells.push_back(g.cells);
    solutions.push_back(solve(profile, data, t_final, g, options).field.p);
  }
  // Compare each level with the next, averaged back onto the coarser cells.
  for (int level = 0; level + 1 < levels; ++level) {
    const auto& coarse = solutions[level];
    const auto& fine = solutions[level + 1];
    const double dx = base.dx() / (1 << level);
    double sum = 0.0;
    for (std::size_t i = 0; i < coarse.size(); ++i)
      sum += std::abs(coarse[i] - 0.5 * (fine[2 * i] + fine[2 * i + 1])) * dx;
    report.differences.push_back(sum);
  }
  const double last = report.differences.back();
  const double prev = report.differences[report.differences.size() - 2];
  report.all_zero = std::all_of(report.differences.begin(), report.differences.end(),
                                [](double d) { return d == 0.0; });
  report.order = last > 0.0 && prev > 0.0 ? std::log2(prev / last) : 0.0;
  return report;
}

}  // namespace pathsum
