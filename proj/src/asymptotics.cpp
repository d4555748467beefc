#include "pathsum/asymptotics.hpp"

#include "pathsum/error.hpp"

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace pathsum {

namespace {

Rational factorial(int n) {
  BigInt f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return Rational(f);
}

const ZigzagTable& cached_table() {
  static const ZigzagTable table = zigzag(64);
  return table;
}

// y^k / k! without overflow.
double power_over_factorial(double y, int k) {
  if (k == 0) return 1.0;
  if (y == 0.0) return 0.0;
  return std::exp(k * std::log(y) - std::lgamma(k + 1.0));
}

}  // namespace

double ZigzagTable::coefficient(int n) const {
  if (n < 0 || n > n_max()) throw Error(ErrorCode::InvalidArgument, "zigzag index out of range");
  return static_cast<double>(coefficients[n]);
}

ZigzagTable zigzag(int n_max) {
  if (n_max < 0) throw Error(ErrorCode::InvalidArgument, "n_max must be >= 0");
  std::vector<Rational> fact;
  for (int k = 0; k <= n_max + 1; ++k) fact.push_back(factorial(k));
  ZigzagTable table;
  auto& a = table.coefficients;
  a.assign(n_max + 1, Rational(0));
  a[0] = 1;
  if (n_max >= 1) a[1] = 1;
  for (int n = 2; n <= n_max; ++n) {
    const int m = n / 2;
    Rational sum = 0;
    if (n % 2 == 0) {
      for (int j = 1; j <= m; ++j) {
        const Rational term = a[2 * (m - j)] / fact[2 * j];
        sum += j % 2 == 1 ? term : Rational(-term);
      }
    } else {
      for (int j = 1; j <= m + 1; ++j) {
        const Rational term = a[2 * (m - j + 1)] / fact[2 * j - 1];
        sum += j % 2 == 1 ? term : Rational(-term);
      }
    }
    a[n] = sum;
  }
  for (int n = 0; n <= n_max; ++n) {
    const Rational count = a[n] * fact[n];
    if (denominator(count) != 1)
      throw Error(ErrorCode::ComputeError, "zigzag recursion produced a non-integer count");
    table.counts.push_back(numerator(count));
  }
  return table;
}

std::uint64_t alternating_count_bruteforce(int n) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "n must be >= 0");
  if (n > 12) throw Error(ErrorCode::TooLarge, "brute-force enumeration is limited to n <= 12");
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 1);
  std::uint64_t count = 0;
  do {
    bool ok = true;
    for (int j = 1; j < n && ok; ++j) ok = j % 2 == 1 ? perm[j] < perm[j - 1] : perm[j] > perm[j - 1];
    if (ok) ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

double simplex_volume(int n, double alpha, double beta) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "n must be >= 0");
  if (!(beta >= alpha)) throw Error(ErrorCode::InvalidArgument, "simplex volume needs beta >= alpha");
  return cached_table().coefficient(n) * std::pow(beta - alpha, n);
}

double asymptotic_term(BoundaryTerm kind, int n, double green) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "n must be >= 0");
  if (!(green > 0.0)) throw Error(ErrorCode::InvalidArgument, "C_G must be > 0");
  const bool even = n % 2 == 0;
  if ((kind == BoundaryTerm::Transmission) != even) {
    std::ostringstream msg;
    msg << (kind == BoundaryTerm::Transmission ? "transmitted" : "reflected")
        << " terms need " << (even ? "odd" : "even") << " n (got " << n << ")";
    throw Error(ErrorCode::ParityMismatch, msg.str());
  }
  const int m = n / 2;
  const double sign = m % 2 == 0 ? 1.0 : -1.0;
  const double base = sign * cached_table().coefficient(n) * std::pow(std::log(green), n);
  return kind == BoundaryTerm::Transmission ? green * base : base;
}

InterfaceCoefficients closed_form_coefficients(double green) {
  if (!(green > 0.0)) throw Error(ErrorCode::InvalidArgument, "C_G must be > 0");
  const double y = std::log(green);
  return {green / std::cosh(y), std::tanh(y)};
}

double andre_partial_sum(double z, int n) {
  if (!(std::abs(z) < boost::math::constants::half_pi<double>()))
    throw Error(ErrorCode::OutOfDisk, "the secant-tangent series needs |z| < pi/2");
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "N must be >= 0");
  const ZigzagTable& table = n <= cached_table().n_max() ? cached_table() : zigzag(n);
  double sum = 0.0;
  double power = 1.0;
  for (int k = 0; k <= n; ++k) {
    sum += table.coefficient(k) * power;
    power *= z;
  }
  return sum;
}

StrongTailBound tail_bound_strong(BoundaryTerm, int n, double green, double leading_abs,
                                  bool monotone) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "N must be >= 0");
  if (!monotone) throw Error(ErrorCode::HypothesisViolated, "impedance is not monotone");
  const double log_ratio = 2.0 * std::log(green);
  const double limit = 2.0 * std::sqrt(2.0);
  if (!(std::abs(log_ratio) < limit)) {
    std::ostringstream msg;
    msg << "|log(Z_+/Z_-)| = " << std::abs(log_ratio) << " is not below 2 sqrt(2)";
    throw Error(ErrorCode::HypothesisViolated, msg.str());
  }
  StrongTailBound b;
  b.ratio = 0.5 * green * green;
  b.contracting = b.ratio < 1.0;
  b.bound = std::pow(b.ratio, n) * leading_abs;
  return b;
}

std::pair<double, double> tail_bound_uniform(const BoundInputs& in, int n, double x, double t,
                                             const TravelTimeMap& map, double green_at_x) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "N must be >= 0");
  const double rate = in.max_reflectivity * in.max_speed;
  const double tau = map.travel_time(x);
  const int k = 2 * n + 2;
  const double t1 = t + tau;
  const double t2 = std::max(t - tau, 0.0);
  // The remainder's intermediate point is unknown; its worst case is the
  // far end of the Taylor interval.
  const double star1 = in.t_star >= 0.0 ? in.t_star : t1;
  const double star2 = in.t_star >= 0.0 ? in.t_star : t;
  const double scale = in.max_value * green_at_x;
  return {scale * power_over_factorial(rate * t1, k) * std::sinh(rate * star1),
          scale * power_over_factorial(rate * t2, k) * std::cosh(rate * star2)};
}

double volume_bound(int n, double t, double max_speed) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "n must be >= 0");
  if (t <= 0.0) return n == 0 ? 1.0 : 0.0;
  return power_over_factorial(max_speed * t, n);
}

}  // namespace pathsum
