#pragma once

#include "pathsum/characteristics.hpp"
#include "pathsum/medium.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <utility>
#include <vector>

namespace pathsum {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Zigzag numbers A_n and a_n = A_n / n!, exact.
struct ZigzagTable {
  std::vector<BigInt> counts;          // A_0..A_nmax
  std::vector<Rational> coefficients;  // a_0..a_nmax

  int n_max() const { return static_cast<int>(counts.size()) - 1; }
  double coefficient(int n) const;
};

/// a_n from the secant/tangent recursion; A_n = a_n n!.
ZigzagTable zigzag(int n_max);

/// Number of down-up permutations s_1 > s_2 < s_3 > ... of length n (n <= 12).
std::uint64_t alternating_count_bruteforce(int n);

/// Volume of the alternating region of [alpha, beta]^n: a_n (beta - alpha)^n.
double simplex_volume(int n, double alpha, double beta);

enum class BoundaryTerm { Transmission, Reflection };

/// Long-time limit of T_n (n even) or R_n (n odd) for step data and monotone Z.
double asymptotic_term(BoundaryTerm kind, int n, double green);

/// (C_T, C_R) from C_G alone: C_G sech(log C_G) and tanh(log C_G).
InterfaceCoefficients closed_form_coefficients(double green);

/// sum_{n <= N} a_n z^n, which tends to sec z + tan z for |z| < pi/2.
double andre_partial_sum(double z, int n);

struct StrongTailBound {
  double bound = 0.0;
  double ratio = 0.0;  // C_G^2 / 2
  bool contracting = false;
};

/**
 * (C_G^2 / 2)^N * leading for monotone Z with |log(Z_+/Z_-)| < 2 sqrt(2).
 * Throws HypothesisViolated otherwise.
 */
StrongTailBound tail_bound_strong(BoundaryTerm kind, int n, double green, double leading_abs,
                                  bool monotone);

struct BoundInputs {
  double max_speed = 1.0;         // C
  double max_reflectivity = 0.0;  // zeta
  double max_value = 1.0;         // M
  double max_slope = 0.0;         // D
  double t_star = -1.0;           // negative selects the worst case
};

/// Taylor-remainder bounds on the w1 and w2 tails beyond m = N.
std::pair<double, double> tail_bound_uniform(const BoundInputs& inputs, int n, double x, double t,
                                             const TravelTimeMap& map, double green_at_x);

/// (C t)^n / n!.
double volume_bound(int n, double t, double max_speed);

}  // namespace pathsum
