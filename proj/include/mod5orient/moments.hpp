#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "mod5orient/exact.hpp"

namespace mod5 {

// Number of perfect matchings on m labelled points: m! / ((m/2)! 2^(m/2)).
BigInt matchings(std::int64_t m_points);

// Expected number of valid point-level orientations of a random d-regular
// pairing on n vertices, exact:
//   C(n, n/2) * C(d, p)^n * (dn/2)! / matchings(dn),   d = 4p + 1.
Rational exact_first_moment(std::int64_t n, int d = 9);

// n-independent leading constant is 3: E[Y] ~ 3 * (81/8)^(n/2) for d = 9.
double asymptotic_first_moment(std::int64_t n);

// Lattice point of the two-orientation configuration count. k counts vertices
// that take the low in-degree under both orientations; k_xyz splits each of
// the four agreement classes by how many of the two special points coincide.
struct ConfigVector {
  std::int64_t n = 0;
  std::int64_t k = 0;
  std::int64_t k211 = 0, k111 = 0;
  std::int64_t k210 = 0, k110 = 0;
  std::int64_t k201 = 0, k101 = 0;
  std::int64_t k200 = 0, k100 = 0;

  std::int64_t k011() const { return k - k211 - k111; }
  std::int64_t k000() const { return k - k200 - k100; }
  std::int64_t k010() const { return n / 2 - k - k210 - k110; }
  std::int64_t k001() const { return n / 2 - k - k201 - k101; }

  // Points that are heads under both orientations; they pair with the
  // tail/tail points, of which there are equally many.
  std::int64_t in_in_points() const {
    return 2 * k211 + 2 * k200 + k111 - k110 - k101 + k100 + 2 * n + k - 2 * k210 - 2 * k201;
  }
  // Head under the first orientation, tail under the second. Head/tail points
  // split the 9n points evenly, so this is 9n/2 - in_in_points.
  std::int64_t in_out_points() const { return 9 * n / 2 - in_in_points(); }

  bool valid() const;
};

// Exact number of pairing configurations carrying this lattice point:
// multinomial over the twelve vertex groups, times the special-point choices,
// times the two pairing factorials.
BigInt config_weight(const ConfigVector& c);

// Visits every lattice point of the configuration region for even n.
void for_each_config(std::int64_t n, const std::function<void(const ConfigVector&)>& fn);

// Exact configuration-lattice sum divided by matchings(9n). Equals the second
// moment E[Y^2] of the point-level orientation count (the n = 2 enumeration
// oracle in the tests pins down that the diagonal pairs are included).
Rational exact_second_moment(std::int64_t n, std::int64_t max_n = 12);

// Limiting cycle-count moments: lambda_k = 8^k / 2k is the Poisson mean of the
// number of k-cycles, mu_k the conditional mean given a valid orientation,
// delta_k = mu_k/lambda_k - 1 = (-2/9)^k.
Rational lambda_k(int k);
Rational mu_k(int k);
Rational delta_k(int k);

// Partial sum of lambda_k * delta_k^2 = (32/81)^k / 2k; the full series sums
// to log(9/7). Tail after kmax is below (32/81)^(kmax+1).
double sum_lambda_delta_sq(int kmax);

// Exact finite-n joint-moment ratio E[Y X_k] / E[Y] via the triple count
// (pairing, k-cycle, orientation); tends to mu_k as n grows.
Rational finite_n_joint_moment_ratio(std::int64_t n, int k);

struct MomentReport {
  std::int64_t n = 0;
  Rational exact_EY;
  double asymptotic_EY = 0;
  bool has_second = false;
  Rational exact_EY2;
  double ratio = 0;  // exact_EY2 / exact_EY^2
};

MomentReport moment_report(std::int64_t n, bool with_second = true, std::int64_t second_max_n = 12);
std::string to_json(const MomentReport& report);

}  // namespace mod5
