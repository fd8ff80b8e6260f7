#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mod5orient/exact.hpp"
#include "mod5orient/rng.hpp"

namespace mod5 {

using Vec9 = Eigen::Matrix<double, 9, 1>;
using Mat9 = Eigen::Matrix<double, 9, 9>;
using RVec9 = std::array<Rational, 9>;
using RMat9 = std::array<std::array<Rational, 9>, 9>;

// Scaled configuration coordinates, in the order
//   (z, z211, z111, z210, z110, z201, z101, z200, z100).
// The closure constraints are z in [0,1/2], z211+z111 <= z, z200+z100 <= z,
// z210+z110 <= 1/2-z, z201+z101 <= 1/2-z, all coordinates >= 0.
struct LandscapePoint {
  Vec9 z = Vec9::Zero();

  static LandscapePoint from(const std::array<double, 9>& coords);

  bool in_closure(double tol = 1e-12) const;
  // All twelve group coordinates at least `margin`.
  bool strictly_interior(double margin = 0.0) const;

  // The twelve vertex-group fractions induced by the nine coordinates; they
  // are non-negative and sum to 1 on the closure.
  std::array<double, 12> groups() const;
};

// Density of head/head points: an affine form with values in [0, 9/2] on the
// closure; 9/4 at the critical point.
double b_of(const LandscapePoint& p);
Rational b_of(const RVec9& p);

// Exponential rate of the configuration count, continuous up to the boundary
// via x log x -> 0. Throws if the point leaves the closure.
double f_of(const LandscapePoint& p);

// log(81/8), the value of f at the critical point.
double f_max();

// Gradient of f; every component is the log of a product/ratio of the group
// coordinates and of b, so the point must be strictly interior.
Vec9 grad_f(const LandscapePoint& p);

// Polynomial-order prefactor of the configuration count:
//   sqrt(b (9/2 - b)) / ( sqrt(2) (2 pi n)^(9/2) sqrt(prod of the 12 groups) ).
// g * (pi n)^(9/2) does not depend on n.
double g_of(const LandscapePoint& p, double n);

// Stationary-curve parameterization: given b, this value of z211 = z200 makes
// the whole gradient vanish along the reconstructed point. Rational in b.
double c2_star(double b);
Rational c2_star(const Rational& b);

// Upper bound on c2 for the reconstructed point to stay inside the region.
double c2_feasible_upper_bound(double b);

// Point on the stationary curve for parameters (b, c2).
LandscapePoint parameterized_point(double b, double c2);

struct CriticalRoot {
  double b = 0;
  double c2 = 0;
  bool feasible = false;
};

struct CriticalPointReport {
  std::vector<CriticalRoot> roots;  // all roots of the stationarity residual in (0, 9/2)
  LandscapePoint zhat;              // the unique feasible critical point
  double f_at_zhat = 0;
  bool certified_exact = false;     // true when zhat was verified in rational arithmetic
  Rational c2_exact;
  RVec9 zhat_exact;
};

// Scans (0, 9/2) for roots of the remaining stationarity residual along the
// parameterized curve, bisects them to root_tol, applies the feasibility
// filter, and certifies the surviving critical point exactly.
CriticalPointReport critical_points(double root_tol = 1e-12);

// The critical point (1/4, 1/144, 7/72, 1/144, 7/72, 1/144, 7/72, 1/144, 7/72).
LandscapePoint critical_point();
RVec9 critical_point_exact();

enum class BoundaryCase { kZEqualsZero, kZEqualsHalf };

struct BoundaryMax {
  LandscapePoint point;
  double coordinate = 0;  // maximizing segment coordinate (z110 resp. z111)
  double value = 0;
};

// Maximum of f over the z = 0 (resp. z = 1/2) face, located on the segment the
// face's stationarity conditions collapse to. The value is strictly below
// f at the critical point.
BoundaryMax boundary_max(BoundaryCase which);

// Hessian of f. Entries are reported in the variable order
//   (z, z211, z111, z200, z100, z210, z110, z201, z101).
struct HessianReport {
  Mat9 B = Mat9::Zero();               // Hessian at the point
  bool exact = false;                  // rational entries below are populated
  RMat9 B_exact{};                     // exact Hessian (at the critical point)
  Rational det_B;                      // exact determinant
  std::vector<BigInt> char_poly_Bstar; // coeffs of det(xI - 63 B), ascending, degree 9
  Vec9 eigenvalues = Vec9::Zero();     // eigenvalues of B, ascending
};

// Exact at the critical point, finite differences (with one Richardson step)
// elsewhere. Throws on boundary points.
HessianReport hessian_at(const LandscapePoint& p);

// Central-difference Hessian of f via its analytic gradient.
Mat9 hessian_numeric(const LandscapePoint& p, double step = 1e-5);

// Eigenvalues of the exact Hessian at the critical point, ascending.
Vec9 eigenvalues_B();

// g(zhat) (2 pi n)^(9/2) / sqrt(|det B|); the n-dependence cancels and the
// value is 81/7.
double laplace_constant(double n);

// Laplace approximation of the configuration-lattice sum: (81/8)^n * 81/7.
double laplace_second_moment(std::int64_t n);

struct TailReport {
  std::uint64_t samples = 0;
  std::uint64_t violations = 0;  // sampled points with f >= f(zhat)
  double max_f = 0;
  LandscapePoint argmax;
};

// Samples points of the region farther than min_distance from the critical
// point and checks f < f(zhat) at every one of them.
TailReport tail_dominance_check(std::uint64_t samples, std::uint64_t seed,
                                double min_distance = 1e-2);

// Uniform-ish sample of the closure of the region (z uniform, each pair
// uniform in its triangle).
LandscapePoint sample_point(Rng& rng);

}  // namespace mod5
