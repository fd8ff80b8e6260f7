#include "mod5orient/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mod5 {

namespace {

// Coordinate indices in LandscapePoint order.
enum : int { kZ = 0, k211, k111, k210, k110, k201, k101, k200, k100 };

// b = 2 + z + 2 z211 + z111 - 2 z210 - z110 - 2 z201 - z101 + 2 z200 + z100.
constexpr std::array<int, 9> kBCoeff = {1, 2, 1, -2, -1, -2, -1, 2, 1};
constexpr double kBConst = 2.0;

// The twelve vertex-group fractions as affine forms: constant (0 or 1/2 -> 0
// or 1 below, in halves) plus integer coefficients over the nine coordinates.
struct GroupForm {
  int half_const;                // constant term, in units of 1/2
  std::array<int, 9> coeff;
};

constexpr std::array<GroupForm, 12> kGroups = {{
    {0, {0, 1, 0, 0, 0, 0, 0, 0, 0}},     // z211
    {0, {0, 0, 1, 0, 0, 0, 0, 0, 0}},     // z111
    {0, {1, -1, -1, 0, 0, 0, 0, 0, 0}},   // z - z211 - z111
    {0, {0, 0, 0, 0, 0, 0, 0, 1, 0}},     // z200
    {0, {0, 0, 0, 0, 0, 0, 0, 0, 1}},     // z100
    {0, {1, 0, 0, 0, 0, 0, 0, -1, -1}},   // z - z200 - z100
    {0, {0, 0, 0, 1, 0, 0, 0, 0, 0}},     // z210
    {0, {0, 0, 0, 0, 1, 0, 0, 0, 0}},     // z110
    {1, {-1, 0, 0, -1, -1, 0, 0, 0, 0}},  // 1/2 - z - z210 - z110
    {0, {0, 0, 0, 0, 0, 1, 0, 0, 0}},     // z201
    {0, {0, 0, 0, 0, 0, 0, 1, 0, 0}},     // z101
    {1, {-1, 0, 0, 0, 0, -1, -1, 0, 0}},  // 1/2 - z - z201 - z101
}};

// Groups whose vertices keep both special points across the two orientations
// carry a log(1/21) weight per unit; one shared point carries log(2/3).
constexpr std::array<int, 9> kSharedTwoCoeff = {0, 1, 0, 1, 0, 1, 0, 1, 0};
constexpr std::array<int, 9> kSharedOneCoeff = {0, 0, 1, 0, 1, 0, 1, 0, 1};

// Report order of the Hessian: (z, z211, z111, z200, z100, z210, z110, z201, z101).
constexpr std::array<int, 9> kHessianOrder = {kZ, k211, k111, k200, k100, k210, k110, k201, k101};

double h(double x) { return x > 0 ? x * std::log(x) : 0.0; }

template <typename S>
S affine_value(const GroupForm& form, const std::array<S, 9>& p) {
  S value = form.half_const ? S(1) / S(2) : S(0);
  for (int i = 0; i < 9; ++i) {
    if (form.coeff[static_cast<std::size_t>(i)] != 0)
      value += S(form.coeff[static_cast<std::size_t>(i)]) * p[static_cast<std::size_t>(i)];
  }
  return value;
}

std::array<double, 9> as_array(const Vec9& v) {
  std::array<double, 9> a{};
  for (int i = 0; i < 9; ++i) a[static_cast<std::size_t>(i)] = v(i);
  return a;
}

const double kLog21 = std::log(21.0);
const double kLog32 = std::log(1.5);
const double kLogConst = std::log(756.0) - 4.5 * std::log(9.0);

}  // namespace

LandscapePoint LandscapePoint::from(const std::array<double, 9>& coords) {
  LandscapePoint p;
  for (int i = 0; i < 9; ++i) p.z(i) = coords[static_cast<std::size_t>(i)];
  return p;
}

std::array<double, 12> LandscapePoint::groups() const {
  std::array<double, 12> g{};
  const auto coords = as_array(z);
  for (std::size_t i = 0; i < 12; ++i) g[i] = affine_value(kGroups[i], coords);
  return g;
}

bool LandscapePoint::in_closure(double tol) const {
  if (z(kZ) < -tol || z(kZ) > 0.5 + tol) return false;
  for (int i = 0; i < 9; ++i) {
    if (z(i) < -tol) return false;
  }
  for (double g : groups()) {
    if (g < -tol) return false;
  }
  return true;
}

bool LandscapePoint::strictly_interior(double margin) const {
  for (double g : groups()) {
    if (g <= margin) return false;
  }
  return z(kZ) > margin && z(kZ) < 0.5 - margin;
}

double b_of(const LandscapePoint& p) {
  double b = kBConst;
  for (int i = 0; i < 9; ++i) b += kBCoeff[static_cast<std::size_t>(i)] * p.z(i);
  return b;
}

Rational b_of(const RVec9& p) {
  Rational b = 2;
  for (int i = 0; i < 9; ++i) b += kBCoeff[static_cast<std::size_t>(i)] * p[static_cast<std::size_t>(i)];
  return b;
}

double f_of(const LandscapePoint& p) {
  if (!p.in_closure(1e-9)) throw std::domain_error("f_of: point outside the region closure");
  const double b = b_of(p);
  if (b < -1e-9 || b > 4.5 + 1e-9) throw std::domain_error("f_of: b outside [0, 9/2]");

  double s2 = 0, s1 = 0;
  for (int i = 0; i < 9; ++i) {
    s2 += kSharedTwoCoeff[static_cast<std::size_t>(i)] * p.z(i);
    s1 += kSharedOneCoeff[static_cast<std::size_t>(i)] * p.z(i);
  }
  double value = h(b) + h(4.5 - b) + kLogConst - s2 * kLog21 - s1 * kLog32;
  for (double g : p.groups()) value -= h(g);
  return value;
}

double f_max() { return std::log(81.0 / 8.0); }

Vec9 grad_f(const LandscapePoint& p) {
  if (!p.strictly_interior())
    throw std::domain_error("grad_f: point must be strictly interior");
  const double b = b_of(p);
  const double log_ratio = std::log(b / (4.5 - b));
  const auto groups = p.groups();
  Vec9 grad;
  for (int u = 0; u < 9; ++u) {
    double value = kBCoeff[static_cast<std::size_t>(u)] * log_ratio -
                   kSharedTwoCoeff[static_cast<std::size_t>(u)] * kLog21 -
                   kSharedOneCoeff[static_cast<std::size_t>(u)] * kLog32;
    for (std::size_t g = 0; g < 12; ++g) {
      const int coeff = kGroups[g].coeff[static_cast<std::size_t>(u)];
      if (coeff != 0) value -= coeff * std::log(groups[g]);
    }
    grad(u) = value;
  }
  return grad;
}

double g_of(const LandscapePoint& p, double n) {
  if (n <= 0) throw std::invalid_argument("g_of: n must be positive");
  if (!p.strictly_interior())
    throw std::domain_error("g_of: point must be strictly interior");
  const double b = b_of(p);
  double product = 1;
  for (double g : p.groups()) product *= g;
  const double two_pi_n = 2.0 * M_PI * n;
  return std::sqrt(b * (4.5 - b)) /
         (std::sqrt(2.0) * std::pow(two_pi_n, 4.5) * std::sqrt(product));
}

double c2_star(double b) {
  const double num = -4.0 * b * b * b * (32.0 * b * b + 104.0 * b - 171.0);
  const double den = 5120.0 * std::pow(b, 4) - 46080.0 * std::pow(b, 3) +
                     285120.0 * b * b - 816480.0 * b - 688905.0;
  if (std::abs(den) < 1e-9) throw std::domain_error("c2_star: denominator vanishes");
  return num / den;
}

Rational c2_star(const Rational& b) {
  const Rational num = -4 * b * b * b * (32 * b * b + 104 * b - 171);
  const Rational den = 5120 * rational_pow(b, 4) - 46080 * rational_pow(b, 3) +
                       285120 * b * b - 816480 * b - 688905;
  if (den == 0) throw std::domain_error("c2_star: denominator vanishes");
  return num / den;
}

double c2_feasible_upper_bound(double b) {
  const double t = (4.5 - b) / b;
  return 0.5 / (21.0 * t * t + 14.0 * t + 1.0);
}

namespace {

template <typename S>
std::array<S, 9> parameterized_coords(const S& b, const S& c2) {
  const S t = (S(9) / S(2) - b) / b;
  const S c1 = S(14) * t * c2;
  const S z = (S(21) * t * t + S(14) * t + S(1)) * c2;
  const S c4 = (S(1) / S(2) - z) * t * t / (t * t + S(14) * t + S(21));
  const S c3 = S(14) * c4 / t;
  return {z, c2, c1, c4, c3, c4, c3, c2, c1};
}

// Residual of the one remaining stationarity condition (the derivative in the
// z direction) along the parameterized curve. log|.| keeps it defined where
// the curve leaves the region.
double stationarity_residual(double b) {
  const auto c = parameterized_coords<double>(b, c2_star(b));
  const double zi0 = c[0] - c[1] - c[2];         // z - z211 - z111
  const double zm0 = 0.5 - c[0] - c[3] - c[4];   // 1/2 - z - z210 - z110
  if (zi0 == 0 || zm0 == 0 || b <= 0 || b >= 4.5) return std::numeric_limits<double>::quiet_NaN();
  return std::log(b) - std::log(4.5 - b) + 2.0 * (std::log(std::abs(zm0)) - std::log(std::abs(zi0)));
}

}  // namespace

LandscapePoint parameterized_point(double b, double c2) {
  const auto coords = parameterized_coords<double>(b, c2);
  return LandscapePoint::from(coords);
}

LandscapePoint critical_point() {
  LandscapePoint p;
  const auto exact = critical_point_exact();
  for (int i = 0; i < 9; ++i) p.z(i) = to_double(exact[static_cast<std::size_t>(i)]);
  return p;
}

RVec9 critical_point_exact() {
  const Rational c2(1, 144), c1(7, 72);
  return {Rational(1, 4), c2, c1, c2, c1, c2, c1, c2, c1};
}

CriticalPointReport critical_points(double root_tol) {
  CriticalPointReport report;

  const double step = 1e-3;
  double prev_b = 0, prev_r = std::numeric_limits<double>::quiet_NaN();
  for (double b = step; b < 4.5; b += step) {
    const double r = stationarity_residual(b);
    if (std::isfinite(r) && std::isfinite(prev_r) && prev_r * r <= 0 && prev_r != r) {
      double lo = prev_b, hi = b, rlo = prev_r;
      while (hi - lo > root_tol) {
        const double mid = 0.5 * (lo + hi);
        const double rm = stationarity_residual(mid);
        if (!std::isfinite(rm)) break;
        if ((rlo <= 0) == (rm <= 0)) {
          lo = mid;
          rlo = rm;
        } else {
          hi = mid;
        }
      }
      const double root = 0.5 * (lo + hi);
      CriticalRoot entry;
      entry.b = root;
      entry.c2 = c2_star(root);
      entry.feasible = entry.c2 > 0 && entry.c2 < c2_feasible_upper_bound(root);
      report.roots.push_back(entry);
    }
    prev_b = b;
    prev_r = r;
  }

  for (const CriticalRoot& root : report.roots) {
    if (!root.feasible) continue;
    report.zhat = parameterized_point(root.b, root.c2);

    // Certify the nearby rational candidate exactly: a root at 9/4 must make
    // every gradient component vanish, i.e. each of the nine products below
    // equal to one, and the affine form b must reproduce itself.
    const Rational rb(9, 4);
    if (std::abs(root.b - 2.25) < 1e-6) {
      const Rational rc2 = c2_star(rb);
      const auto coords = parameterized_coords<Rational>(rb, rc2);
      bool ok = (b_of(coords) == rb);
      std::array<Rational, 12> groups;
      for (std::size_t g = 0; g < 12; ++g) groups[g] = affine_value(kGroups[g], coords);
      const Rational ratio = rb / (Rational(9, 2) - rb);
      for (int u = 0; u < 9 && ok; ++u) {
        Rational product = rational_pow(ratio, kBCoeff[static_cast<std::size_t>(u)]) *
                           rational_pow(Rational(1, 21), kSharedTwoCoeff[static_cast<std::size_t>(u)]) *
                           rational_pow(Rational(2, 3), kSharedOneCoeff[static_cast<std::size_t>(u)]);
        for (std::size_t g = 0; g < 12; ++g) {
          const int coeff = kGroups[g].coeff[static_cast<std::size_t>(u)];
          if (coeff != 0) product *= rational_pow(groups[g], -coeff);
        }
        ok = ok && (product == 1);
      }
      if (ok) {
        report.certified_exact = true;
        report.c2_exact = rc2;
        report.zhat_exact = coords;
        for (int i = 0; i < 9; ++i)
          report.zhat.z(i) = to_double(coords[static_cast<std::size_t>(i)]);
      }
    }
  }
  report.f_at_zhat = f_of(report.zhat);
  return report;
}

namespace {

LandscapePoint boundary_segment_point(BoundaryCase which, double s) {
  std::array<double, 9> coords{};
  if (which == BoundaryCase::kZEqualsZero) {
    coords = {0, 0, 0, 0.5 - s, s, 0.5 - s, s, 0, 0};
  } else {
    coords = {0.5, 0.5 - s, s, 0, 0, 0, 0, 0.5 - s, s};
  }
  return LandscapePoint::from(coords);
}

// d/ds of f restricted to either segment; vanishes at s = 19/52.
double boundary_segment_derivative(double s) {
  return 2.0 * std::log(56.0 * (0.5 - s) / (9.0 - 4.0 * s));
}

}  // namespace

BoundaryMax boundary_max(BoundaryCase which) {
  double lo = 1e-12, hi = 0.5 - 1e-12;
  // derivative is positive at 0+ and tends to -inf at 1/2-
  while (hi - lo > 1e-15) {
    const double mid = 0.5 * (lo + hi);
    (boundary_segment_derivative(mid) > 0 ? lo : hi) = mid;
  }
  BoundaryMax result;
  result.coordinate = 0.5 * (lo + hi);
  result.point = boundary_segment_point(which, result.coordinate);
  result.value = f_of(result.point);
  if (!(result.value < f_max()))
    throw std::logic_error("boundary_max: face maximum not below the interior maximum");
  return result;
}

namespace {

template <typename S>
std::array<std::array<S, 9>, 9> analytic_hessian(const std::array<S, 9>& p) {
  S b = S(2);
  for (int i = 0; i < 9; ++i) b += S(kBCoeff[static_cast<std::size_t>(i)]) * p[static_cast<std::size_t>(i)];
  const S kappa = S(1) / b + S(1) / (S(9) / S(2) - b);
  std::array<S, 12> groups;
  for (std::size_t g = 0; g < 12; ++g) groups[g] = affine_value(kGroups[g], p);

  std::array<std::array<S, 9>, 9> hess;
  for (int u = 0; u < 9; ++u) {
    for (int v = u; v < 9; ++v) {
      S value = kappa * S(kBCoeff[static_cast<std::size_t>(u)] * kBCoeff[static_cast<std::size_t>(v)]);
      for (std::size_t g = 0; g < 12; ++g) {
        const int cu = kGroups[g].coeff[static_cast<std::size_t>(u)];
        const int cv = kGroups[g].coeff[static_cast<std::size_t>(v)];
        if (cu != 0 && cv != 0) value -= S(cu * cv) / groups[g];
      }
      hess[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = value;
      hess[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] = value;
    }
  }
  return hess;
}

// det of a rational matrix by Gaussian elimination.
Rational rational_det(RMat9 m) {
  Rational det = 1;
  for (int col = 0; col < 9; ++col) {
    int pivot = -1;
    for (int row = col; row < 9; ++row) {
      if (m[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] != 0) {
        pivot = row;
        break;
      }
    }
    if (pivot < 0) return 0;
    if (pivot != col) {
      std::swap(m[static_cast<std::size_t>(pivot)], m[static_cast<std::size_t>(col)]);
      det = -det;
    }
    const Rational& lead = m[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
    det *= lead;
    for (int row = col + 1; row < 9; ++row) {
      const Rational factor = m[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] / lead;
      if (factor == 0) continue;
      for (int j = col; j < 9; ++j) {
        m[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)] -=
            factor * m[static_cast<std::size_t>(col)][static_cast<std::size_t>(j)];
      }
    }
  }
  return det;
}

// Characteristic polynomial det(xI - A) by Faddeev-LeVerrier; ascending coeffs.
std::vector<Rational> char_poly(const RMat9& a) {
  std::array<std::array<Rational, 9>, 9> m{};  // starts at zero matrix
  std::vector<Rational> c(10);
  c[9] = 1;  // coefficient of x^9
  std::array<std::array<Rational, 9>, 9> am;
  for (int k = 1; k <= 9; ++k) {
    // m := a * m + c_{9-k+1} I ; am := a * m
    for (int i = 0; i < 9; ++i)
      m[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] += c[static_cast<std::size_t>(10 - k)];
    Rational trace = 0;
    for (int i = 0; i < 9; ++i) {
      for (int j = 0; j < 9; ++j) {
        Rational sum = 0;
        for (int l = 0; l < 9; ++l) {
          sum += a[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)] *
                 m[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)];
        }
        am[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = sum;
        if (i == j) trace += sum;
      }
    }
    c[static_cast<std::size_t>(9 - k)] = -trace / k;
    m = am;
  }
  return c;
}

const HessianReport& critical_hessian_report() {
  static const HessianReport report = [] {
    HessianReport r;
    r.exact = true;
    const auto hess_by_coord = analytic_hessian<Rational>(critical_point_exact());
    for (int i = 0; i < 9; ++i) {
      for (int j = 0; j < 9; ++j) {
        const auto& value = hess_by_coord[static_cast<std::size_t>(kHessianOrder[static_cast<std::size_t>(i)])]
                                     [static_cast<std::size_t>(kHessianOrder[static_cast<std::size_t>(j)])];
        r.B_exact[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = value;
        r.B(i, j) = to_double(value);
      }
    }
    r.det_B = rational_det(r.B_exact);

    RMat9 bstar;
    for (int i = 0; i < 9; ++i) {
      for (int j = 0; j < 9; ++j) {
        bstar[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            63 * r.B_exact[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      }
    }
    const auto coeffs = char_poly(bstar);
    r.char_poly_Bstar.reserve(coeffs.size());
    for (const Rational& c : coeffs) {
      if (denominator(c) != 1)
        throw std::logic_error("critical Hessian: char poly coefficient not integral");
      r.char_poly_Bstar.push_back(numerator(c));
    }

    Eigen::SelfAdjointEigenSolver<Mat9> solver(r.B);
    r.eigenvalues = solver.eigenvalues();
    return r;
  }();
  return report;
}

}  // namespace

Mat9 hessian_numeric(const LandscapePoint& p, double step) {
  if (!p.strictly_interior(step))
    throw std::domain_error("hessian_numeric: point too close to the boundary");
  auto central = [&p](double hstep) {
    Mat9 hess;
    for (int j = 0; j < 9; ++j) {
      LandscapePoint plus = p, minus = p;
      plus.z(j) += hstep;
      minus.z(j) -= hstep;
      const Vec9 diff = (grad_f(plus) - grad_f(minus)) / (2.0 * hstep);
      hess.col(j) = diff;
    }
    return hess;
  };
  const Mat9 coarse = central(step);
  const Mat9 fine = central(step / 2.0);
  const Mat9 extrapolated = (4.0 * fine - coarse) / 3.0;  // one Richardson step
  return 0.5 * (extrapolated + extrapolated.transpose());
}

HessianReport hessian_at(const LandscapePoint& p) {
  if ((p.z - critical_point().z).norm() < 1e-13) return critical_hessian_report();
  HessianReport report;
  const Mat9 by_coord = hessian_numeric(p);
  for (int i = 0; i < 9; ++i) {
    for (int j = 0; j < 9; ++j) {
      report.B(i, j) = by_coord(kHessianOrder[static_cast<std::size_t>(i)],
                                  kHessianOrder[static_cast<std::size_t>(j)]);
    }
  }
  Eigen::SelfAdjointEigenSolver<Mat9> solver(report.B);
  report.eigenvalues = solver.eigenvalues();
  return report;
}

Vec9 eigenvalues_B() { return critical_hessian_report().eigenvalues; }

double laplace_constant(double n) {
  const double det_abs = std::abs(to_double(critical_hessian_report().det_B));
  return g_of(critical_point(), n) * std::pow(2.0 * M_PI * n, 4.5) / std::sqrt(det_abs);
}

double laplace_second_moment(std::int64_t n) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("laplace_second_moment: n must be even and >= 2");
  return std::exp(static_cast<double>(n) * std::log(81.0 / 8.0)) *
         laplace_constant(static_cast<double>(n));
}

LandscapePoint sample_point(Rng& rng) {
  std::array<double, 9> coords{};
  const double z = 0.5 * rng.uniform01();
  coords[kZ] = z;
  auto triangle = [&rng](double cap, double& x, double& y) {
    if (cap <= 0) {
      x = y = 0;
      return;
    }
    do {
      x = cap * rng.uniform01();
      y = cap * rng.uniform01();
    } while (x + y > cap);
  };
  triangle(z, coords[k211], coords[k111]);
  triangle(z, coords[k200], coords[k100]);
  triangle(0.5 - z, coords[k210], coords[k110]);
  triangle(0.5 - z, coords[k201], coords[k101]);
  return LandscapePoint::from(coords);
}

TailReport tail_dominance_check(std::uint64_t samples, std::uint64_t seed, double min_distance) {
  if (samples < 1) throw std::invalid_argument("tail_dominance_check: need at least one sample");
  const LandscapePoint zhat = critical_point();
  const double fmax = f_max();
  TailReport report;
  report.samples = samples;
  report.max_f = -std::numeric_limits<double>::infinity();
  for (std::uint64_t i = 0; i < samples; ++i) {
    Rng rng(trial_seed(seed, i));
    LandscapePoint p = sample_point(rng);
    while ((p.z - zhat.z).norm() <= min_distance) p = sample_point(rng);
    const double value = f_of(p);
    if (value >= fmax) ++report.violations;
    if (value > report.max_f) {
      report.max_f = value;
      report.argmax = p;
    }
  }
  return report;
}

}  // namespace mod5
