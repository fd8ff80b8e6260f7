#include "mod5orient/moments.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace mod5 {

BigInt matchings(std::int64_t m_points) {
  if (m_points < 0 || m_points % 2 != 0)
    throw std::invalid_argument("matchings: point count must be even and non-negative");
  const std::int64_t half = m_points / 2;
  return factorial(m_points) / (factorial(half) * int_pow(2, half));
}

Rational exact_first_moment(std::int64_t n, int d) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("exact_first_moment: n must be even and >= 2");
  if (d < 5 || d % 4 != 1) throw std::invalid_argument("exact_first_moment: d must be 4p+1");
  const int p = (d - 1) / 4;
  const std::int64_t dn = static_cast<std::int64_t>(d) * n;
  const BigInt numerator =
      binomial(n, n / 2) * int_pow(binomial(d, p), n) * factorial(dn / 2);
  return Rational(numerator, matchings(dn));
}

double asymptotic_first_moment(std::int64_t n) {
  return std::exp(std::log(3.0) + 0.5 * static_cast<double>(n) * std::log(81.0 / 8.0));
}

bool ConfigVector::valid() const {
  if (n < 2 || n % 2 != 0) return false;
  const std::int64_t h = n / 2;
  if (k < 0 || k > h) return false;
  for (std::int64_t x : {k211, k111, k210, k110, k201, k101, k200, k100}) {
    if (x < 0) return false;
  }
  if (k211 + k111 > k || k200 + k100 > k) return false;
  if (k210 + k110 > h - k || k201 + k101 > h - k) return false;
  return in_in_points() >= 0 && in_out_points() >= 0;
}

BigInt config_weight(const ConfigVector& c) {
  if (!c.valid()) throw std::invalid_argument("config_weight: vector outside the lattice region");

  BigInt group_ways = factorial(c.n);
  for (std::int64_t size : {c.k211, c.k111, c.k011(), c.k200, c.k100, c.k000(),
                            c.k210, c.k110, c.k010(), c.k201, c.k101, c.k001()}) {
    group_ways /= factorial(size);
  }

  // Special-point choices per vertex group: both special points shared, one
  // shared, or none shared between the two orientations.
  const std::int64_t shared2 = c.k211 + c.k210 + c.k201 + c.k200;
  const std::int64_t shared1 = c.k111 + c.k110 + c.k101 + c.k100;
  const std::int64_t shared0 = c.k011() + c.k010() + c.k001() + c.k000();
  const BigInt special = int_pow(36, shared2) * int_pow(9 * 8 * 7, shared1) *
                         int_pow(36 * 21, shared0);

  return group_ways * special * factorial(c.in_in_points()) * factorial(c.in_out_points());
}

void for_each_config(std::int64_t n, const std::function<void(const ConfigVector&)>& fn) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("for_each_config: n must be even and >= 2");
  const std::int64_t h = n / 2;
  ConfigVector c;
  c.n = n;
  for (c.k = 0; c.k <= h; ++c.k) {
    for (c.k211 = 0; c.k211 <= c.k; ++c.k211)
      for (c.k111 = 0; c.k111 + c.k211 <= c.k; ++c.k111)
        for (c.k200 = 0; c.k200 <= c.k; ++c.k200)
          for (c.k100 = 0; c.k100 + c.k200 <= c.k; ++c.k100)
            for (c.k210 = 0; c.k210 <= h - c.k; ++c.k210)
              for (c.k110 = 0; c.k110 + c.k210 <= h - c.k; ++c.k110)
                for (c.k201 = 0; c.k201 <= h - c.k; ++c.k201)
                  for (c.k101 = 0; c.k101 + c.k201 <= h - c.k; ++c.k101) {
                    if (c.in_in_points() < 0 || c.in_out_points() < 0) continue;
                    fn(c);
                  }
  }
}

Rational exact_second_moment(std::int64_t n, std::int64_t max_n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("exact_second_moment: n must be even and >= 2");
  if (n > max_n) {
    throw std::invalid_argument("exact_second_moment: n = " + std::to_string(n) +
                                " exceeds the enumeration limit " + std::to_string(max_n));
  }
  BigInt total = 0;
  for_each_config(n, [&](const ConfigVector& c) { total += config_weight(c); });
  return Rational(total, matchings(9 * n));
}

Rational lambda_k(int k) {
  if (k < 1) throw std::invalid_argument("lambda_k: k must be >= 1");
  return Rational(int_pow(8, k), 2 * k);
}

Rational mu_k(int k) {
  if (k < 1) throw std::invalid_argument("mu_k: k must be >= 1");
  // (8^k + (-16/9)^k) / 2k over the common denominator 9^k
  const BigInt nine_k = int_pow(9, k);
  BigInt minus16_k = int_pow(16, k);
  if (k % 2 != 0) minus16_k = -minus16_k;
  return Rational(int_pow(8, k) * nine_k + minus16_k, 2 * k * nine_k);
}

Rational delta_k(int k) {
  if (k < 1) throw std::invalid_argument("delta_k: k must be >= 1");
  return rational_pow(Rational(-2, 9), k);
}

double sum_lambda_delta_sq(int kmax) {
  if (kmax < 1) throw std::invalid_argument("sum_lambda_delta_sq: kmax must be >= 1");
  double sum = 0, term = 1;
  const double x = 32.0 / 81.0;
  for (int k = 1; k <= kmax; ++k) {
    term *= x;
    sum += term / (2.0 * k);
  }
  return sum;
}

Rational finite_n_joint_moment_ratio(std::int64_t n, int k) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("finite_n_joint_moment_ratio: n must be even and >= 2");
  if (k < 1 || k > n) throw std::invalid_argument("finite_n_joint_moment_ratio: need 1 <= k <= n");

  // E[Y X_k] counts triples (pairing, k-cycle, valid orientation). Relative to
  // the first-moment count, the n-vertex special-point factor 36^n shrinks to
  // 36^(n-k) and the pairing factorial (9n/2)! to (9n/2 - k)!; the cycle
  // itself contributes the factor below. i counts cycle vertices whose two
  // cycle edges both point in; b (resp. c) of them are low in-degree overall.
  Rational total = 0;
  for (int i = 0; 2 * i <= k; ++i) {
    BigInt inner = 0;
    for (int b = 0; b <= i; ++b) {
      for (int c = 0; c <= i; ++c) {
        inner += binomial(i, b) * binomial(i, c) *
                 binomial(n - 2 * i, n / 2 - i - b + c) * int_pow(21, (i - b) + (i - c));
      }
    }
    const BigInt a_i = 2 * binomial(k, 2 * i);
    Rational term(falling_factorial(n, k) * int_pow(72, k) * a_i * int_pow(7, k - 2 * i) * inner,
                  BigInt(2 * k) * int_pow(36, k) * falling_factorial(9 * n / 2, k) * binomial(n, n / 2));
    total += term;
  }
  return total;
}

MomentReport moment_report(std::int64_t n, bool with_second, std::int64_t second_max_n) {
  MomentReport report;
  report.n = n;
  report.exact_EY = exact_first_moment(n);
  report.asymptotic_EY = asymptotic_first_moment(n);
  if (with_second && n <= second_max_n) {
    report.has_second = true;
    report.exact_EY2 = exact_second_moment(n, second_max_n);
    report.ratio = to_double(report.exact_EY2 / (report.exact_EY * report.exact_EY));
  }
  return report;
}

std::string to_json(const MomentReport& report) {
  nlohmann::json j;
  j["n"] = report.n;
  j["exact_EY"] = rational_string(report.exact_EY);
  j["asymptotic_EY"] = report.asymptotic_EY;
  if (report.has_second) {
    j["exact_EY2"] = rational_string(report.exact_EY2);
    j["ratio"] = report.ratio;
  } else {
    j["exact_EY2"] = nullptr;
    j["ratio"] = nullptr;
  }
  return j.dump();
}

}  // namespace mod5
