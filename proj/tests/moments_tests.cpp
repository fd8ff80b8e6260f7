#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "mod5orient/moments.hpp"
#include "mod5orient/orientation.hpp"
#include "test_oracles.hpp"

using namespace mod5;

TEST_CASE("matchings of small point sets") {
  CHECK(matchings(0) == 1);
  CHECK(matchings(2) == 1);
  CHECK(matchings(4) == 3);
  CHECK(matchings(6) == oracle::count_matchings_brute(6));
  CHECK(matchings(10) == oracle::count_matchings_brute(10));
  CHECK(matchings(18) == 34459425);  // 17!!
  CHECK(matchings(18) == oracle::count_matchings_brute(18));
  CHECK_THROWS_AS(matchings(3), std::invalid_argument);
}

TEST_CASE("exact first moment at n = 2") {
  const Rational expected = parse_rational("940584960/34459425");
  CHECK(exact_first_moment(2) == expected);
  CHECK_THROWS_AS(exact_first_moment(3), std::invalid_argument);
  CHECK_THROWS_AS(exact_first_moment(0), std::invalid_argument);
}

TEST_CASE("first moment equals the exhaustive two-vertex classification") {
  // ties the formula (and its loop convention) to direct enumeration
  const auto exact = oracle::two_vertex_exact();
  CHECK(exact_first_moment(2) == exact.EY);
}

TEST_CASE("first moment formula via direct factor substitution") {
  const Rational direct(BigInt(2) * 36 * 36 * factorial(9), matchings(18));
  CHECK(exact_first_moment(2) == direct);
}

TEST_CASE("Stirling ratio tends to 1 and is within 1% at n = 200") {
  double prev_err = 1e9;
  for (std::int64_t n : {10, 50, 100, 200}) {
    // exact ratio E[Y] / (3 (81/8)^(n/2))
    const Rational scale = Rational(3) * rational_pow(Rational(81, 8), n / 2);
    const double ratio = to_double(exact_first_moment(n) / scale);
    const double err = std::abs(ratio - 1.0);
    CHECK(err < prev_err);
    prev_err = err;
    if (n == 200) CHECK(err < 0.01);
  }
}

TEST_CASE("config_weight on the worked example") {
  ConfigVector c;
  c.n = 2;
  c.k = 1;
  c.k211 = 1;
  c.k200 = 1;
  CHECK(c.valid());
  CHECK(c.in_in_points() == 9);
  CHECK(c.in_out_points() == 0);
  CHECK(config_weight(c) == BigInt(2) * 1296 * 362880);
}

TEST_CASE("config_weight rejects vectors outside the region") {
  ConfigVector c;
  c.n = 2;
  c.k = 1;
  c.k211 = 1;
  c.k111 = 1;  // k211 + k111 > k
  CHECK_FALSE(c.valid());
  CHECK_THROWS_AS(config_weight(c), std::invalid_argument);

  ConfigVector d;
  d.n = 2;
  d.k = 2;  // k > n/2
  CHECK_FALSE(d.valid());
}

TEST_CASE("config_weight is symmetric under swapping the two orientations") {
  int checked = 0;
  for_each_config(6, [&](const ConfigVector& c) {
    ConfigVector swapped = c;
    std::swap(swapped.k210, swapped.k201);
    std::swap(swapped.k110, swapped.k101);
    if (!swapped.valid()) return;
    CHECK(config_weight(c) == config_weight(swapped));
    ++checked;
  });
  CHECK(checked > 500);
}

TEST_CASE("special-point exponents cover all n vertices") {
  for_each_config(4, [&](const ConfigVector& c) {
    const std::int64_t shared2 = c.k211 + c.k210 + c.k201 + c.k200;
    const std::int64_t shared1 = c.k111 + c.k110 + c.k101 + c.k100;
    const std::int64_t shared0 = c.k011() + c.k010() + c.k001() + c.k000();
    CHECK(shared2 + shared1 + shared0 == c.n);
  });
}

TEST_CASE("lattice enumeration at n = 2 stays inside the region") {
  int points = 0;
  for_each_config(2, [&](const ConfigVector& c) {
    CHECK(c.valid());
    ++points;
  });
  CHECK(points == 18);
}

TEST_CASE("lattice sum equals E[Y^2] at n = 2 (diagonal pairs included)") {
  // The two-vertex classification decides which statistic the configuration
  // sum computes: it reproduces E[Y^2], not E[Y(Y-1)].
  const auto exact = oracle::two_vertex_exact();
  const Rational lattice = exact_second_moment(2);
  CHECK(lattice == exact.EY2);
  CHECK(lattice != exact.EYY1);
  // frozen regression value of the diagonal discrepancy
  CHECK(lattice - exact.EYY1 == exact_first_moment(2));
}

TEST_CASE("second moment enumeration limit") {
  CHECK_THROWS_AS(exact_second_moment(14), std::invalid_argument);
  CHECK_THROWS_AS(exact_second_moment(3), std::invalid_argument);
}

TEST_CASE("second-to-first-squared ratio approaches 9/7 monotonically") {
  double prev_err = 1e9;
  for (std::int64_t n : {4, 8, 12}) {
    const Rational ey = exact_first_moment(n);
    const Rational ratio = exact_second_moment(n) / (ey * ey);
    const double err = std::abs(to_double(ratio) - 9.0 / 7.0);
    CAPTURE(n);
    CHECK(err < prev_err);
    prev_err = err;
  }
  CHECK(prev_err < 0.2);
}

TEST_CASE("lambda, mu, delta closed forms") {
  CHECK(lambda_k(1) == 4);
  CHECK(lambda_k(2) == 16);
  CHECK(lambda_k(3) == Rational(256, 3));
  CHECK(mu_k(1) == Rational(28, 9));
  CHECK(mu_k(2) == Rational(1360, 81));
  CHECK(delta_k(3) == Rational(-8, 729));
  CHECK_THROWS_AS(lambda_k(0), std::invalid_argument);
  for (int k = 1; k <= 64; ++k) {
    CHECK(mu_k(k) / lambda_k(k) - 1 == delta_k(k));
  }
}

TEST_CASE("sum of lambda_k delta_k^2") {
  CHECK(sum_lambda_delta_sq(1) == doctest::Approx(16.0 / 81.0).epsilon(1e-12));
  const double sum60 = sum_lambda_delta_sq(60);
  CHECK(std::abs(std::exp(sum60) - 9.0 / 7.0) < 1e-9);
  CHECK(std::abs(sum60 - std::log(9.0 / 7.0)) < 1e-9);
  CHECK(std::abs(sum60 - (-0.5) * std::log(49.0 / 81.0)) < 1e-9);
  // the true tail after k = 60 is below (32/81)^61 ~ 2.5e-25, far under the
  // floating error of the partial sum itself
  CHECK(std::abs(sum60 - std::log(9.0 / 7.0)) < 1e-15);
}

TEST_CASE("joint moment ratio is exact at n = 2") {
  const auto exact = oracle::two_vertex_exact();
  CHECK(finite_n_joint_moment_ratio(2, 1) == exact.EYX1 / exact.EY);
  CHECK(finite_n_joint_moment_ratio(2, 2) == exact.EYX2 / exact.EY);
  CHECK(finite_n_joint_moment_ratio(2, 1) == Rational(28, 9));
  CHECK(finite_n_joint_moment_ratio(2, 2) == 15);
}

TEST_CASE("joint moment ratio converges to mu_k") {
  CHECK(std::abs(to_double(finite_n_joint_moment_ratio(2000, 1) - mu_k(1))) < 1e-2);
  CHECK(std::abs(to_double(finite_n_joint_moment_ratio(2000, 2) - mu_k(2))) < 1e-2);
  // |ratio(n, k) - mu_k| non-increasing over n = 100, 400, 1600
  for (int k : {1, 2}) {
    double prev = 1e9;
    for (std::int64_t n : {100, 400, 1600}) {
      const double err = std::abs(to_double(finite_n_joint_moment_ratio(n, k) - mu_k(k)));
      CAPTURE(n);
      CAPTURE(k);
      CHECK(err <= prev);
      prev = err;
    }
  }
  CHECK_THROWS_AS(finite_n_joint_moment_ratio(4, 5), std::invalid_argument);
}

TEST_CASE("moment report JSON shape") {
  const MomentReport report = moment_report(2);
  const std::string json = to_json(report);
  // the carrier keeps rationals reduced: 940584960/34459425 = 331776/12155
  CHECK(json.find("\"exact_EY\":\"331776/12155\"") != std::string::npos);
  CHECK(parse_rational("331776/12155") == parse_rational("940584960/34459425"));
  CHECK(json.find("\"n\":2") != std::string::npos);
  CHECK(json.find("\"exact_EY2\"") != std::string::npos);
}

TEST_CASE("second moment matches per-pairing counting at n = 2 classes") {
  // config_weight aggregated over the lattice vs direct Y^2 sums per class
  const auto exact = oracle::two_vertex_exact();
  BigInt lattice_total = 0;
  for_each_config(2, [&](const ConfigVector& c) { lattice_total += config_weight(c); });
  CHECK(Rational(lattice_total, matchings(18)) == exact.EY2);
}

TEST_CASE("d-parameterized first moment matches exhaustive enumeration at d = 5") {
  // two vertices of degree 5, valid in-degrees {1, 4}: enumerate all 9!! = 945
  // pairings of the 10 points and count point-level valid orientations
  BigInt total = 0;
  std::int64_t pairings = 0;
  oracle::for_each_matching(10, [&](const std::vector<std::pair<int, int>>& pairs) {
    ++pairings;
    MultiGraph g;
    g.n = 2;
    g.d = 5;
    int loops = 0;
    for (const auto& [a, b] : pairs) {
      const int u = a / 5, v = b / 5;
      g.edges.emplace_back(std::min(u, v), std::max(u, v));
      loops += (u == v);
    }
    std::sort(g.edges.begin(), g.edges.end());
    BigInt y = count_orientations_with_targets(g, {1, 4}) +
               count_orientations_with_targets(g, {4, 1});
    total += y << loops;
  });
  CHECK(pairings == 945);
  CHECK(exact_first_moment(2, 5) == Rational(total, pairings));
  CHECK(exact_first_moment(2, 5) == Rational(6000, 945));
  CHECK_THROWS_AS(exact_first_moment(2, 7), std::invalid_argument);  // d must be 4p+1
}
