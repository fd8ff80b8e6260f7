#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "mod5orient/graph.hpp"
#include "mod5orient/moments.hpp"
#include "mod5orient/rng.hpp"
#include "test_oracles.hpp"

using namespace mod5;

TEST_CASE("sample_pairing structural postconditions") {
  const Pairing p = sample_pairing(2, 9, 12345);
  CHECK(p.pairs.size() == 9);
  std::set<int> points;
  for (const auto& [a, b] : p.pairs) {
    points.insert(p.flat(a));
    points.insert(p.flat(b));
  }
  CHECK(points.size() == 18);
  CHECK(*points.rbegin() == 17);
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("sample_pairing unique matching at d = 1") {
  for (std::uint64_t seed : {0ULL, 7ULL, 99ULL}) {
    const Pairing p = sample_pairing(2, 1, seed);
    REQUIRE(p.pairs.size() == 1);
    CHECK(p.pairs[0].first == PointId{0, 0});
    CHECK(p.pairs[0].second == PointId{1, 0});
  }
}

TEST_CASE("sample_pairing rejects bad input") {
  CHECK_THROWS_AS(sample_pairing(3, 9, 0), std::invalid_argument);  // odd n*d
  CHECK_THROWS_AS(sample_pairing(1, 2, 0), std::invalid_argument);
  CHECK_THROWS_AS(sample_pairing(4, 0, 0), std::invalid_argument);
}

TEST_CASE("sample_pairing deterministic per seed") {
  const Pairing a = sample_pairing(10, 9, 424242);
  const Pairing b = sample_pairing(10, 9, 424242);
  CHECK(to_text(a) == to_text(b));
  const Pairing c = sample_pairing(10, 9, 424243);
  CHECK(to_text(a) != to_text(c));
}

TEST_CASE("sample_pairing uniform over the 15 matchings at n=2, d=3") {
  // 3 sigma band around 1/15 per matching over 10^6 draws
  const int trials = 1000000;
  std::map<std::string, int> freq;
  for (int t = 0; t < trials; ++t) {
    freq[to_text(sample_pairing(2, 3, trial_seed(777, static_cast<std::uint64_t>(t))))]++;
  }
  CHECK(freq.size() == 15);
  CHECK(oracle::count_matchings_brute(6) == 15);
  const double p = 1.0 / 15.0;
  const double sigma = std::sqrt(p * (1 - p) / trials);
  double chi_sq = 0;
  for (const auto& [key, count] : freq) {
    const double rel = static_cast<double>(count) / trials;
    CHECK(std::abs(rel - p) < 3 * sigma);
    const double expected = p * trials;
    chi_sq += (count - expected) * (count - expected) / expected;
  }
  CHECK(chi_sq < 50);  // 14 dof; 50 is far beyond any sane quantile
}

TEST_CASE("pairing_to_multigraph banana projection") {
  Pairing p;
  p.n = 2;
  p.d = 9;
  for (int i = 0; i < 9; ++i) p.pairs.push_back({PointId{0, i}, PointId{1, i}});
  p.canonicalize();
  const MultiGraph g = pairing_to_multigraph(p);
  CHECK(g.edges.size() == 9);
  for (const auto& [u, v] : g.edges) {
    CHECK(u == 0);
    CHECK(v == 1);
  }
  CHECK_NOTHROW(g.validate());
  CHECK_FALSE(g.is_simple());
}

TEST_CASE("pairing_to_multigraph keeps loops") {
  Pairing p;
  p.n = 2;
  p.d = 3;
  p.pairs.push_back({PointId{0, 0}, PointId{0, 1}});
  p.pairs.push_back({PointId{0, 2}, PointId{1, 0}});
  p.pairs.push_back({PointId{1, 1}, PointId{1, 2}});
  p.canonicalize();
  const MultiGraph g = pairing_to_multigraph(p);
  CHECK(g.total_loops() == 2);
  CHECK(g.degree(0) == 3);
  CHECK(g.degree(1) == 3);
}

TEST_CASE("projection preserves degree on random pairings") {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const MultiGraph g = pairing_to_multigraph(sample_pairing(10, 9, seed));
    for (int v = 0; v < 10; ++v) CHECK(g.degree(v) == 9);
  }
}

TEST_CASE("count_cycles on fixed graphs") {
  const CycleCensus banana = count_cycles(banana_graph(9), 3);
  CHECK(banana.at(1) == 0);
  CHECK(banana.at(2) == 36);  // C(9,2) parallel pairs
  CHECK(banana.at(3) == 0);

  const CycleCensus k10 = count_cycles(complete_graph(10), 3);
  CHECK(k10.at(1) == 0);
  CHECK(k10.at(2) == 0);
  CHECK(k10.at(3) == 120);  // every vertex triple

  MultiGraph loopy;
  loopy.n = 1;
  loopy.d = 2;
  loopy.edges = {{0, 0}};
  CHECK(count_cycles(loopy, 1).at(1) == 1);
}

TEST_CASE("count_cycles agrees with the subset enumerator on small graphs") {
  int graphs = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const int n = 2 + 2 * static_cast<int>(seed % 3);        // 2, 4, 6
    const int d = 3 + static_cast<int>((seed / 3) % 3);      // 3, 4, 5
    if ((n * d) % 2 != 0) continue;
    const MultiGraph g = pairing_to_multigraph(sample_pairing(n, d, seed));
    const auto expected = oracle::cycle_census_brute(g, 4);
    const CycleCensus census = count_cycles(g, 4);
    for (int k = 1; k <= 4; ++k) {
      CAPTURE(seed);
      CAPTURE(k);
      CHECK(census.at(k) == expected[static_cast<std::size_t>(k)]);
    }
    ++graphs;
  }
  CHECK(graphs >= 25);
}

TEST_CASE("empirical cycle means match 8^k/2k at n = 1000") {
  // smaller companion of the acceptance run: 2000 samples, k <= 3
  const int trials = 2000;
  const int n = 1000;
  double sum[4] = {0, 0, 0, 0}, sum_sq[4] = {0, 0, 0, 0};
  for (int t = 0; t < trials; ++t) {
    const MultiGraph g =
        pairing_to_multigraph(sample_pairing(n, 9, trial_seed(31337, static_cast<std::uint64_t>(t))));
    const CycleCensus census = count_cycles(g, 3);
    for (int k = 1; k <= 3; ++k) {
      sum[k] += static_cast<double>(census.at(k));
      sum_sq[k] += static_cast<double>(census.at(k)) * static_cast<double>(census.at(k));
    }
  }
  for (int k = 1; k <= 3; ++k) {
    const double mean = sum[k] / trials;
    const double var = (sum_sq[k] - trials * mean * mean) / (trials - 1);
    const double se = std::sqrt(var / trials);
    const double target = to_double(lambda_k(k));
    CAPTURE(k);
    CHECK(std::abs(mean - target) < 3 * se);
  }
}

TEST_CASE("edge_connectivity") {
  CHECK(edge_connectivity(complete_graph(10)) == 9);
  CHECK(edge_connectivity(banana_graph(9)) == 9);

  // brute-force oracle over all bipartitions of K10
  const MultiGraph k10 = complete_graph(10);
  int best = 1 << 20;
  for (int mask = 1; mask < (1 << 10) - 1; ++mask) {
    int cut = 0;
    for (const auto& [u, v] : k10.edges) {
      if (((mask >> u) & 1) != ((mask >> v) & 1)) ++cut;
    }
    best = std::min(best, cut);
  }
  CHECK(edge_connectivity(k10) == best);

  MultiGraph two_bananas;
  two_bananas.n = 4;
  two_bananas.d = 9;
  for (int i = 0; i < 9; ++i) {
    two_bananas.edges.emplace_back(0, 1);
    two_bananas.edges.emplace_back(2, 3);
  }
  std::sort(two_bananas.edges.begin(), two_bananas.edges.end());
  CHECK_FALSE(two_bananas.is_connected());
  CHECK(edge_connectivity(two_bananas) == 0);

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const MultiGraph g = pairing_to_multigraph(sample_pairing(8, 5, seed));
    const int value = edge_connectivity(g);
    CHECK(value <= 5);
    CHECK((value == 0) == !g.is_connected());
  }
}

TEST_CASE("loops do not cross cuts") {
  // two vertices, one crossing edge, four loops each: connectivity 1
  const MultiGraph g = oracle::two_vertex_graph(4);
  CHECK(edge_connectivity(g) == 1);
}

TEST_CASE("graph text round trip") {
  const MultiGraph g = pairing_to_multigraph(sample_pairing(6, 9, 5));
  const MultiGraph back = parse_graph(to_text(g));
  CHECK(back.n == g.n);
  CHECK(back.d == g.d);
  CHECK(back.edges == g.edges);
}

TEST_CASE("graph parser rejects malformed input") {
  CHECK_THROWS_AS(parse_graph(std::string("")), std::invalid_argument);
  CHECK_THROWS_AS(parse_graph(std::string("2 9\n0 1\n")), std::invalid_argument);  // truncated
  CHECK_THROWS_AS(parse_graph(std::string("2 9\n0 5\n")), std::invalid_argument);  // bad endpoint
}

TEST_CASE("pairing text round trip") {
  const Pairing p = sample_pairing(4, 9, 11);
  std::istringstream in(to_text(p));
  const Pairing back = parse_pairing(in, 4, 9);
  CHECK(to_text(back) == to_text(p));
}
