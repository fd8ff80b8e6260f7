#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mod5orient/exact.hpp"
#include "mod5orient/graph.hpp"

namespace mod5 {

// Edge directions, aligned with MultiGraph::edges. heads[j] == 0 points edge j
// at edges[j].first, 1 at edges[j].second. A loop contributes 1 to in-degree
// and 1 to out-degree whatever its entry says; by convention we store 0.
struct Orientation {
  std::vector<std::uint8_t> heads;
};

// Vertices prescribed the low in-degree (2 for 9-regular graphs).
struct InSet {
  std::vector<int> members;  // sorted, distinct
};

struct OrientationCount {
  BigInt value;
};

inline constexpr int kLowInDegree = 2;
inline constexpr int kHighInDegree = 7;

std::vector<int> in_degrees(const MultiGraph& g, const Orientation& o);

// True iff every in-degree is 2 or 7. Throws on misaligned lengths.
bool verify_orientation(const MultiGraph& g, const Orientation& o);

// Number of vertices that must take the low in-degree so the in-degrees can
// sum to the edge count; empty when no integer solution exists.
std::optional<int> low_indegree_count(const MultiGraph& g);

// Orientation with in-degree(v) == target[v] for every v, if one exists.
// Loops consume one unit of their vertex's budget up front; the rest is a
// unit-capacity flow problem (edge node -> endpoint, endpoint -> sink).
std::optional<Orientation> orient_with_targets(const MultiGraph& g,
                                               const std::vector<int>& target);

// target 2 on s, 7 elsewhere; |s| must solve the in-degree sum.
std::optional<Orientation> feasible_with_inset(const MultiGraph& g, const InSet& s);

struct SolverOptions {
  std::uint64_t seed = 0;
  int max_restarts = 50;
  int max_flips = 0;  // 0 means 10 * n
};

// Seeded local search over in-sets. A returned orientation is always valid;
// empty means the budget ran out, not that no orientation exists (except at
// small n, where the restart schedule covers every in-set).
std::optional<Orientation> find_valid_orientation(const MultiGraph& g,
                                                  const SolverOptions& opts = {});

struct CountOptions {
  int max_n = 6;  // refuse larger instances; the DP cost grows quickly
};

// Exact number of valid orientations, a loop counting as a single symmetric
// choice. Dynamic programming over edges, state = residual in-degree budgets.
OrientationCount count_valid_orientations(const MultiGraph& g, const CountOptions& opts = {});

// Exact number of orientations with in-degree(v) == target[v].
BigInt count_orientations_with_targets(const MultiGraph& g, const std::vector<int>& target);

// Valid orientations at point level: every loop has two point-labelled
// representations with the same in-degrees, so the pairing-model count is
// count_valid_orientations * 2^(number of loops). This is the random variable
// whose moments the moments module computes.
BigInt count_valid_point_orientations(const MultiGraph& g, const CountOptions& opts = {});

// One line "u -> v" per edge, canonical edge order; loops as "u -> u".
std::string to_text(const MultiGraph& g, const Orientation& o);

}  // namespace mod5
