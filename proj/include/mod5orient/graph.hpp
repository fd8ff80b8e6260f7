#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace mod5 {

// A point of the pairing model: slot `slot` of vertex `vertex`.
struct PointId {
  int vertex = 0;
  int slot = 0;

  friend bool operator==(const PointId&, const PointId&) = default;
};

// Perfect matching on the n*d points, n vertices of d slots each.
// Canonical form: each pair stores the lower flat index first and the pair
// list is sorted by that index, so downstream edge numbering is stable.
struct Pairing {
  int n = 0;
  int d = 9;
  std::vector<std::pair<PointId, PointId>> pairs;

  int point_count() const { return n * d; }
  int flat(const PointId& p) const { return p.vertex * d + p.slot; }
  void canonicalize();
  void validate() const;  // throws std::invalid_argument on broken invariants
};

// d-regular multigraph; loops allowed (a loop at v contributes 2 to deg(v)),
// parallel edges kept as separate entries.
struct MultiGraph {
  int n = 0;
  int d = 9;
  std::vector<std::pair<int, int>> edges;  // each entry (u, v) with u <= v

  int edge_count() const { return static_cast<int>(edges.size()); }
  int degree(int v) const;
  std::vector<int> loop_counts() const;
  int total_loops() const;
  bool is_simple() const;
  bool is_connected() const;
  void validate() const;
};

struct CycleCensus {
  int kmax = 0;
  std::vector<std::int64_t> counts;  // counts[k] for 1 <= k <= kmax; counts[0] unused

  std::int64_t at(int k) const { return counts.at(static_cast<std::size_t>(k)); }
};

// Uniformly random perfect matching on the n*d points; deterministic per seed.
// Requires n >= 2 and n*d even.
Pairing sample_pairing(int n, int d, std::uint64_t seed);

// Projects each point pair to its vertex pair. Edge order follows the
// canonical pair order of the pairing.
MultiGraph pairing_to_multigraph(const Pairing& p);

// counts[1] = loops, counts[2] = unordered pairs of parallel edges,
// counts[k >= 3] = edge sets forming a cycle through k distinct vertices.
CycleCensus count_cycles(const MultiGraph& g, int kmax);

// Global minimum edge cut (Stoer-Wagner on the collapsed weighted graph).
// Loops cross no cut and are ignored. Returns 0 iff the graph is disconnected.
int edge_connectivity(const MultiGraph& g);

MultiGraph complete_graph(int n);
// Two vertices joined by `multiplicity` parallel edges.
MultiGraph banana_graph(int multiplicity);

// Text formats.  Graph: first line "n d", then one line "u v" per edge.
// Pairing: one line "u:i v:j" per pair.
std::string to_text(const MultiGraph& g);
std::string to_text(const Pairing& p);
MultiGraph parse_graph(std::istream& in);
MultiGraph parse_graph(const std::string& text);
Pairing parse_pairing(std::istream& in, int n, int d);

}  // namespace mod5
