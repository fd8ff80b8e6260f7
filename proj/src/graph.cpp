#include "mod5orient/graph.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "mod5orient/rng.hpp"

namespace mod5 {

void Pairing::canonicalize() {
  for (auto& [a, b] : pairs) {
    if (flat(a) > flat(b)) std::swap(a, b);
  }
  std::sort(pairs.begin(), pairs.end(),
            [this](const auto& x, const auto& y) { return flat(x.first) < flat(y.first); });
}

void Pairing::validate() const {
  if (n < 2) throw std::invalid_argument("Pairing: n must be >= 2");
  if (d < 1) throw std::invalid_argument("Pairing: d must be >= 1");
  const int m = point_count();
  if (m % 2 != 0) throw std::invalid_argument("Pairing: n*d must be even");
  if (static_cast<int>(pairs.size()) != m / 2)
    throw std::invalid_argument("Pairing: wrong number of pairs");
  std::vector<char> seen(static_cast<std::size_t>(m), 0);
  for (const auto& [a, b] : pairs) {
    for (const PointId& p : {a, b}) {
      if (p.vertex < 0 || p.vertex >= n || p.slot < 0 || p.slot >= d)
        throw std::invalid_argument("Pairing: point out of range");
      if (seen[static_cast<std::size_t>(flat(p))]++)
        throw std::invalid_argument("Pairing: point used twice");
    }
  }
}

int MultiGraph::degree(int v) const {
  int deg = 0;
  for (const auto& [u, w] : edges) {
    if (u == v) ++deg;
    if (w == v) ++deg;  // a loop hits both branches and counts 2
  }
  return deg;
}

std::vector<int> MultiGraph::loop_counts() const {
  std::vector<int> loops(static_cast<std::size_t>(n), 0);
  for (const auto& [u, v] : edges) {
    if (u == v) ++loops[static_cast<std::size_t>(u)];
  }
  return loops;
}

int MultiGraph::total_loops() const {
  int total = 0;
  for (const auto& [u, v] : edges) {
    if (u == v) ++total;
  }
  return total;
}

bool MultiGraph::is_simple() const {
  std::vector<std::pair<int, int>> sorted = edges;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i].first == sorted[i].second) return false;
    if (i > 0 && sorted[i] == sorted[i - 1]) return false;
  }
  return true;
}

bool MultiGraph::is_connected() const {
  if (n <= 1) return true;
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (const auto& [u, v] : edges) {
    if (u != v) {
      adj[static_cast<std::size_t>(u)].push_back(v);
      adj[static_cast<std::size_t>(v)].push_back(u);
    }
  }
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w : adj[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == n;
}

void MultiGraph::validate() const {
  if (n < 1) throw std::invalid_argument("MultiGraph: n must be >= 1");
  if (static_cast<std::int64_t>(edges.size()) * 2 != static_cast<std::int64_t>(n) * d)
    throw std::invalid_argument("MultiGraph: edge count does not match n*d/2");
  std::vector<int> deg(static_cast<std::size_t>(n), 0);
  for (const auto& [u, v] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n || u > v)
      throw std::invalid_argument("MultiGraph: bad edge");
    deg[static_cast<std::size_t>(u)]++;
    deg[static_cast<std::size_t>(v)]++;
  }
  for (int v = 0; v < n; ++v) {
    if (deg[static_cast<std::size_t>(v)] != d)
      throw std::invalid_argument("MultiGraph: vertex " + std::to_string(v) +
                                  " has degree " + std::to_string(deg[static_cast<std::size_t>(v)]));
  }
}

Pairing sample_pairing(int n, int d, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("sample_pairing: n must be >= 2");
  if (d < 1) throw std::invalid_argument("sample_pairing: d must be >= 1");
  if ((static_cast<std::int64_t>(n) * d) % 2 != 0)
    throw std::invalid_argument("sample_pairing: n*d must be even");

  std::vector<int> points(static_cast<std::size_t>(n) * static_cast<std::size_t>(d));
  std::iota(points.begin(), points.end(), 0);
  Rng rng(seed);
  rng.shuffle(points);

  Pairing p;
  p.n = n;
  p.d = d;
  p.pairs.reserve(points.size() / 2);
  for (std::size_t i = 0; i + 1 < points.size(); i += 2) {
    PointId a{points[i] / d, points[i] % d};
    PointId b{points[i + 1] / d, points[i + 1] % d};
    p.pairs.emplace_back(a, b);
  }
  p.canonicalize();
  return p;
}

MultiGraph pairing_to_multigraph(const Pairing& p) {
  p.validate();
  MultiGraph g;
  g.n = p.n;
  g.d = p.d;
  g.edges.reserve(p.pairs.size());
  for (const auto& [a, b] : p.pairs) {
    g.edges.emplace_back(std::min(a.vertex, b.vertex), std::max(a.vertex, b.vertex));
  }
  return g;
}

namespace {

// Distinct-neighbour adjacency with edge multiplicities.
struct AdjView {
  std::vector<std::vector<std::pair<int, int>>> nbrs;  // (neighbour, multiplicity)

  explicit AdjView(const MultiGraph& g) : nbrs(static_cast<std::size_t>(g.n)) {
    std::vector<std::pair<int, int>> sorted;
    sorted.reserve(g.edges.size());
    for (const auto& e : g.edges) {
      if (e.first != e.second) sorted.push_back(e);
    }
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size();) {
      std::size_t j = i;
      while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
      const int mult = static_cast<int>(j - i);
      const auto [u, v] = sorted[i];
      nbrs[static_cast<std::size_t>(u)].emplace_back(v, mult);
      nbrs[static_cast<std::size_t>(v)].emplace_back(u, mult);
      i = j;
    }
  }

  int multiplicity(int u, int v) const {
    for (const auto& [w, m] : nbrs[static_cast<std::size_t>(u)]) {
      if (w == v) return m;
    }
    return 0;
  }
};

// Enumerates directed closed walks root -> ... -> root of length 3..kmax whose
// intermediate vertices are distinct and > root; each cycle edge set is seen
// once per direction.
void long_cycles_from(const AdjView& adj, int root, int kmax, std::vector<int>& path,
                      std::vector<char>& on_path, std::int64_t mult_product,
                      std::vector<std::int64_t>& counts) {
  const int v = path.back();
  const int len = static_cast<int>(path.size());
  if (len >= 3) {
    const int back = adj.multiplicity(v, root);
    if (back > 0) counts[static_cast<std::size_t>(len)] += mult_product * back;
  }
  if (len == kmax) return;
  for (const auto& [w, m] : adj.nbrs[static_cast<std::size_t>(v)]) {
    if (w <= root || on_path[static_cast<std::size_t>(w)]) continue;
    on_path[static_cast<std::size_t>(w)] = 1;
    path.push_back(w);
    long_cycles_from(adj, root, kmax, path, on_path, mult_product * m, counts);
    path.pop_back();
    on_path[static_cast<std::size_t>(w)] = 0;
  }
}

}  // namespace

CycleCensus count_cycles(const MultiGraph& g, int kmax) {
  if (kmax < 1) throw std::invalid_argument("count_cycles: kmax must be >= 1");
  CycleCensus census;
  census.kmax = kmax;
  census.counts.assign(static_cast<std::size_t>(kmax) + 1, 0);

  census.counts[1] = g.total_loops();

  AdjView adj(g);
  if (kmax >= 2) {
    for (int u = 0; u < g.n; ++u) {
      for (const auto& [v, m] : adj.nbrs[static_cast<std::size_t>(u)]) {
        if (v > u) census.counts[2] += static_cast<std::int64_t>(m) * (m - 1) / 2;
      }
    }
  }
  if (kmax >= 3) {
    std::vector<std::int64_t> directed(static_cast<std::size_t>(kmax) + 1, 0);
    std::vector<int> path;
    std::vector<char> on_path(static_cast<std::size_t>(g.n), 0);
    for (int root = 0; root < g.n; ++root) {
      path.assign(1, root);
      long_cycles_from(adj, root, kmax, path, on_path, 1, directed);
    }
    for (int k = 3; k <= kmax; ++k)
      census.counts[static_cast<std::size_t>(k)] = directed[static_cast<std::size_t>(k)] / 2;
  }
  return census;
}

int edge_connectivity(const MultiGraph& g) {
  if (g.n < 2) return 0;
  if (!g.is_connected()) return 0;

  // Stoer-Wagner minimum cut on the collapsed weighted graph.
  const std::size_t n = static_cast<std::size_t>(g.n);
  std::vector<std::vector<std::int64_t>> w(n, std::vector<std::int64_t>(n, 0));
  for (const auto& [u, v] : g.edges) {
    if (u != v) {
      w[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] += 1;
      w[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] += 1;
    }
  }

  std::vector<int> active(g.n);
  std::iota(active.begin(), active.end(), 0);
  std::int64_t best = std::numeric_limits<std::int64_t>::max();

  while (active.size() > 1) {
    std::vector<std::int64_t> weight_to_a(n, 0);
    std::vector<char> in_a(n, 0);
    int prev = -1, last = -1;
    for (std::size_t step = 0; step < active.size(); ++step) {
      int sel = -1;
      for (int v : active) {
        if (!in_a[static_cast<std::size_t>(v)] &&
            (sel == -1 || weight_to_a[static_cast<std::size_t>(v)] >
                              weight_to_a[static_cast<std::size_t>(sel)])) {
          sel = v;
        }
      }
      if (sel < 0) break;  // unreachable: active is non-empty
      in_a[static_cast<std::size_t>(sel)] = 1;
      prev = last;
      last = sel;
      for (int v : active) {
        if (!in_a[static_cast<std::size_t>(v)])
          weight_to_a[static_cast<std::size_t>(v)] += w[static_cast<std::size_t>(sel)][static_cast<std::size_t>(v)];
      }
    }
    // weight_to_a[last] froze at selection time: it is the cut of the phase
    best = std::min(best, weight_to_a[static_cast<std::size_t>(last)]);
    // merge `last` into `prev`
    for (int v : active) {
      if (v != last && v != prev) {
        w[static_cast<std::size_t>(prev)][static_cast<std::size_t>(v)] +=
            w[static_cast<std::size_t>(last)][static_cast<std::size_t>(v)];
        w[static_cast<std::size_t>(v)][static_cast<std::size_t>(prev)] =
            w[static_cast<std::size_t>(prev)][static_cast<std::size_t>(v)];
      }
    }
    active.erase(std::find(active.begin(), active.end(), last));
  }
  return static_cast<int>(best);
}

MultiGraph complete_graph(int n) {
  MultiGraph g;
  g.n = n;
  g.d = n - 1;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) g.edges.emplace_back(u, v);
  }
  return g;
}

MultiGraph banana_graph(int multiplicity) {
  MultiGraph g;
  g.n = 2;
  g.d = multiplicity;
  for (int i = 0; i < multiplicity; ++i) g.edges.emplace_back(0, 1);
  return g;
}

std::string to_text(const MultiGraph& g) {
  std::ostringstream out;
  out << g.n << " " << g.d << "\n";
  for (const auto& [u, v] : g.edges) out << u << " " << v << "\n";
  return out.str();
}

std::string to_text(const Pairing& p) {
  std::ostringstream out;
  for (const auto& [a, b] : p.pairs) {
    out << a.vertex << ":" << a.slot << " " << b.vertex << ":" << b.slot << "\n";
  }
  return out.str();
}

MultiGraph parse_graph(std::istream& in) {
  MultiGraph g;
  if (!(in >> g.n >> g.d)) throw std::invalid_argument("parse_graph: missing header");
  if (g.n < 1 || g.d < 0) throw std::invalid_argument("parse_graph: bad header");
  const std::int64_t m = static_cast<std::int64_t>(g.n) * g.d / 2;
  if (static_cast<std::int64_t>(g.n) * g.d % 2 != 0)
    throw std::invalid_argument("parse_graph: n*d must be even");
  for (std::int64_t i = 0; i < m; ++i) {
    int u, v;
    if (!(in >> u >> v)) throw std::invalid_argument("parse_graph: truncated edge list");
    if (u < 0 || u >= g.n || v < 0 || v >= g.n)
      throw std::invalid_argument("parse_graph: edge endpoint out of range");
    g.edges.emplace_back(std::min(u, v), std::max(u, v));
  }
  g.validate();
  return g;
}

MultiGraph parse_graph(const std::string& text) {
  std::istringstream in(text);
  return parse_graph(in);
}

Pairing parse_pairing(std::istream& in, int n, int d) {
  Pairing p;
  p.n = n;
  p.d = d;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    int uv, ui, vv, vi;
    char c1, c2;
    std::istringstream ls(line);
    if (!(ls >> uv >> c1 >> ui >> vv >> c2 >> vi) || c1 != ':' || c2 != ':')
      throw std::invalid_argument("parse_pairing: bad line '" + line + "'");
    p.pairs.push_back({PointId{uv, ui}, PointId{vv, vi}});
  }
  p.canonicalize();
  p.validate();
  return p;
}

}  // namespace mod5
