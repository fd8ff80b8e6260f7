#include "mod5orient/orientation.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "mod5orient/rng.hpp"

namespace mod5 {

std::vector<int> in_degrees(const MultiGraph& g, const Orientation& o) {
  if (o.heads.size() != g.edges.size())
    throw std::invalid_argument("in_degrees: orientation not aligned with graph");
  std::vector<int> indeg(static_cast<std::size_t>(g.n), 0);
  for (std::size_t j = 0; j < g.edges.size(); ++j) {
    const auto [u, v] = g.edges[j];
    if (u == v) {
      ++indeg[static_cast<std::size_t>(u)];  // loop: one in, one out
    } else {
      ++indeg[static_cast<std::size_t>(o.heads[j] ? v : u)];
    }
  }
  return indeg;
}

bool verify_orientation(const MultiGraph& g, const Orientation& o) {
  for (int deg : in_degrees(g, o)) {
    if (deg != kLowInDegree && deg != kHighInDegree) return false;
  }
  return true;
}

std::optional<int> low_indegree_count(const MultiGraph& g) {
  // a vertices at in-degree 2, n-a at 7, summing to the edge count m:
  // 2a + 7(n-a) = m  =>  a = (7n - m) / 5.
  const std::int64_t m = g.edge_count();
  const std::int64_t num = 7 * static_cast<std::int64_t>(g.n) - m;
  if (num < 0 || num % 5 != 0) return std::nullopt;
  const std::int64_t a = num / 5;
  if (a > g.n) return std::nullopt;
  return static_cast<int>(a);
}

namespace {

// Dinic max-flow, deterministic. Small networks only.
class Dinic {
 public:
  explicit Dinic(int nodes) : head_(static_cast<std::size_t>(nodes), -1), level_(nodes), it_(nodes) {}

  void add_edge(int from, int to, int cap) {
    edges_.push_back({to, head_[static_cast<std::size_t>(from)], cap});
    head_[static_cast<std::size_t>(from)] = static_cast<int>(edges_.size()) - 1;
    edges_.push_back({from, head_[static_cast<std::size_t>(to)], 0});
    head_[static_cast<std::size_t>(to)] = static_cast<int>(edges_.size()) - 1;
  }

  int max_flow(int s, int t) {
    int flow = 0;
    while (bfs(s, t)) {
      std::fill(it_.begin(), it_.end(), 0);
      for (std::size_t v = 0; v < it_.size(); ++v) it_[v] = head_[v];
      while (int pushed = dfs(s, t, std::numeric_limits<int>::max())) flow += pushed;
    }
    return flow;
  }

  // Remaining capacity of forward edge #i (edges are added in pairs).
  int residual(int i) const { return edges_[static_cast<std::size_t>(i)].cap; }

 private:
  struct Edge {
    int to, next, cap;
  };

  bool bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::vector<int> queue{s};
    level_[static_cast<std::size_t>(s)] = 0;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      const int v = queue[qi];
      for (int e = head_[static_cast<std::size_t>(v)]; e != -1; e = edges_[static_cast<std::size_t>(e)].next) {
        const auto& edge = edges_[static_cast<std::size_t>(e)];
        if (edge.cap > 0 && level_[static_cast<std::size_t>(edge.to)] < 0) {
          level_[static_cast<std::size_t>(edge.to)] = level_[static_cast<std::size_t>(v)] + 1;
          queue.push_back(edge.to);
        }
      }
    }
    return level_[static_cast<std::size_t>(t)] >= 0;
  }

  int dfs(int v, int t, int limit) {
    if (v == t || limit == 0) return limit;
    for (int& e = it_[static_cast<std::size_t>(v)]; e != -1; e = edges_[static_cast<std::size_t>(e)].next) {
      auto& edge = edges_[static_cast<std::size_t>(e)];
      if (edge.cap > 0 && level_[static_cast<std::size_t>(edge.to)] == level_[static_cast<std::size_t>(v)] + 1) {
        const int pushed = dfs(edge.to, t, std::min(limit, edge.cap));
        if (pushed > 0) {
          edge.cap -= pushed;
          edges_[static_cast<std::size_t>(e ^ 1)].cap += pushed;
          return pushed;
        }
      }
    }
    return 0;
  }

  std::vector<int> head_;
  std::vector<int> level_;
  std::vector<int> it_;
  std::vector<Edge> edges_;
};

struct FlowProblem {
  std::vector<int> nonloop_edges;  // indices into g.edges
  std::vector<int> residual_target;  // per vertex, after loops are deducted
  bool locally_feasible = true;
  int violation = 0;  // how far loop budgets are out of range, for search scoring
};

FlowProblem make_flow_problem(const MultiGraph& g, const std::vector<int>& target) {
  FlowProblem fp;
  fp.residual_target.assign(static_cast<std::size_t>(g.n), 0);
  std::vector<int> nonloop_deg(static_cast<std::size_t>(g.n), 0);
  const auto loops = g.loop_counts();
  for (std::size_t j = 0; j < g.edges.size(); ++j) {
    const auto [u, v] = g.edges[j];
    if (u != v) {
      fp.nonloop_edges.push_back(static_cast<int>(j));
      ++nonloop_deg[static_cast<std::size_t>(u)];
      ++nonloop_deg[static_cast<std::size_t>(v)];
    }
  }
  for (int v = 0; v < g.n; ++v) {
    const int want = target[static_cast<std::size_t>(v)] - loops[static_cast<std::size_t>(v)];
    const int lo = 0, hi = nonloop_deg[static_cast<std::size_t>(v)];
    if (want < lo) {
      fp.locally_feasible = false;
      fp.violation += lo - want;
      fp.residual_target[static_cast<std::size_t>(v)] = lo;
    } else if (want > hi) {
      fp.locally_feasible = false;
      fp.violation += want - hi;
      fp.residual_target[static_cast<std::size_t>(v)] = hi;
    } else {
      fp.residual_target[static_cast<std::size_t>(v)] = want;
    }
  }
  return fp;
}

// Returns (deficiency, orientation if deficiency == 0 and requested).
std::pair<int, std::optional<Orientation>> solve_flow(const MultiGraph& g,
                                                      const std::vector<int>& target,
                                                      bool want_orientation) {
  const FlowProblem fp = make_flow_problem(g, target);
  const int m = static_cast<int>(fp.nonloop_edges.size());
  // nodes: 0 = source, 1..m = edge nodes, m+1..m+n = vertices, m+n+1 = sink
  const int source = 0, sink = m + g.n + 1;
  Dinic dinic(m + g.n + 2);
  std::vector<std::pair<int, int>> choice_arcs(static_cast<std::size_t>(m));  // arc ids (to u, to v)
  for (int idx = 0; idx < m; ++idx) {
    const auto [u, v] = g.edges[static_cast<std::size_t>(fp.nonloop_edges[static_cast<std::size_t>(idx)])];
    dinic.add_edge(source, 1 + idx, 1);
    const int arc_u = 2 * (idx * 3 + 1);  // three arc pairs per edge node, see add order
    dinic.add_edge(1 + idx, m + 1 + u, 1);
    dinic.add_edge(1 + idx, m + 1 + v, 1);
    choice_arcs[static_cast<std::size_t>(idx)] = {arc_u, arc_u + 2};
  }
  for (int v = 0; v < g.n; ++v) {
    dinic.add_edge(m + 1 + v, sink, fp.residual_target[static_cast<std::size_t>(v)]);
  }
  const int flow = dinic.max_flow(source, sink);
  const int deficiency = (m - flow) + fp.violation;
  if (deficiency != 0 || !want_orientation || !fp.locally_feasible)
    return {deficiency, std::nullopt};

  Orientation o;
  o.heads.assign(g.edges.size(), 0);
  for (int idx = 0; idx < m; ++idx) {
    const int j = fp.nonloop_edges[static_cast<std::size_t>(idx)];
    const auto [arc_u, arc_v] = choice_arcs[static_cast<std::size_t>(idx)];
    // the saturated arc names the head endpoint
    if (dinic.residual(arc_u) == 0) {
      o.heads[static_cast<std::size_t>(j)] = 0;
    } else if (dinic.residual(arc_v) == 0) {
      o.heads[static_cast<std::size_t>(j)] = 1;
    } else {
      throw std::logic_error("solve_flow: unit of flow lost");
    }
  }
  return {0, o};
}

std::vector<int> targets_from_inset(const MultiGraph& g, const InSet& s) {
  std::vector<int> target(static_cast<std::size_t>(g.n), kHighInDegree);
  for (int v : s.members) {
    if (v < 0 || v >= g.n) throw std::invalid_argument("in-set member out of range");
    target[static_cast<std::size_t>(v)] = kLowInDegree;
  }
  return target;
}

}  // namespace

std::optional<Orientation> orient_with_targets(const MultiGraph& g,
                                               const std::vector<int>& target) {
  if (static_cast<int>(target.size()) != g.n)
    throw std::invalid_argument("orient_with_targets: target size mismatch");
  const std::int64_t total = std::accumulate(target.begin(), target.end(), std::int64_t(0));
  if (total != g.edge_count()) return std::nullopt;
  auto [deficiency, orientation] = solve_flow(g, target, /*want_orientation=*/true);
  (void)deficiency;
  return orientation;
}

std::optional<Orientation> feasible_with_inset(const MultiGraph& g, const InSet& s) {
  const auto expected = low_indegree_count(g);
  if (!expected || static_cast<int>(s.members.size()) != *expected)
    throw std::invalid_argument("feasible_with_inset: in-set has the wrong size");
  return orient_with_targets(g, targets_from_inset(g, s));
}

std::optional<Orientation> find_valid_orientation(const MultiGraph& g, const SolverOptions& opts) {
  const auto a_opt = low_indegree_count(g);
  if (!a_opt) return std::nullopt;
  const int a = *a_opt;
  const int n = g.n;

  // A vertex with l loops can only reach in-degrees in [l, deg - l]; for
  // 9-regular graphs, 3+ loops rule out both 2 and 7.
  {
    const auto loops = g.loop_counts();
    for (int v = 0; v < n; ++v) {
      const int l = loops[static_cast<std::size_t>(v)];
      const int hi = g.degree(v) - l;
      const bool low_ok = kLowInDegree >= l && kLowInDegree <= hi;
      const bool high_ok = kHighInDegree >= l && kHighInDegree <= hi;
      if (!low_ok && !high_ok) return std::nullopt;
    }
  }

  const int max_flips = opts.max_flips > 0 ? opts.max_flips : 10 * n;

  // When the in-set space fits in the restart budget, sweep it exhaustively:
  // a miss then proves there is no valid orientation.
  const BigInt inset_space = binomial(n, a);
  if (inset_space <= opts.max_restarts) {
    std::vector<int> mask(static_cast<std::size_t>(n), 0);
    std::fill(mask.begin(), mask.begin() + a, 1);
    // iterate combinations in lexicographic order
    std::vector<int> comb(static_cast<std::size_t>(a));
    std::iota(comb.begin(), comb.end(), 0);
    while (true) {
      std::vector<int> target(static_cast<std::size_t>(n), kHighInDegree);
      for (int v : comb) target[static_cast<std::size_t>(v)] = kLowInDegree;
      auto [deficiency, orientation] = solve_flow(g, target, true);
      if (deficiency == 0 && orientation) return orientation;
      // next combination
      int i = a - 1;
      while (i >= 0 && comb[static_cast<std::size_t>(i)] == n - a + i) --i;
      if (i < 0) break;
      ++comb[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < a; ++j)
        comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
    }
    return std::nullopt;
  }

  Rng rng(opts.seed);
  for (int restart = 0; restart < opts.max_restarts; ++restart) {
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    std::vector<char> low(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < a; ++i) low[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = 1;

    auto score_of = [&](const std::vector<char>& mask) {
      std::vector<int> target(static_cast<std::size_t>(n));
      for (int v = 0; v < n; ++v)
        target[static_cast<std::size_t>(v)] = mask[static_cast<std::size_t>(v)] ? kLowInDegree : kHighInDegree;
      return solve_flow(g, target, false).first;
    };

    int score = score_of(low);
    int flips = 0;
    while (score > 0 && flips < max_flips) {
      // first-improvement over a freshly shuffled swap neighbourhood
      std::vector<int> ins, outs;
      for (int v = 0; v < n; ++v) (low[static_cast<std::size_t>(v)] ? ins : outs).push_back(v);
      rng.shuffle(ins);
      rng.shuffle(outs);
      bool improved = false;
      for (int vi : ins) {
        for (int vo : outs) {
          low[static_cast<std::size_t>(vi)] = 0;
          low[static_cast<std::size_t>(vo)] = 1;
          const int next = score_of(low);
          if (next < score) {
            score = next;
            ++flips;
            improved = true;
            break;
          }
          low[static_cast<std::size_t>(vi)] = 1;
          low[static_cast<std::size_t>(vo)] = 0;
        }
        if (improved) break;
      }
      if (!improved) break;  // stagnation: restart
    }
    if (score == 0) {
      std::vector<int> target(static_cast<std::size_t>(n));
      for (int v = 0; v < n; ++v)
        target[static_cast<std::size_t>(v)] = low[static_cast<std::size_t>(v)] ? kLowInDegree : kHighInDegree;
      auto [deficiency, orientation] = solve_flow(g, target, true);
      if (deficiency == 0 && orientation) return orientation;
    }
  }
  return std::nullopt;
}

BigInt count_orientations_with_targets(const MultiGraph& g, const std::vector<int>& target) {
  if (static_cast<int>(target.size()) != g.n)
    throw std::invalid_argument("count_orientations_with_targets: target size mismatch");
  if (g.edge_count() > 62)
    throw std::invalid_argument("count_orientations_with_targets: too many edges for 64-bit DP counters");
  const std::int64_t total = std::accumulate(target.begin(), target.end(), std::int64_t(0));
  if (total != g.edge_count()) return 0;

  const auto loops = g.loop_counts();
  std::vector<int> residual(static_cast<std::size_t>(g.n));
  std::vector<int> remaining(static_cast<std::size_t>(g.n), 0);
  std::vector<int> nonloop;
  for (std::size_t j = 0; j < g.edges.size(); ++j) {
    const auto [u, v] = g.edges[j];
    if (u != v) {
      nonloop.push_back(static_cast<int>(j));
      ++remaining[static_cast<std::size_t>(u)];
      ++remaining[static_cast<std::size_t>(v)];
    }
  }
  for (int v = 0; v < g.n; ++v) {
    const int want = target[static_cast<std::size_t>(v)] - loops[static_cast<std::size_t>(v)];
    if (want < 0 || want > remaining[static_cast<std::size_t>(v)]) return 0;
    residual[static_cast<std::size_t>(v)] = want;
  }
  if (g.n > 15) throw std::invalid_argument("count_orientations_with_targets: n too large for packed state");

  // DP over non-loop edges; state packs one 4-bit residual per vertex.
  auto pack_shift = [](int v) { return 4 * v; };
  std::uint64_t start = 0;
  for (int v = 0; v < g.n; ++v)
    start |= static_cast<std::uint64_t>(residual[static_cast<std::size_t>(v)]) << pack_shift(v);

  std::unordered_map<std::uint64_t, std::uint64_t> states{{start, 1}};
  std::unordered_map<std::uint64_t, std::uint64_t> next;
  for (int j : nonloop) {
    const auto [u, v] = g.edges[static_cast<std::size_t>(j)];
    --remaining[static_cast<std::size_t>(u)];
    --remaining[static_cast<std::size_t>(v)];
    next.clear();
    for (const auto& [key, cnt] : states) {
      const int ru = static_cast<int>((key >> pack_shift(u)) & 0xF);
      const int rv = static_cast<int>((key >> pack_shift(v)) & 0xF);
      // orient toward u
      if (ru > 0 && ru - 1 <= remaining[static_cast<std::size_t>(u)] &&
          rv <= remaining[static_cast<std::size_t>(v)]) {
        next[key - (std::uint64_t(1) << pack_shift(u))] += cnt;
      }
      // orient toward v
      if (rv > 0 && rv - 1 <= remaining[static_cast<std::size_t>(v)] &&
          ru <= remaining[static_cast<std::size_t>(u)]) {
        next[key - (std::uint64_t(1) << pack_shift(v))] += cnt;
      }
    }
    states.swap(next);
    if (states.empty()) return 0;
  }
  const auto it = states.find(0);
  return it == states.end() ? BigInt(0) : BigInt(it->second);
}

OrientationCount count_valid_orientations(const MultiGraph& g, const CountOptions& opts) {
  if (g.n > opts.max_n) {
    throw std::invalid_argument("count_valid_orientations: n = " + std::to_string(g.n) +
                                " exceeds the exact-counting limit " + std::to_string(opts.max_n));
  }
  if (g.edge_count() > 62)
    throw std::invalid_argument("count_valid_orientations: too many edges for 64-bit DP counters");
  if (g.n > 12)
    throw std::invalid_argument("count_valid_orientations: too many vertices for packed DP state");
  const auto a_opt = low_indegree_count(g);
  if (!a_opt) return {BigInt(0)};
  const std::uint64_t a = static_cast<std::uint64_t>(*a_opt);
  const int n = g.n;
  const int m = g.edge_count();

  // One sweep over the edges covers every in-degree-2/7 split at once. State:
  // a 4-bit accumulated in-degree per unfinished vertex plus a counter of
  // vertices finished at the low in-degree. A vertex is projected out at its
  // last incident edge, where its in-degree must have landed on 2 or 7.
  const auto loops = g.loop_counts();
  std::vector<int> remaining(static_cast<std::size_t>(n), 0);
  std::vector<int> last_touch(static_cast<std::size_t>(n), -1);
  for (int j = 0; j < m; ++j) {
    const auto [u, v] = g.edges[static_cast<std::size_t>(j)];
    last_touch[static_cast<std::size_t>(u)] = j;
    last_touch[static_cast<std::size_t>(v)] = j;
    if (u != v) {
      ++remaining[static_cast<std::size_t>(u)];
      ++remaining[static_cast<std::size_t>(v)];
    }
  }
  const int low_shift = 4 * n;

  auto reachable = [](int indeg, int rem) {
    return (indeg <= kLowInDegree && kLowInDegree <= indeg + rem) ||
           (indeg <= kHighInDegree && kHighInDegree <= indeg + rem);
  };

  std::uint64_t start = 0;
  for (int v = 0; v < n; ++v) {
    const int l = loops[static_cast<std::size_t>(v)];
    if (!reachable(l, remaining[static_cast<std::size_t>(v)])) return {BigInt(0)};
    start |= static_cast<std::uint64_t>(l) << (4 * v);
  }

  std::unordered_map<std::uint64_t, std::uint64_t> states{{start, 1}}, next;
  auto finalize = [&](int j) {
    for (int w = 0; w < n; ++w) {
      if (last_touch[static_cast<std::size_t>(w)] != j) continue;
      next.clear();
      const std::uint64_t nibble = std::uint64_t(0xF) << (4 * w);
      for (const auto& [key, cnt] : states) {
        const int indeg = static_cast<int>((key >> (4 * w)) & 0xF);
        const std::uint64_t low_count = key >> low_shift;
        if (indeg == kLowInDegree && low_count < a) {
          next[(key & ~nibble) + (std::uint64_t(1) << low_shift)] += cnt;
        } else if (indeg == kHighInDegree) {
          next[key & ~nibble] += cnt;
        }
      }
      states.swap(next);
    }
  };

  for (int j = 0; j < m; ++j) {
    const auto [u, v] = g.edges[static_cast<std::size_t>(j)];
    if (u != v) {
      --remaining[static_cast<std::size_t>(u)];
      --remaining[static_cast<std::size_t>(v)];
      const int rem_u = remaining[static_cast<std::size_t>(u)];
      const int rem_v = remaining[static_cast<std::size_t>(v)];
      next.clear();
      for (const auto& [key, cnt] : states) {
        const int iu = static_cast<int>((key >> (4 * u)) & 0xF);
        const int iv = static_cast<int>((key >> (4 * v)) & 0xF);
        if (reachable(iu + 1, rem_u) && reachable(iv, rem_v)) {
          next[key + (std::uint64_t(1) << (4 * u))] += cnt;
        }
        if (reachable(iv + 1, rem_v) && reachable(iu, rem_u)) {
          next[key + (std::uint64_t(1) << (4 * v))] += cnt;
        }
      }
      states.swap(next);
    }
    finalize(j);
    if (states.empty()) return {BigInt(0)};
  }

  const auto it = states.find(a << low_shift);
  return {it == states.end() ? BigInt(0) : BigInt(it->second)};
}

BigInt count_valid_point_orientations(const MultiGraph& g, const CountOptions& opts) {
  return count_valid_orientations(g, opts).value << g.total_loops();
}

std::string to_text(const MultiGraph& g, const Orientation& o) {
  if (o.heads.size() != g.edges.size())
    throw std::invalid_argument("to_text: orientation not aligned with graph");
  std::ostringstream out;
  for (std::size_t j = 0; j < g.edges.size(); ++j) {
    const auto [u, v] = g.edges[j];
    const int tail = o.heads[j] ? u : v;
    const int head = o.heads[j] ? v : u;
    out << tail << " -> " << head << "\n";
  }
  return out.str();
}

}  // namespace mod5
