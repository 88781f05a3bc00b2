#pragma once

// Second phase of the 3-approximation, for graphs with no streak of two or
// more edges: merge neighbouring node pairs, find a maximum (ordinary)
// bipartite matching on the merged graph, project it back through witness
// edges, then prune neighbour conflicts. The pruning keeps at least a third
// of the projected edges.

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "duomap/core.hpp"
#include "duomap/errors.hpp"

namespace duomap {

// Bipartite graph over merged node pairs. Merged A-node t covers original
// nodes {2t-1, 2t} (the last one may cover a single node), same on side B.
struct MergedGraph {
  struct FEdge {
    int t = 0, u = 0;             // merged A / B nodes, 1-based
    std::vector<Edge> witnesses;  // original edges between the pairs, sorted
  };

  int orig_a = 0, orig_b = 0;
  int merged_a = 0, merged_b = 0;
  std::vector<FEdge> fedges;  // sorted by (t, u)
};

inline MergedGraph build_merged(const DuoGraph& g) {
  MergedGraph h;
  h.orig_a = g.a_nodes();
  h.orig_b = g.b_nodes();
  h.merged_a = (g.a_nodes() + 1) / 2;
  h.merged_b = (g.b_nodes() + 1) / 2;

  std::map<std::pair<int, int>, std::vector<Edge>> by_pair;
  for (Edge e : g.edges())  // lex edge order keeps witness lists sorted
    by_pair[{(e.i + 1) / 2, (e.j + 1) / 2}].push_back(e);

  for (auto& [key, wit] : by_pair)
    h.fedges.push_back(MergedGraph::FEdge{key.first, key.second, std::move(wit)});
  return h;
}

// Maximum-cardinality matching on the merged graph via augmenting paths
// (Kuhn's algorithm). Returns the chosen (t, u) pairs sorted by t.
inline std::vector<std::pair<int, int>> max_bipartite_matching(const MergedGraph& h) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(h.merged_a) + 1);
  for (const auto& fe : h.fedges) adj[static_cast<std::size_t>(fe.t)].push_back(fe.u);

  std::vector<int> match_b(static_cast<std::size_t>(h.merged_b) + 1, 0);
  std::vector<int> stamp(static_cast<std::size_t>(h.merged_b) + 1, 0);
  int round = 0;

  auto augment = [&](auto&& self, int t) -> bool {
    for (int u : adj[static_cast<std::size_t>(t)]) {
      if (stamp[static_cast<std::size_t>(u)] == round) continue;
      stamp[static_cast<std::size_t>(u)] = round;
      if (match_b[static_cast<std::size_t>(u)] == 0 || self(self, match_b[static_cast<std::size_t>(u)])) {
        match_b[static_cast<std::size_t>(u)] = t;
        return true;
      }
    }
    return false;
  };

  for (int t = 1; t <= h.merged_a; ++t) {
    ++round;
    augment(augment, t);
  }

  std::vector<std::pair<int, int>> out;
  for (int u = 1; u <= h.merged_b; ++u)
    if (match_b[static_cast<std::size_t>(u)] != 0) out.emplace_back(match_b[static_cast<std::size_t>(u)], u);
  std::sort(out.begin(), out.end());
  return out;
}

struct PruneStats {
  int max_evictions_per_keep = 0;  // the translation argument caps this at 2
};

// Replace each matched merged edge by its lexicographically smallest witness,
// then process witnesses in lexicographic order: a kept edge evicts surviving
// edges ending in its four neighbour nodes. Two kept edges never share a node
// because the merged matching already separates them.
inline ConsecutiveMatching project_and_prune(const std::vector<std::pair<int, int>>& matched, const MergedGraph& h,
                                             PruneStats* stats = nullptr) {
  std::map<std::pair<int, int>, const MergedGraph::FEdge*> lookup;
  for (const auto& fe : h.fedges) lookup[{fe.t, fe.u}] = &fe;

  std::vector<Edge> projected;
  for (auto [t, u] : matched) {
    const auto it = lookup.find({t, u});
    if (it == lookup.end() || it->second->witnesses.empty())
      throw PreconditionViolated("matched pair has no witness in the merged graph");
    projected.push_back(it->second->witnesses.front());
  }
  std::sort(projected.begin(), projected.end());

  std::vector<bool> alive(projected.size(), true);
  std::vector<Edge> kept;
  for (std::size_t x = 0; x < projected.size(); ++x) {
    if (!alive[x]) continue;
    const Edge e = projected[x];
    kept.push_back(e);
    int evicted = 0;
    for (std::size_t y = 0; y < projected.size(); ++y) {
      if (!alive[y] || y == x) continue;
      const Edge f = projected[y];
      if (f.i == e.i - 1 || f.i == e.i + 1 || f.j == e.j - 1 || f.j == e.j + 1) {
        alive[y] = false;
        ++evicted;
      }
    }
    if (stats && evicted > stats->max_evictions_per_keep) stats->max_evictions_per_keep = evicted;
  }
  return ConsecutiveMatching(h.orig_a, h.orig_b, std::move(kept));
}

// Whole second phase. Requires a graph with no streak of length >= 2; on such
// graphs the result is within a factor 3 of the optimum.
inline ConsecutiveMatching approx3_phase2(const DuoGraph& g, PruneStats* stats = nullptr) {
  for (Edge e : g.edges())
    if (g.contains(Edge{e.i + 1, e.j + 1}))
      throw PreconditionViolated("input has a streak of length >= 2; run greedy(2) first");
  const MergedGraph h = build_merged(g);
  return project_and_prune(max_bipartite_matching(h), h, stats);
}

}  // namespace duomap
