#pragma once

// Ground truth for desk-scale instances: exact maximum consecutive matching
// by pruned depth-first search, and an exhaustive local-optimality audit.
// Both refuse instances above a configurable edge cap.

#include <algorithm>
#include <string>
#include <vector>

#include "duomap/core.hpp"
#include "duomap/errors.hpp"

namespace duomap {

struct ExactOptions {
  int edge_cap = 24;
};

namespace detail {

struct ExactSearch {
  const std::vector<Edge>& edges;
  std::vector<Edge> chosen;
  std::vector<Edge> best;

  void run(std::size_t idx) {
    if (chosen.size() + (edges.size() - idx) <= best.size()) return;  // cannot beat best
    if (idx == edges.size()) {
      if (chosen.size() > best.size()) best = chosen;
      return;
    }
    const Edge e = edges[idx];
    bool ok = true;
    for (Edge f : chosen)
      if (!compatible(f, e)) {
        ok = false;
        break;
      }
    if (ok) {
      chosen.push_back(e);
      run(idx + 1);
      chosen.pop_back();
    }
    run(idx + 1);
  }
};

}  // namespace detail

// A maximum-cardinality consecutive matching. Among maxima, the include-first
// DFS over lexicographically sorted edges returns the lexicographically
// smallest edge tuple (strict improvement replaces best, so the first maximum
// found wins).
inline ConsecutiveMatching exact_opt(const DuoGraph& g, ExactOptions opt = {}) {
  if (g.edge_count() > opt.edge_cap)
    throw InstanceTooLarge("exact solver cap is " + std::to_string(opt.edge_cap) + " edges, instance has " +
                           std::to_string(g.edge_count()));
  detail::ExactSearch search{g.edges(), {}, {}};
  search.run(0);
  return ConsecutiveMatching(g.a_nodes(), g.b_nodes(), std::move(search.best));
}

namespace detail {

// Enumerates internally compatible E_add subsets (lexicographic, prefix
// first) and tracks the forced removal set: solution edges incompatible with
// something added. An improving move exists iff some prefix has fewer forced
// removals than additions.
struct AuditSearch {
  const std::vector<Edge>& candidates;              // non-solution edges, sorted
  const std::vector<std::vector<Edge>>& conflicts;  // per candidate: solution edges it clashes with
  int t;

  std::vector<Edge> chosen;
  std::vector<Edge> removal;  // union of conflicts over chosen, unique

  bool improvable(std::size_t from) {
    for (std::size_t idx = from; idx < candidates.size(); ++idx) {
      const Edge e = candidates[idx];
      bool ok = true;
      for (Edge f : chosen)
        if (!compatible(f, e)) {
          ok = false;
          break;
        }
      if (!ok) continue;

      const std::size_t removal_mark = removal.size();
      for (Edge f : conflicts[idx])
        if (std::find(removal.begin(), removal.end(), f) == removal.end()) removal.push_back(f);
      chosen.push_back(e);

      if (removal.size() < chosen.size()) return true;
      if (static_cast<int>(chosen.size()) < t && improvable(idx + 1)) return true;

      chosen.pop_back();
      removal.resize(removal_mark);
    }
    return false;
  }
};

}  // namespace detail

// True iff no move that removes fewer solution edges than it adds (with at
// most t additions) improves alg. Exhaustive, so only for capped instances.
inline bool audit_local_optimum(const DuoGraph& g, const ConsecutiveMatching& alg, int t, ExactOptions opt = {}) {
  if (t < 1) throw ParameterError("audit move size t must be >= 1");
  if (g.edge_count() > opt.edge_cap)
    throw InstanceTooLarge("audit cap is " + std::to_string(opt.edge_cap) + " edges, instance has " +
                           std::to_string(g.edge_count()));
  if (!is_valid(alg, g)) throw InvalidMatching("audit requires a valid solution");

  std::vector<Edge> candidates;
  for (Edge e : g.edges())
    if (!alg.contains(e)) candidates.push_back(e);

  std::vector<std::vector<Edge>> conflicts(candidates.size());
  for (std::size_t c = 0; c < candidates.size(); ++c)
    for (Edge f : alg.edges())
      if (!compatible(f, candidates[c])) conflicts[c].push_back(f);

  detail::AuditSearch search{candidates, conflicts, t, {}, {}};
  return !search.improvable(0);
}

}  // namespace duomap
