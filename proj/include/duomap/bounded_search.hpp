#pragma once

// Bounded-size local search: repeatedly look for a move that adds at most t
// edges and removes fewer solution edges than it adds. Instead of enumerating
// removal sets, each candidate addition set determines its forced removals
// (solution edges incompatible with an addition); removing anything beyond
// those never helps. Candidate sets are enumerated lexicographically as
// sorted tuples, shorter prefixes first, and internally incompatible sets are
// pruned before they grow.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "duomap/core.hpp"
#include "duomap/errors.hpp"

namespace duomap {

struct ImprovementMove {
  std::vector<Edge> add;     // <= t edges outside the solution
  std::vector<Edge> remove;  // forced removals, strictly fewer than additions
};

struct BoundedSearchStats {
  long long candidates = 0;  // candidate addition sets evaluated
  long long moves = 0;       // improving moves applied
  int rounds = 0;
};

inline constexpr long long kDefaultCandidateBudget = 1'000'000'000;

namespace detail {

struct MoveSearch {
  const std::vector<Edge>& candidates;
  const std::vector<std::vector<Edge>>& conflicts;
  int t;
  long long* counter;
  long long budget;

  std::vector<Edge> chosen;
  std::vector<Edge> removal;

  std::optional<ImprovementMove> find(std::size_t from) {
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

      if (counter) {
        if (++*counter > budget)
          throw BudgetExceeded("candidate budget of " + std::to_string(budget) + " evaluations exhausted");
      }
      if (removal.size() < chosen.size()) return ImprovementMove{chosen, removal};
      if (static_cast<int>(chosen.size()) < t) {
        if (auto move = find(idx + 1)) return move;
      }

      chosen.pop_back();
      removal.resize(removal_mark);
    }
    return std::nullopt;
  }
};

}  // namespace detail

// First improving move in enumeration order, or nullopt at a local optimum.
inline std::optional<ImprovementMove> find_move(const DuoGraph& g, int t, const ConsecutiveMatching& alg,
                                                long long* candidate_counter = nullptr,
                                                long long budget = kDefaultCandidateBudget) {
  if (t < 1) throw ParameterError("move size t must be >= 1");

  std::vector<Edge> candidates;
  for (Edge e : g.edges())
    if (!alg.contains(e)) candidates.push_back(e);

  std::vector<std::vector<Edge>> conflicts(candidates.size());
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const Edge e = candidates[c];
    // Solution edges in conflict with e all end within distance 1 of it.
    for (int i = std::max(1, e.i - 1); i <= std::min(g.a_nodes(), e.i + 1); ++i) {
      const int j = alg.b_of_a(i);
      if (j != 0 && !compatible(Edge{i, j}, e)) conflicts[c].push_back(Edge{i, j});
    }
    for (int j = std::max(1, e.j - 1); j <= std::min(g.b_nodes(), e.j + 1); ++j) {
      const int i = alg.a_of_b(j);
      if (i != 0 && !compatible(Edge{i, j}, e) &&
          std::find(conflicts[c].begin(), conflicts[c].end(), Edge{i, j}) == conflicts[c].end())
        conflicts[c].push_back(Edge{i, j});
    }
  }

  detail::MoveSearch search{candidates, conflicts, t, candidate_counter, budget, {}, {}};
  return search.find(0);
}

// Applies improving moves until none with |E_add| <= t remains. With t = 1
// and an empty start this degenerates to saturating the solution with
// addable edges (a maximal consecutive matching).
inline ConsecutiveMatching bounded_size_improvements(const DuoGraph& g, int t, ConsecutiveMatching start,
                                                     long long budget = kDefaultCandidateBudget,
                                                     BoundedSearchStats* stats = nullptr) {
  if (t < 1) throw ParameterError("move size t must be >= 1");
  long long evaluated = 0;
  ConsecutiveMatching alg = std::move(start);

  while (true) {
    auto move = find_move(g, t, alg, &evaluated, budget);
    if (!move) break;
    std::vector<Edge> next;
    for (Edge e : alg.edges())
      if (std::find(move->remove.begin(), move->remove.end(), e) == move->remove.end()) next.push_back(e);
    next.insert(next.end(), move->add.begin(), move->add.end());
    alg = ConsecutiveMatching(g.a_nodes(), g.b_nodes(), std::move(next));
    if (stats) {
      ++stats->moves;
      ++stats->rounds;
    }
  }
  if (stats) stats->candidates = evaluated;
  return alg;
}

}  // namespace duomap
