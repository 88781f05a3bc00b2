#pragma once

// Greedy streak selection: repeatedly take a longest remaining streak of
// length >= k, drop everything overlapping it, and keep going. The streak
// index maintains, under edge removals, the decomposition of the live graph
// into streaks grouped by length, so a whole run costs O(nA*nB).

#include <limits>
#include <string>
#include <vector>

#include "duomap/core.hpp"
#include "duomap/errors.hpp"

namespace duomap {

struct GreedyStep {
  int step = 0;            // 1-based
  Streak chosen;           // a longest live streak at selection time
  std::vector<Edge> removed;  // everything removed this step, chosen edges included
};

struct GreedyTrace {
  std::vector<GreedyStep> steps;
};

struct GreedyStats {
  long long removals = 0;          // edge removals, <= |E|
  long long relocations = 0;       // streak moves between size groups, <= 2|E|
  long long group_scan_steps = 0;  // high-water pointer decrements
  long long selection_scan = 0;    // streaks inspected while picking lexicographic minima
};

struct GreedyResult {
  ConsecutiveMatching matching;
  DuoGraph residual;  // input minus chosen streaks and everything overlapping them
  GreedyTrace trace;
  GreedyStats stats;
};

// Live-graph streak decomposition with O(1) amortized edge removal.
//
// Edges are doubly linked within their streak and each stores its owning
// streak. Streaks live in size groups D_s (intrusive doubly linked lists).
// Removal shrinks a streak or splits it in two; lengths come from the first
// and last edge in O(1). On a split the smaller part is relinked to a fresh
// record so total owner updates stay O(m log m).
class StreakIndex {
 public:
  explicit StreakIndex(const DuoGraph& g)
      : edges_(g.edges()), max_len_(std::max(1, std::min(g.a_nodes(), g.b_nodes()))) {
    const int m = static_cast<int>(edges_.size());
    prev_.assign(static_cast<std::size_t>(m), -1);
    next_.assign(static_cast<std::size_t>(m), -1);
    owner_.assign(static_cast<std::size_t>(m), -1);
    live_.assign(static_cast<std::size_t>(m), true);

    groups_.assign(static_cast<std::size_t>(max_len_) + 1, -1);

    // Edges arrive sorted by (i, j); a streak predecessor (i-1, j-1) sits in
    // the previous row, so a two-pointer sweep over adjacent rows finds all
    // predecessor links in O(m) total.
    for (int i = 1; i <= g.a_nodes(); ++i) {
      const auto row = g.at_a(i);
      const auto prev_row = g.at_a(i - 1);
      const int base = g.a_offset(i);
      const int prev_base = i > 1 ? g.a_offset(i - 1) : 0;
      int cursor = 0;
      for (int x = 0; x < static_cast<int>(row.size()); ++x) {
        const int e = base + x;
        const int want = row[static_cast<std::size_t>(x)].j - 1;
        while (cursor < static_cast<int>(prev_row.size()) && prev_row[static_cast<std::size_t>(cursor)].j < want)
          ++cursor;
        if (cursor < static_cast<int>(prev_row.size()) && prev_row[static_cast<std::size_t>(cursor)].j == want) {
          const int p = prev_base + cursor;
          next_[static_cast<std::size_t>(p)] = e;
          prev_[static_cast<std::size_t>(e)] = p;
          const int s = owner_[static_cast<std::size_t>(p)];
          owner_[static_cast<std::size_t>(e)] = s;
          recs_[static_cast<std::size_t>(s)].last = e;
        } else {
          owner_[static_cast<std::size_t>(e)] = new_record(e, e);
        }
      }
    }
    for (int s = 0; s < static_cast<int>(recs_.size()); ++s) group_insert(s);
    live_edges_ = m;
  }

  int live_edge_count() const { return live_edges_; }
  bool edge_live(Edge e) const {
    const int id = id_lookup(e);
    return id >= 0 && live_[static_cast<std::size_t>(id)];
  }

  // Largest possible streak length for this instance (group array bound).
  int max_length() const { return max_len_; }

  bool group_empty(int len) const { return groups_[static_cast<std::size_t>(len)] < 0; }

  // Lexicographically smallest (p, q) streak in the length-len group.
  // scanned, if given, accumulates the number of records inspected.
  Streak group_min(int len, long long* scanned = nullptr) const {
    int best = -1;
    for (int s = groups_[static_cast<std::size_t>(len)]; s >= 0; s = recs_[static_cast<std::size_t>(s)].gnext) {
      if (scanned) ++*scanned;
      if (best < 0 || first_edge(s) < first_edge(best)) best = s;
    }
    return to_streak(best);
  }

  // All live streaks, sorted by (p, q). For tests and fresh rescans.
  std::vector<Streak> live_streaks() const {
    std::vector<Streak> out;
    for (int s = 0; s < static_cast<int>(recs_.size()); ++s)
      if (recs_[static_cast<std::size_t>(s)].alive) out.push_back(to_streak(s));
    std::sort(out.begin(), out.end());
    return out;
  }

  Streak streak_of(Edge e) const {
    const int id = id_lookup(e);
    if (id < 0 || !live_[static_cast<std::size_t>(id)]) throw EdgeAlreadyRemoved("edge is not live");
    return to_streak(owner_[static_cast<std::size_t>(id)]);
  }

  // Removes a live edge; its streak shrinks or splits, and the affected
  // record(s) are relocated to the right size groups.
  void remove_edge(Edge e) {
    const int id = id_lookup(e);
    if (id < 0) throw EdgeAlreadyRemoved("edge does not exist");
    remove_edge_id(id);
  }

  void remove_edge_id(int e) {
    if (!live_[static_cast<std::size_t>(e)])
      throw EdgeAlreadyRemoved("edge (" + std::to_string(edges_[static_cast<std::size_t>(e)].i) + "," +
                               std::to_string(edges_[static_cast<std::size_t>(e)].j) + ") already removed");
    live_[static_cast<std::size_t>(e)] = false;
    --live_edges_;
    ++stats.removals;

    const int s = owner_[static_cast<std::size_t>(e)];
    Rec& rec = recs_[static_cast<std::size_t>(s)];
    const int pe = prev_[static_cast<std::size_t>(e)];
    const int ne = next_[static_cast<std::size_t>(e)];

    if (rec.first == e && rec.last == e) {
      group_erase(s);
      rec.alive = false;
      return;
    }
    if (rec.first == e) {
      group_erase(s);
      rec.first = ne;
      prev_[static_cast<std::size_t>(ne)] = -1;
      group_insert(s);
      ++stats.relocations;
      return;
    }
    if (rec.last == e) {
      group_erase(s);
      rec.last = pe;
      next_[static_cast<std::size_t>(pe)] = -1;
      group_insert(s);
      ++stats.relocations;
      return;
    }

    // Middle removal: split. The old record keeps the longer part; the
    // shorter part is rewired to a fresh record.
    const int left_len = rec_len(rec.first, pe);
    const int right_len = rec_len(ne, rec.last);
    next_[static_cast<std::size_t>(pe)] = -1;
    prev_[static_cast<std::size_t>(ne)] = -1;
    group_erase(s);
    int fresh;
    if (left_len <= right_len) {
      fresh = new_record(rec.first, pe);
      recs_[static_cast<std::size_t>(s)].first = ne;
    } else {
      fresh = new_record(ne, recs_[static_cast<std::size_t>(s)].last);
      recs_[static_cast<std::size_t>(s)].last = pe;
    }
    for (int x = recs_[static_cast<std::size_t>(fresh)].first; x >= 0; x = next_[static_cast<std::size_t>(x)])
      owner_[static_cast<std::size_t>(x)] = fresh;
    group_insert(s);
    group_insert(fresh);
    stats.relocations += 2;
  }

  const std::vector<Edge>& edge_array() const { return edges_; }
  bool live_by_id(int e) const { return live_[static_cast<std::size_t>(e)]; }

  GreedyStats stats;

 private:
  struct Rec {
    int first = -1, last = -1;  // edge ids
    int gprev = -1, gnext = -1;
    bool alive = true;
  };

  int id_lookup(Edge e) const {  // binary search in the sorted edge copy
    const auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (it == edges_.end() || *it != e) return -1;
    return static_cast<int>(it - edges_.begin());
  }

  int rec_len(int first, int last) const {
    return edges_[static_cast<std::size_t>(last)].i - edges_[static_cast<std::size_t>(first)].i + 1;
  }
  int length_of(int s) const {
    return rec_len(recs_[static_cast<std::size_t>(s)].first, recs_[static_cast<std::size_t>(s)].last);
  }
  Edge first_edge(int s) const { return edges_[static_cast<std::size_t>(recs_[static_cast<std::size_t>(s)].first)]; }

  Streak to_streak(int s) const {
    const Edge f = first_edge(s);
    return Streak{f.i - 1, f.j - 1, length_of(s)};
  }

  int new_record(int first, int last) {
    recs_.push_back(Rec{first, last, -1, -1, true});
    return static_cast<int>(recs_.size()) - 1;
  }

  void group_insert(int s) {
    Rec& rec = recs_[static_cast<std::size_t>(s)];
    const int len = length_of(s);
    rec.gprev = -1;
    rec.gnext = groups_[static_cast<std::size_t>(len)];
    if (rec.gnext >= 0) recs_[static_cast<std::size_t>(rec.gnext)].gprev = s;
    groups_[static_cast<std::size_t>(len)] = s;
  }

  void group_erase(int s) {
    Rec& rec = recs_[static_cast<std::size_t>(s)];
    const int len = length_of(s);
    if (rec.gprev >= 0)
      recs_[static_cast<std::size_t>(rec.gprev)].gnext = rec.gnext;
    else
      groups_[static_cast<std::size_t>(len)] = rec.gnext;
    if (rec.gnext >= 0) recs_[static_cast<std::size_t>(rec.gnext)].gprev = rec.gprev;
    rec.gprev = rec.gnext = -1;
  }

  std::vector<Edge> edges_;
  int max_len_ = 1;
  std::vector<int> prev_, next_, owner_;
  std::vector<bool> live_;
  std::vector<Rec> recs_;
  std::vector<int> groups_;  // head record per length
  int live_edges_ = 0;
};

inline StreakIndex initial_streak_scan(const DuoGraph& g) { return StreakIndex(g); }

// Greedy(k): while the live graph has a streak of length >= k, take a longest
// one (ties: smallest (p, q)), add it to the solution and remove every edge
// overlapping it. Returns the solution, the residual graph and a trace.
inline GreedyResult greedy(const DuoGraph& g, int k) {
  if (k < 1) throw ParameterError("greedy threshold k must be >= 1");
  StreakIndex idx(g);

  std::vector<Edge> taken;
  GreedyTrace trace;
  int high = idx.max_length();

  while (true) {
    while (high >= k && idx.group_empty(high)) {
      --high;
      ++idx.stats.group_scan_steps;
    }
    if (high < k) break;

    const Streak s = idx.group_min(high, &idx.stats.selection_scan);
    GreedyStep step;
    step.step = static_cast<int>(trace.steps.size()) + 1;
    step.chosen = s;

    for (int d = 1; d <= s.len; ++d) taken.push_back(Edge{s.p + d, s.q + d});

    // Everything overlapping s ends in one of these node ranges (the chosen
    // edges included, since an edge overlaps itself).
    for (int i = std::max(1, s.p); i <= std::min(g.a_nodes(), s.p + s.len + 1); ++i) {
      const auto row = g.at_a(i);
      const int base = g.a_offset(i);
      for (int x = 0; x < static_cast<int>(row.size()); ++x)
        if (idx.live_by_id(base + x)) {
          idx.remove_edge_id(base + x);
          step.removed.push_back(row[static_cast<std::size_t>(x)]);
        }
    }
    for (int j = std::max(1, s.q); j <= std::min(g.b_nodes(), s.q + s.len + 1); ++j) {
      const auto row = g.at_b(j);
      for (int x = 0; x < static_cast<int>(row.size()); ++x) {
        const int id = g.b_id(j, x);
        if (idx.live_by_id(id)) {
          idx.remove_edge_id(id);
          step.removed.push_back(row[static_cast<std::size_t>(x)]);
        }
      }
    }
    trace.steps.push_back(std::move(step));
  }

  std::vector<Edge> survivors;
  survivors.reserve(static_cast<std::size_t>(idx.live_edge_count()));
  for (int e = 0; e < static_cast<int>(idx.edge_array().size()); ++e)
    if (idx.live_by_id(e)) survivors.push_back(idx.edge_array()[static_cast<std::size_t>(e)]);

  GreedyResult out{ConsecutiveMatching(g.a_nodes(), g.b_nodes(), std::move(taken)),
                   DuoGraph(g.a_nodes(), g.b_nodes(), std::move(survivors)), std::move(trace), idx.stats};
  return out;
}

}  // namespace duomap
