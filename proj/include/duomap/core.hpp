#pragma once

// Vocabulary of Maximum Consecutive Bipartite Matching (MCBM): the duo
// graph, edge overlap/compatibility predicates, consecutive matchings and
// their streak decomposition. Everything downstream builds on this header.
//
// Indices are 1-based on both sides. A DuoGraph is immutable once built;
// algorithms mutate only their own private state.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "duomap/errors.hpp"

namespace duomap {

struct Edge {
  int i = 0;  // A-side node (1-based)
  int j = 0;  // B-side node (1-based)

  friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

// Two edges overlap if they are within distance 1 on either side.
// Reflexive and symmetric.
inline bool edges_overlap(Edge e, Edge f) {
  return std::abs(e.i - f.i) <= 1 || std::abs(e.j - f.j) <= 1;
}

// True iff the two (distinct) edges can coexist in a consecutive matching:
// either they are far apart on both sides, or they are adjacent in the same
// direction on both sides (streak neighbours). Symmetric.
inline bool compatible(Edge e, Edge f) {
  const int di = f.i - e.i;
  const int dj = f.j - e.j;
  if (std::abs(di) > 1 && std::abs(dj) > 1) return true;
  return di == dj && std::abs(di) == 1;
}

// True iff f is (e.i+1, e.j+1) or (e.i-1, e.j-1).
inline bool streak_neighbours(Edge e, Edge f) {
  const int di = f.i - e.i;
  return di == f.j - e.j && std::abs(di) == 1;
}

enum class Side : std::uint8_t { A, B };

struct NodeRef {
  Side side = Side::A;
  int index = 0;

  friend constexpr auto operator<=>(const NodeRef&, const NodeRef&) = default;
};

// A maximal run of consecutive edges (p+d, q+d), d = 1..len.
struct Streak {
  int p = 0;    // A-side start offset
  int q = 0;    // B-side start offset
  int len = 0;  // number of edges, >= 1

  friend constexpr auto operator<=>(const Streak&, const Streak&) = default;

  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(static_cast<std::size_t>(len));
    for (int d = 1; d <= len; ++d) out.push_back(Edge{p + d, q + d});
    return out;
  }
};

namespace detail {

inline std::uint64_t edge_key(Edge e) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(e.i)) << 32) |
         static_cast<std::uint32_t>(e.j);
}

// Two-pass counting sort by (i, j); also removes duplicates.
inline void sort_edges_lex(std::vector<Edge>& edges, int n_a, int n_b) {
  std::vector<int> count(static_cast<std::size_t>(std::max(n_a, n_b)) + 2, 0);
  std::vector<Edge> tmp(edges.size());

  for (Edge e : edges) ++count[static_cast<std::size_t>(e.j)];
  for (int v = 1; v <= n_b; ++v) count[static_cast<std::size_t>(v)] += count[static_cast<std::size_t>(v) - 1];
  for (auto it = edges.rbegin(); it != edges.rend(); ++it)
    tmp[static_cast<std::size_t>(--count[static_cast<std::size_t>(it->j)])] = *it;

  std::fill(count.begin(), count.end(), 0);
  for (Edge e : tmp) ++count[static_cast<std::size_t>(e.i)];
  for (int v = 1; v <= n_a; ++v) count[static_cast<std::size_t>(v)] += count[static_cast<std::size_t>(v) - 1];
  for (auto it = tmp.rbegin(); it != tmp.rend(); ++it)
    edges[static_cast<std::size_t>(--count[static_cast<std::size_t>(it->i)])] = *it;

  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

}  // namespace detail

// Bipartite graph over duo indices: the MCBM instance. Sides may have
// different sizes. Edges are stored sorted by (i, j) with per-node adjacency
// and a hash index for O(1) membership.
class DuoGraph {
 public:
  DuoGraph() = default;

  DuoGraph(int n_a, int n_b, std::vector<Edge> edge_list)
      : n_a_(n_a), n_b_(n_b), edges_(std::move(edge_list)) {
    if (n_a_ < 0 || n_b_ < 0) throw ParameterError("node counts must be non-negative");
    for (Edge e : edges_) {
      if (e.i < 1 || e.i > n_a_ || e.j < 1 || e.j > n_b_)
        throw ParameterError("edge (" + std::to_string(e.i) + "," + std::to_string(e.j) +
                             ") out of range for " + std::to_string(n_a_) + "x" + std::to_string(n_b_));
    }
    detail::sort_edges_lex(edges_, n_a_, n_b_);  // dedups silently
    build_indexes();
  }

  int a_nodes() const { return n_a_; }
  int b_nodes() const { return n_b_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  // All edges, sorted by (i, j).
  const std::vector<Edge>& edges() const { return edges_; }

  // Edges ending in A-node i, sorted by j. Out-of-range i yields empty.
  std::span<const Edge> at_a(int i) const {
    if (i < 1 || i > n_a_) return {};
    return std::span<const Edge>(edges_).subspan(
        static_cast<std::size_t>(a_off_[static_cast<std::size_t>(i)]),
        static_cast<std::size_t>(a_off_[static_cast<std::size_t>(i) + 1] - a_off_[static_cast<std::size_t>(i)]));
  }

  // Edges ending in B-node j, sorted by i.
  std::span<const Edge> at_b(int j) const {
    if (j < 1 || j > n_b_) return {};
    return std::span<const Edge>(b_edges_).subspan(
        static_cast<std::size_t>(b_off_[static_cast<std::size_t>(j)]),
        static_cast<std::size_t>(b_off_[static_cast<std::size_t>(j) + 1] - b_off_[static_cast<std::size_t>(j)]));
  }

  // Position of e in edges(), or -1. Binary search within e's row.
  int edge_id(Edge e) const {
    if (e.i < 1 || e.i > n_a_) return -1;
    const int lo = a_off_[static_cast<std::size_t>(e.i)];
    const int hi = a_off_[static_cast<std::size_t>(e.i) + 1];
    const auto row_begin = edges_.begin() + lo;
    const auto row_end = edges_.begin() + hi;
    const auto it = std::lower_bound(row_begin, row_end, e);
    if (it == row_end || *it != e) return -1;
    return static_cast<int>(it - edges_.begin());
  }

  bool contains(Edge e) const { return edge_id(e) >= 0; }

  // Row offset of A-node i: edges()[a_offset(i) + k] is the k-th edge of
  // at_a(i). Together with b_ids() this gives edge ids without hashing.
  int a_offset(int i) const { return a_off_[static_cast<std::size_t>(i)]; }

  // For the k-th entry of at_b(j): its position in edges().
  int b_id(int j, int k) const {
    return b_ids_[static_cast<std::size_t>(b_off_[static_cast<std::size_t>(j)] + k)];
  }

 private:
  void build_indexes() {
    a_off_.assign(static_cast<std::size_t>(n_a_) + 2, 0);
    b_off_.assign(static_cast<std::size_t>(n_b_) + 2, 0);

    for (Edge e : edges_) {
      ++a_off_[static_cast<std::size_t>(e.i) + 1];
      ++b_off_[static_cast<std::size_t>(e.j) + 1];
    }
    for (std::size_t v = 1; v < a_off_.size(); ++v) a_off_[v] += a_off_[v - 1];
    for (std::size_t v = 1; v < b_off_.size(); ++v) b_off_[v] += b_off_[v - 1];

    b_edges_.resize(edges_.size());
    b_ids_.resize(edges_.size());
    std::vector<int> cursor(b_off_.begin(), b_off_.end());
    for (int id = 0; id < static_cast<int>(edges_.size()); ++id) {  // stable, so rows end up sorted by i
      const Edge e = edges_[static_cast<std::size_t>(id)];
      const int pos = cursor[static_cast<std::size_t>(e.j)]++;
      b_edges_[static_cast<std::size_t>(pos)] = e;
      b_ids_[static_cast<std::size_t>(pos)] = id;
    }
  }

  int n_a_ = 0;
  int n_b_ = 0;
  std::vector<Edge> edges_;    // sorted by (i, j); doubles as A-side CSR payload
  std::vector<int> a_off_;     // row offsets into edges_
  std::vector<Edge> b_edges_;  // sorted by (j, i)
  std::vector<int> b_off_;
  std::vector<int> b_ids_;     // b_edges_ position -> edges_ position
};

// A solution candidate: a set of edges plus per-side occupancy. The class
// itself only guarantees sorted storage and records whether the edges form a
// matching; full consecutive validity is checked by is_valid().
class ConsecutiveMatching {
 public:
  ConsecutiveMatching() = default;

  ConsecutiveMatching(int n_a, int n_b, std::vector<Edge> edges)
      : n_a_(n_a), n_b_(n_b), edges_(std::move(edges)) {
    std::sort(edges_.begin(), edges_.end());
    a_to_b_.assign(static_cast<std::size_t>(n_a_) + 1, 0);
    b_to_a_.assign(static_cast<std::size_t>(n_b_) + 1, 0);
    for (Edge e : edges_) {
      if (e.i < 1 || e.i > n_a_ || e.j < 1 || e.j > n_b_) {
        matching_ok_ = false;
        continue;
      }
      if (a_to_b_[static_cast<std::size_t>(e.i)] != 0 || b_to_a_[static_cast<std::size_t>(e.j)] != 0)
        matching_ok_ = false;
      else {
        a_to_b_[static_cast<std::size_t>(e.i)] = e.j;
        b_to_a_[static_cast<std::size_t>(e.j)] = e.i;
      }
    }
  }

  int a_nodes() const { return n_a_; }
  int b_nodes() const { return n_b_; }
  int size() const { return static_cast<int>(edges_.size()); }
  bool empty() const { return edges_.empty(); }

  // Edges sorted by (i, j).
  const std::vector<Edge>& edges() const { return edges_; }

  // B-node matched to A-node i, or 0 if unmatched.
  int b_of_a(int i) const {
    if (i < 1 || i > n_a_) return 0;
    return a_to_b_[static_cast<std::size_t>(i)];
  }
  int a_of_b(int j) const {
    if (j < 1 || j > n_b_) return 0;
    return b_to_a_[static_cast<std::size_t>(j)];
  }

  bool contains(Edge e) const { return b_of_a(e.i) == e.j && e.j != 0; }

  // No two edges share an A-node or a B-node (and all indices in range).
  bool forms_matching() const { return matching_ok_; }

 private:
  int n_a_ = 0;
  int n_b_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> a_to_b_;
  std::vector<int> b_to_a_;
  bool matching_ok_ = true;
};

namespace detail {

// Matching + pairwise compatibility, without graph membership. Equivalent to
// checking compatible() over all pairs: a violating pair is within distance 1
// on some side, and on that side the two edges are adjacent in sorted order
// (indices are distinct integers), so checking sorted neighbours suffices.
// The equivalence is covered by a randomized test against the double loop.
inline bool structurally_valid(const ConsecutiveMatching& m) {
  if (!m.forms_matching()) return false;
  const auto& es = m.edges();  // sorted by (i, j), i strictly increasing
  for (std::size_t x = 1; x < es.size(); ++x) {
    if (es[x].i - es[x - 1].i == 1 && es[x].j - es[x - 1].j != 1) return false;
  }
  std::vector<Edge> by_j(es);
  std::sort(by_j.begin(), by_j.end(), [](Edge a, Edge b) { return a.j < b.j; });
  for (std::size_t x = 1; x < by_j.size(); ++x) {
    if (by_j[x].j - by_j[x - 1].j == 1 && by_j[x].i - by_j[x - 1].i != 1) return false;
  }
  return true;
}

}  // namespace detail

// True iff all edges of m exist in g, form a matching, and every distinct
// pair is compatible.
inline bool is_valid(const ConsecutiveMatching& m, const DuoGraph& g) {
  for (Edge e : m.edges())
    if (!g.contains(e)) return false;
  return detail::structurally_valid(m);
}

// Unique decomposition of a valid matching into maximal streaks, sorted by p.
// Throws InvalidMatching if m is not a consecutive matching.
inline std::vector<Streak> decompose_streaks(const ConsecutiveMatching& m) {
  if (!detail::structurally_valid(m)) throw InvalidMatching("edge set is not a consecutive matching");
  std::vector<Streak> out;
  const auto& es = m.edges();
  std::size_t x = 0;
  while (x < es.size()) {
    std::size_t y = x + 1;
    while (y < es.size() && es[y].i == es[y - 1].i + 1 && es[y].j == es[y - 1].j + 1) ++y;
    out.push_back(Streak{es[x].i - 1, es[x].j - 1, static_cast<int>(y - x)});
    x = y;
  }
  return out;
}

// The existing nodes among {a_{i-1}, a_i, a_{i+1}, b_{j-1}, b_j, b_{j+1}}:
// where edges overlapping e can end. A-side ascending, then B-side ascending.
inline std::vector<NodeRef> close_set(Edge e, const DuoGraph& g) {
  std::vector<NodeRef> out;
  out.reserve(6);
  for (int i = e.i - 1; i <= e.i + 1; ++i)
    if (i >= 1 && i <= g.a_nodes()) out.push_back(NodeRef{Side::A, i});
  for (int j = e.j - 1; j <= e.j + 1; ++j)
    if (j >= 1 && j <= g.b_nodes()) out.push_back(NodeRef{Side::B, j});
  return out;
}

// All edges of g overlapping e (ending in a node of close_set(e)), sorted and
// deduplicated. Always computed on demand.
inline std::vector<Edge> overlap_set(Edge e, const DuoGraph& g) {
  std::vector<Edge> out;
  for (int i = e.i - 1; i <= e.i + 1; ++i) {
    auto row = g.at_a(i);
    out.insert(out.end(), row.begin(), row.end());
  }
  for (int j = e.j - 1; j <= e.j + 1; ++j) {
    auto row = g.at_b(j);
    out.insert(out.end(), row.begin(), row.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Duo graph of an MPSM instance: node a_i is the duo (X[i], X[i+1]), b_j is
// (Y[j], Y[j+1]), and (i, j) is an edge iff the duos are equal. Naive O(n^2)
// scan. Y must be a character permutation of X.
inline DuoGraph build_from_strings(std::string_view x, std::string_view y) {
  if (x.empty() || y.empty()) throw ParameterError("strings must be non-empty");
  if (x.size() != y.size())
    throw PermutationMismatch("strings have different lengths (" + std::to_string(x.size()) + " vs " +
                              std::to_string(y.size()) + ")");
  int hist[256] = {0};
  for (unsigned char c : x) ++hist[c];
  for (unsigned char c : y) --hist[c];
  for (int c = 0; c < 256; ++c)
    if (hist[c] != 0) throw PermutationMismatch("strings are not character permutations of each other");

  const int n = static_cast<int>(x.size()) - 1;
  std::vector<Edge> edges;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      if (x[static_cast<std::size_t>(i - 1)] == y[static_cast<std::size_t>(j - 1)] &&
          x[static_cast<std::size_t>(i)] == y[static_cast<std::size_t>(j)])
        edges.push_back(Edge{i, j});
  return DuoGraph(n, n, std::move(edges));
}

// FNV-1a over the instance shape; used to identify instances in reports.
inline std::string fingerprint(const DuoGraph& g) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xff;
      h *= 1099511628211ULL;
    }
  };
  mix(static_cast<std::uint64_t>(g.a_nodes()));
  mix(static_cast<std::uint64_t>(g.b_nodes()));
  for (Edge e : g.edges()) mix(detail::edge_key(e));
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace duomap
