#pragma once

#include <vector>

#include "duomap/core.hpp"
#include "duomap/instance_io.hpp"

namespace duomap::testing {

inline DuoGraph make_graph(int n_a, int n_b, std::vector<Edge> edges) {
  return DuoGraph(n_a, n_b, std::move(edges));
}

// The running example pair: X=xyzabcb, Y=abbcxyz with duo edges
// {(1,5),(2,6),(4,1),(5,3)} and optimum 3.
inline DuoGraph fig1_graph() { return build_from_strings("xyzabcb", "abbcxyz"); }

// Edges {(2,2),(1,3),(3,1)}: the middle edge conflicts with both others,
// which are mutually compatible; the unique improvement swaps one for two.
inline DuoGraph trigger_graph() { return make_graph(3, 3, {Edge{2, 2}, Edge{1, 3}, Edge{3, 1}}); }

// A small mixed corpus with an edge-count cap; MCSP-shaped and Bernoulli
// instances alternate, deterministic for a given base seed.
inline std::vector<DuoGraph> small_corpus(int count, int max_edges, std::uint64_t base_seed) {
  std::vector<DuoGraph> out;
  std::uint64_t seed = base_seed;
  while (static_cast<int>(out.size()) < count) {
    ++seed;
    if (seed % 2 == 0) {
      detail::SeededRng rng(seed * 7919);
      const int n = rng.next_int(4, 12);
      const int blocks = rng.next_int(1, std::max(1, n / 2));
      const int sigma = rng.next_int(2, 5);
      const auto [x, y] = gen_mcsp_instance(n, blocks, sigma, seed);
      DuoGraph g = build_from_strings(x, y);
      if (g.edge_count() <= max_edges) out.push_back(std::move(g));
    } else {
      detail::SeededRng rng(seed * 104729);
      const int n_a = rng.next_int(2, 7);
      const int n_b = rng.next_int(2, 7);
      const double p = 0.1 + 0.5 * rng.next_unit();
      DuoGraph g = gen_random_graph(n_a, n_b, p, seed);
      if (g.edge_count() <= max_edges) out.push_back(std::move(g));
    }
  }
  return out;
}

}  // namespace duomap::testing
