#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "duomap/exact.hpp"
#include "duomap/instance_io.hpp"
#include "duomap/pipelines.hpp"
#include "support/fixtures.hpp"

using namespace duomap;
using duomap::testing::make_graph;

namespace {

bool is_char_preserving_bijection(std::string_view x, std::string_view y, const LetterMapping& pi) {
  if (pi.length() != static_cast<int>(x.size())) return false;
  std::set<int> seen;
  for (int p = 1; p <= pi.length(); ++p) {
    const int q = pi(p);
    if (q < 1 || q > static_cast<int>(y.size())) return false;
    if (!seen.insert(q).second) return false;
    if (x[static_cast<std::size_t>(p - 1)] != y[static_cast<std::size_t>(q - 1)]) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("letter mapping on the running example") {
  const std::string x = "xyzabcb", y = "abbcxyz";
  const ConsecutiveMatching m(6, 6, {{1, 5}, {2, 6}, {4, 1}});
  const LetterMapping pi = extract_letter_mapping(x, y, m);

  CHECK(pi.to_y == std::vector<int>{0, 5, 6, 7, 1, 2, 4, 3});
  CHECK(is_char_preserving_bijection(x, y, pi));
  CHECK(preserved_duos(pi) == 3);
  CHECK(mcsp_pieces(x, pi) == 4);
}

TEST_CASE("letter mapping trivia") {
  SECTION("identity instance with the full staircase") {
    const std::string x = "abcde";
    std::vector<Edge> stair;
    for (int d = 1; d <= 4; ++d) stair.push_back(Edge{d, d});
    const LetterMapping pi = extract_letter_mapping(x, x, ConsecutiveMatching(4, 4, stair));
    CHECK(pi.to_y == std::vector<int>{0, 1, 2, 3, 4, 5});
    CHECK(preserved_duos(pi) == 4);
    CHECK(mcsp_pieces(x, pi) == 1);
  }
  SECTION("empty matching still yields a bijection") {
    const std::string x = "abab", y = "baba";
    const LetterMapping pi = extract_letter_mapping(x, y, ConsecutiveMatching(3, 3, {}));
    CHECK(is_char_preserving_bijection(x, y, pi));
    CHECK(preserved_duos(pi) >= 0);
  }
  SECTION("zero preserved duos means |X| pieces") {
    LetterMapping pi;
    pi.to_y = {0, 5, 3, 1, 4, 2};  // no consecutive runs
    CHECK(preserved_duos(pi) == 0);
    CHECK(mcsp_pieces("aaaaa", pi) == 5);
  }
}

TEST_CASE("mapping properties on random instances") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    duomap::detail::SeededRng rng(seed * 17);
    const int n = rng.next_int(2, 14);
    const auto [x, y] = gen_mcsp_instance(n, rng.next_int(1, n), rng.next_int(1, 4), seed);
    const DuoGraph g = build_from_strings(x, y);
    const auto r = approx267(g);

    const LetterMapping pi = extract_letter_mapping(x, y, r.solution);
    CHECK(is_char_preserving_bijection(x, y, pi));
    CHECK(preserved_duos(pi) >= r.solution.size());
    CHECK(preserved_duos(pi) + mcsp_pieces(x, pi) == n);
  }
}

TEST_CASE("instance parsing") {
  SECTION("mpsm") {
    const Instance inst = parse_instance("mpsm\nxyzabcb\nabbcxyz\n");
    CHECK(inst.kind == Instance::Kind::mpsm);
    CHECK(inst.graph.edges() == std::vector<Edge>{{1, 5}, {2, 6}, {4, 1}, {5, 3}});

    CHECK_NOTHROW(parse_instance("mpsm\nab\nba"));  // trailing newline optional
    CHECK_THROWS_AS(parse_instance("mpsm\nab\nbc\n"), ParseError);  // non-permutation
    CHECK_THROWS_AS(parse_instance("mpsm\nab\n"), ParseError);
  }
  SECTION("mcbm") {
    const Instance inst = parse_instance("mcbm 3 4 2\n1 2\n3 4\n");
    CHECK(inst.kind == Instance::Kind::mcbm);
    CHECK(inst.graph.a_nodes() == 3);
    CHECK(inst.graph.b_nodes() == 4);
    CHECK(inst.graph.edges() == std::vector<Edge>{{1, 2}, {3, 4}});

    CHECK_NOTHROW(parse_instance("mcbm 5 5 0\n"));  // empty graph parses
    CHECK_THROWS_AS(parse_instance("mcbm 3 4\n"), ParseError);        // malformed header
    CHECK_THROWS_AS(parse_instance("mdcm 3 4 0\n"), ParseError);      // unknown tag
    CHECK_THROWS_AS(parse_instance("mcbm 3 4 1\n4 1\n"), ParseError); // index out of range
    CHECK_THROWS_AS(parse_instance("mcbm 3 4 2\n1 1\n"), ParseError); // missing edge line
    CHECK_THROWS_AS(parse_instance(""), ParseError);
  }
  SECTION("duplicate edges in files are deduplicated") {
    const Instance inst = parse_instance("mcbm 3 3 3\n2 2\n2 2\n1 1\n");
    CHECK(inst.graph.edges() == std::vector<Edge>{{1, 1}, {2, 2}});
  }
}

TEST_CASE("serialize then parse is the identity") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    if (seed % 2 == 0) {
      duomap::detail::SeededRng rng(seed);
      const int n = rng.next_int(1, 12);
      const auto [x, y] = gen_mcsp_instance(n, rng.next_int(1, n), rng.next_int(1, 6), seed);
      const Instance parsed = parse_instance(serialize_mpsm(x, y));
      CHECK(parsed.x == x);
      CHECK(parsed.y == y);
      CHECK(serialize_instance(parsed) == serialize_mpsm(x, y));
    } else {
      duomap::detail::SeededRng rng(seed);
      const DuoGraph g = gen_random_graph(rng.next_int(0, 7), rng.next_int(0, 7), rng.next_unit(), seed);
      const Instance parsed = parse_instance(serialize_mcbm(g));
      CHECK(parsed.graph.a_nodes() == g.a_nodes());
      CHECK(parsed.graph.b_nodes() == g.b_nodes());
      CHECK(parsed.graph.edges() == g.edges());
      CHECK(serialize_instance(parsed) == serialize_mcbm(g));
    }
  }
}

TEST_CASE("gen_mcsp_instance") {
  SECTION("blocks = 1 copies the string") {
    const auto [x, y] = gen_mcsp_instance(9, 1, 3, 5);
    CHECK(x == y);
  }
  SECTION("output is always a permutation") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
      const auto [x, y] = gen_mcsp_instance(11, 11, 4, seed);
      std::string xs = x, ys = y;
      std::sort(xs.begin(), xs.end());
      std::sort(ys.begin(), ys.end());
      CHECK(xs == ys);
    }
  }
  SECTION("deterministic per seed") {
    CHECK(gen_mcsp_instance(12, 4, 3, 99) == gen_mcsp_instance(12, 4, 3, 99));
    CHECK(gen_mcsp_instance(12, 4, 3, 99) != gen_mcsp_instance(12, 4, 3, 100));
  }
  SECTION("construction witnesses at least n - blocks preserved duos") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
      duomap::detail::SeededRng rng(seed * 13);
      const int n = rng.next_int(4, 10);
      const int blocks = rng.next_int(1, n);
      const auto [x, y] = gen_mcsp_instance(n, blocks, 5, seed);
      const DuoGraph g = build_from_strings(x, y);
      if (g.edge_count() > 20) continue;
      CHECK(exact_opt(g).size() >= n - blocks);
    }
  }
  SECTION("parameter validation") {
    CHECK_THROWS_AS(gen_mcsp_instance(0, 1, 3, 1), ParameterError);
    CHECK_THROWS_AS(gen_mcsp_instance(5, 0, 3, 1), ParameterError);
    CHECK_THROWS_AS(gen_mcsp_instance(5, 6, 3, 1), ParameterError);
    CHECK_THROWS_AS(gen_mcsp_instance(5, 2, 0, 1), ParameterError);
  }
}

TEST_CASE("gen_random_graph") {
  CHECK(gen_random_graph(5, 5, 0.0, 1).edge_count() == 0);
  CHECK(gen_random_graph(5, 6, 1.0, 1).edge_count() == 30);
  CHECK_THROWS_AS(gen_random_graph(5, 5, -0.1, 1), ParameterError);
  CHECK_THROWS_AS(gen_random_graph(5, 5, 1.5, 1), ParameterError);

  SECTION("edge counts stay within four sigma of the mean") {
    const int n_a = 10, n_b = 10;
    const double p = 0.3;
    const double mean = p * n_a * n_b;
    const double sigma = std::sqrt(n_a * n_b * p * (1 - p));
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const int m = gen_random_graph(n_a, n_b, p, seed).edge_count();
      CHECK(std::abs(m - mean) <= 4 * sigma);
    }
  }
  SECTION("deterministic per seed") {
    CHECK(gen_random_graph(6, 6, 0.4, 7).edges() == gen_random_graph(6, 6, 0.4, 7).edges());
  }
}
