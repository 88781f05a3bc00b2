#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "duomap/exact.hpp"
#include "duomap/greedy.hpp"
#include "support/fixtures.hpp"

using namespace duomap;
using duomap::testing::fig1_graph;
using duomap::testing::make_graph;

namespace {

// Streak decomposition of an arbitrary edge set (fresh scan, no index).
std::vector<Streak> scan_streaks(const std::set<Edge>& edges) {
  std::vector<Streak> out;
  for (Edge e : edges) {
    if (edges.count(Edge{e.i - 1, e.j - 1})) continue;  // not a streak head
    int len = 1;
    while (edges.count(Edge{e.i + len, e.j + len})) ++len;
    out.push_back(Streak{e.i - 1, e.j - 1, len});
  }
  return out;  // set iteration is ordered, so output is sorted by (p, q)
}

bool edge_overlaps_streak(Edge e, const Streak& s) {
  return (e.i >= s.p && e.i <= s.p + s.len + 1) || (e.j >= s.q && e.j <= s.q + s.len + 1);
}

}  // namespace

TEST_CASE("initial streak scan") {
  SECTION("running example") {
    StreakIndex idx(fig1_graph());
    const auto streaks = idx.live_streaks();
    CHECK(streaks == std::vector<Streak>{{0, 4, 2}, {3, 0, 1}, {4, 2, 1}});
    CHECK_FALSE(idx.group_empty(2));
    CHECK(idx.group_min(2) == Streak{0, 4, 2});
    CHECK_FALSE(idx.group_empty(1));
    CHECK(idx.group_min(1) == Streak{3, 0, 1});
  }
  SECTION("single edge") {
    StreakIndex idx(make_graph(3, 3, {{2, 3}}));
    CHECK(idx.live_streaks() == std::vector<Streak>{{1, 2, 1}});
  }
  SECTION("full staircase") {
    StreakIndex idx(make_graph(5, 5, {{1, 1}, {2, 2}, {3, 3}, {4, 4}, {5, 5}}));
    CHECK(idx.live_streaks() == std::vector<Streak>{{0, 0, 5}});
  }
}

TEST_CASE("remove_edge shrinks or splits streaks") {
  SECTION("middle removal splits a 5-streak into 2 + 2") {
    StreakIndex idx(make_graph(5, 5, {{1, 1}, {2, 2}, {3, 3}, {4, 4}, {5, 5}}));
    idx.remove_edge({3, 3});
    CHECK(idx.live_streaks() == std::vector<Streak>{{0, 0, 2}, {3, 3, 2}});
    CHECK(idx.stats.removals == 1);
  }
  SECTION("endpoint removal shrinks a 2-streak") {
    StreakIndex idx(make_graph(3, 3, {{1, 1}, {2, 2}}));
    idx.remove_edge({2, 2});
    CHECK(idx.live_streaks() == std::vector<Streak>{{0, 0, 1}});
  }
  SECTION("removing the only edge deletes the streak") {
    StreakIndex idx(make_graph(3, 3, {{2, 2}}));
    idx.remove_edge({2, 2});
    CHECK(idx.live_streaks().empty());
    CHECK(idx.group_empty(1));
  }
  SECTION("double removal throws") {
    StreakIndex idx(make_graph(3, 3, {{2, 2}}));
    idx.remove_edge({2, 2});
    CHECK_THROWS_AS(idx.remove_edge({2, 2}), EdgeAlreadyRemoved);
  }
}

TEST_CASE("greedy on the running example") {
  const DuoGraph g = fig1_graph();

  SECTION("k = 1 empties the graph") {
    const GreedyResult r = greedy(g, 1);
    CHECK(r.matching.edges() == std::vector<Edge>{{1, 5}, {2, 6}, {4, 1}});
    CHECK(r.residual.edge_count() == 0);
    CHECK(is_valid(r.matching, g));
    REQUIRE(r.trace.steps.size() == 2);
    CHECK(r.trace.steps[0].chosen == Streak{0, 4, 2});
    CHECK(r.trace.steps[1].chosen == Streak{3, 0, 1});
  }
  SECTION("k = 3 takes nothing here") {
    const GreedyResult r = greedy(g, 3);
    CHECK(r.matching.empty());
    CHECK(r.residual.edges() == g.edges());
    CHECK(r.trace.steps.empty());
  }
  SECTION("empty graph") {
    const GreedyResult r = greedy(make_graph(4, 4, {}), 1);
    CHECK(r.matching.empty());
    CHECK(r.residual.edge_count() == 0);
    CHECK(r.trace.steps.empty());
  }
  SECTION("k must be positive") { CHECK_THROWS_AS(greedy(g, 0), ParameterError); }
}

TEST_CASE("trace replay: every chosen streak was a longest live streak") {
  const auto corpus = duomap::testing::small_corpus(40, 20, 2200);
  for (const auto& g : corpus) {
    for (int k = 1; k <= 3; ++k) {
      const GreedyResult r = greedy(g, k);
      std::set<Edge> live(g.edges().begin(), g.edges().end());

      for (const auto& step : r.trace.steps) {
        const auto streaks = scan_streaks(live);
        REQUIRE_FALSE(streaks.empty());
        int longest = 0;
        for (const auto& s : streaks) longest = std::max(longest, s.len);
        CHECK(step.chosen.len == longest);
        CHECK(step.chosen.len >= k);
        // Lexicographic tie-break among longest streaks.
        for (const auto& s : streaks)
          if (s.len == longest) {
            CHECK(step.chosen == s);
            break;
          }
        // The removed set is exactly the live edges overlapping the choice.
        for (Edge e : step.removed) {
          CHECK(live.count(e) == 1);
          CHECK(edge_overlaps_streak(e, step.chosen));
          live.erase(e);
        }
        for (Edge e : live) CHECK_FALSE(edge_overlaps_streak(e, step.chosen));
      }
      CHECK(std::vector<Edge>(live.begin(), live.end()) == r.residual.edges());

      // Residual has no streak of length >= k.
      for (const auto& s : scan_streaks(live)) CHECK(s.len < k);

      CHECK(r.stats.removals <= g.edge_count());
      CHECK(r.stats.relocations <= 2LL * g.edge_count());
    }
  }
}

TEST_CASE("greedy trace satisfies the per-step discard bound against the optimum") {
  const auto corpus = duomap::testing::small_corpus(40, 18, 3100);
  for (const auto& g : corpus) {
    const auto opt = exact_opt(g);
    for (int k = 1; k <= 3; ++k) {
      const GreedyResult r = greedy(g, k);
      std::vector<bool> claimed(opt.edges().size(), false);
      long long discarded_total = 0, taken_total = 0;

      for (const auto& step : r.trace.steps) {
        int o_i = 0;
        for (std::size_t x = 0; x < opt.edges().size(); ++x) {
          if (claimed[x]) continue;
          if (edge_overlaps_streak(opt.edges()[x], step.chosen)) {
            claimed[x] = true;
            ++o_i;
          }
        }
        CHECK(o_i <= 2 * step.chosen.len + 2);
        discarded_total += o_i;
        taken_total += step.chosen.len;
      }
      // Sum form: discarded <= (2 + 2/k) * taken, in exact integers.
      CHECK(static_cast<long long>(k) * discarded_total <= (2LL * k + 2) * taken_total);
    }
  }
}

TEST_CASE("greedy keeps whole staircases") {
  const GreedyResult r = greedy(make_graph(5, 5, {{1, 1}, {2, 2}, {3, 3}, {4, 4}, {5, 5}}), 1);
  CHECK(r.matching.size() == 5);
  CHECK(r.trace.steps.size() == 1);
}
