#pragma once

// End-to-end solvers: greedy phase followed by a second phase matched to the
// guarantee. Each pipeline returns a report carrying the solution, the
// guarantee as an exact rational, per-phase sizes and wall-clock timings.

#include <chrono>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "duomap/bounded_search.hpp"
#include "duomap/core.hpp"
#include "duomap/errors.hpp"
#include "duomap/greedy.hpp"
#include "duomap/local_search.hpp"
#include "duomap/matching.hpp"

namespace duomap {

struct Ratio {
  long long num = 0;
  long long den = 1;

  friend constexpr bool operator==(const Ratio&, const Ratio&) = default;

  std::string str() const { return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den); }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// Exact conversion of a (finite, dyadic-rational) double. Doubles are
// m * 2^e, so this is lossless whenever the result fits in long long.
inline Ratio ratio_from_double(double v) {
  if (!(v > 0) || !std::isfinite(v)) throw ParameterError("value must be positive and finite");
  long long den = 1;
  while (v != std::floor(v)) {
    v *= 2;
    den *= 2;
    if (den > (1LL << 60)) throw ParameterError("value is not representable as a small rational");
  }
  const long long num = static_cast<long long>(v);
  const long long g = std::gcd(num, den);
  return Ratio{num / g, den / g};
}

struct PipelineConfig {
  long long candidate_budget = kDefaultCandidateBudget;  // approx_eps only
};

struct PipelineReport {
  std::string algorithm;
  double epsilon = 0.0;  // eps pipeline only
  int k = 0;             // greedy threshold used
  int t = 0;             // bounded move size (eps pipeline only)
  Ratio guarantee;
  ConsecutiveMatching solution;
  int phase1_size = 0;
  int phase2_size = 0;
  double phase1_ms = 0.0;
  double phase2_ms = 0.0;
  std::string instance_fingerprint;
};

namespace detail {

inline double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

// Residual construction already excludes everything overlapping the greedy
// streaks, so the union of phases is valid by construction; this assertion
// guards regressions.
inline ConsecutiveMatching combine_phases(const DuoGraph& g, const ConsecutiveMatching& phase1,
                                          const ConsecutiveMatching& phase2) {
  std::vector<Edge> all = phase1.edges();
  all.insert(all.end(), phase2.edges().begin(), phase2.edges().end());
  ConsecutiveMatching combined(g.a_nodes(), g.b_nodes(), std::move(all));
  for (Edge e : phase1.edges())
    for (Edge f : phase2.edges())
      if (edges_overlap(e, f)) throw Error("internal: phase solutions overlap");
  if (!is_valid(combined, g)) throw Error("internal: combined solution is invalid");
  return combined;
}

}  // namespace detail

// Greedy(1) alone: a 4-approximation. The residual is empty.
inline PipelineReport approx4(const DuoGraph& g, PipelineConfig = {}) {
  PipelineReport r;
  r.algorithm = "approx4";
  r.k = 1;
  r.guarantee = Ratio{4, 1};
  r.instance_fingerprint = fingerprint(g);

  const auto t0 = std::chrono::steady_clock::now();
  GreedyResult gr = greedy(g, 1);
  r.phase1_ms = detail::ms_since(t0);
  if (gr.residual.edge_count() != 0) throw Error("internal: greedy(1) left a non-empty residual");

  r.phase1_size = gr.matching.size();
  r.solution = std::move(gr.matching);
  if (!is_valid(r.solution, g)) throw Error("internal: greedy solution is invalid");
  return r;
}

// Greedy(2) + merged-pair matching on the residual: a 3-approximation.
inline PipelineReport approx3(const DuoGraph& g, PipelineConfig = {}) {
  PipelineReport r;
  r.algorithm = "approx3";
  r.k = 2;
  r.guarantee = Ratio{3, 1};
  r.instance_fingerprint = fingerprint(g);

  const auto t0 = std::chrono::steady_clock::now();
  GreedyResult gr = greedy(g, 2);
  r.phase1_ms = detail::ms_since(t0);

  const auto t1 = std::chrono::steady_clock::now();
  const ConsecutiveMatching second = approx3_phase2(gr.residual);
  r.phase2_ms = detail::ms_since(t1);

  r.phase1_size = gr.matching.size();
  r.phase2_size = second.size();
  r.solution = detail::combine_phases(g, gr.matching, second);
  return r;
}

// Greedy(3) + queue-based local improvements: an 8/3-approximation in
// quadratic time end to end.
inline PipelineReport approx267(const DuoGraph& g, PipelineConfig = {}) {
  PipelineReport r;
  r.algorithm = "approx267";
  r.k = 3;
  r.guarantee = Ratio{8, 3};
  r.instance_fingerprint = fingerprint(g);

  const auto t0 = std::chrono::steady_clock::now();
  GreedyResult gr = greedy(g, 3);
  r.phase1_ms = detail::ms_since(t0);

  const auto t1 = std::chrono::steady_clock::now();
  const ConsecutiveMatching second = fast_local_improvements(gr.residual);
  r.phase2_ms = detail::ms_since(t1);

  r.phase1_size = gr.matching.size();
  r.phase2_size = second.size();
  r.solution = detail::combine_phases(g, gr.matching, second);
  return r;
}

// Greedy(k) + bounded-size improvements with k = ceil(2/eps) and
// t = ceil(4/eps) + 1: a (2+eps)-approximation. Values of eps >= 2 make
// k = 1 and the second phase runs on an empty residual.
inline PipelineReport approx_eps(const DuoGraph& g, double epsilon, PipelineConfig cfg = {}) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw EpsilonOutOfRange("epsilon must be > 0");

  PipelineReport r;
  r.algorithm = "eps";
  r.epsilon = epsilon;
  r.k = std::max(1, static_cast<int>(std::ceil(2.0 / epsilon)));
  r.t = static_cast<int>(std::ceil(4.0 / epsilon)) + 1;
  const Ratio eps_ratio = ratio_from_double(epsilon);
  r.guarantee = [&] {  // 2 + eps, reduced
    const long long num = 2 * eps_ratio.den + eps_ratio.num;
    const long long gdiv = std::gcd(num, eps_ratio.den);
    return Ratio{num / gdiv, eps_ratio.den / gdiv};
  }();
  r.instance_fingerprint = fingerprint(g);

  const auto t0 = std::chrono::steady_clock::now();
  GreedyResult gr = greedy(g, r.k);
  r.phase1_ms = detail::ms_since(t0);

  const auto t1 = std::chrono::steady_clock::now();
  const ConsecutiveMatching second =
      bounded_size_improvements(gr.residual, r.t, ConsecutiveMatching(g.a_nodes(), g.b_nodes(), {}),
                                cfg.candidate_budget);
  r.phase2_ms = detail::ms_since(t1);

  r.phase1_size = gr.matching.size();
  r.phase2_size = second.size();
  r.solution = detail::combine_phases(g, gr.matching, second);
  return r;
}

}  // namespace duomap
