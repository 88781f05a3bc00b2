#pragma once

// Instance text formats, seeded generators, and the MPSM-side conversions:
// realizing a matching as a letter mapping and counting the complementary
// partition pieces.
//
//   mpsm format:  line 1 "mpsm", line 2 X, line 3 Y
//   mcbm format:  line 1 "mcbm nA nB m", then m lines "i j" (1-based)

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "duomap/core.hpp"
#include "duomap/errors.hpp"

namespace duomap {

// Bijection of X-positions to Y-positions (1-based), character-preserving.
struct LetterMapping {
  std::vector<int> to_y;  // index 0 unused

  int length() const { return static_cast<int>(to_y.size()) - 1; }
  int operator()(int p) const { return to_y[static_cast<std::size_t>(p)]; }
};

inline int preserved_duos(const LetterMapping& pi) {
  int count = 0;
  for (int p = 1; p < pi.length(); ++p)
    if (pi(p + 1) == pi(p) + 1) ++count;
  return count;
}

// Number of maximal blocks of X that map to contiguous runs of Y; always
// |X| minus the preserved duo count.
inline int mcsp_pieces(std::string_view x, const LetterMapping& pi) {
  if (pi.length() != static_cast<int>(x.size())) throw ParameterError("mapping length does not match string");
  int runs = 1;
  for (int p = 1; p < pi.length(); ++p)
    if (pi(p + 1) != pi(p) + 1) ++runs;
  return pi.length() == 0 ? 0 : runs;
}

// Realize a matching as a letter mapping: each streak (p, q, len) sends
// X-positions p+1..p+len+1 to Y-positions q+1..q+len+1 (the letter blocks of
// distinct streaks are disjoint), and the leftover positions are paired up
// per character in ascending index order. Preserves at least |m| duos.
inline LetterMapping extract_letter_mapping(std::string_view x, std::string_view y, const ConsecutiveMatching& m) {
  const int n = static_cast<int>(x.size());
  if (static_cast<int>(y.size()) != n) throw ParameterError("strings differ in length");

  LetterMapping pi;
  pi.to_y.assign(static_cast<std::size_t>(n) + 1, 0);
  std::vector<bool> y_used(static_cast<std::size_t>(n) + 1, false);

  for (const Streak& s : decompose_streaks(m)) {
    if (s.p + s.len + 1 > n || s.q + s.len + 1 > n) throw InvalidMatching("matching does not fit the strings");
    for (int d = 1; d <= s.len + 1; ++d) {
      pi.to_y[static_cast<std::size_t>(s.p + d)] = s.q + d;
      y_used[static_cast<std::size_t>(s.q + d)] = true;
    }
  }

  std::vector<std::vector<int>> free_y(256);
  for (int q = 1; q <= n; ++q)
    if (!y_used[static_cast<std::size_t>(q)])
      free_y[static_cast<unsigned char>(y[static_cast<std::size_t>(q - 1)])].push_back(q);
  for (auto& positions : free_y) std::reverse(positions.begin(), positions.end());

  for (int p = 1; p <= n; ++p) {
    if (pi.to_y[static_cast<std::size_t>(p)] != 0) continue;
    auto& positions = free_y[static_cast<unsigned char>(x[static_cast<std::size_t>(p - 1)])];
    if (positions.empty()) throw InvalidMatching("streak letter blocks are inconsistent with the strings");
    pi.to_y[static_cast<std::size_t>(p)] = positions.back();
    positions.pop_back();
  }
  return pi;
}

struct Instance {
  enum class Kind { mpsm, mcbm };

  Kind kind = Kind::mcbm;
  std::string x, y;  // mpsm only
  DuoGraph graph;
};

namespace detail {

inline std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = end + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

}  // namespace detail

inline Instance parse_instance(std::string_view text) {
  const auto lines = detail::split_lines(text);
  if (lines.empty()) throw ParseError("empty instance");

  if (lines[0] == "mpsm") {
    if (lines.size() != 3) throw ParseError("mpsm format needs exactly two string lines");
    Instance inst;
    inst.kind = Instance::Kind::mpsm;
    inst.x = lines[1];
    inst.y = lines[2];
    try {
      inst.graph = build_from_strings(inst.x, inst.y);
    } catch (const Error& err) {
      throw ParseError(std::string("bad mpsm instance: ") + err.what());
    }
    return inst;
  }

  std::istringstream header(lines[0]);
  std::string tag;
  long long n_a = -1, n_b = -1, m = -1;
  header >> tag >> n_a >> n_b >> m;
  if (tag != "mcbm" || header.fail() || n_a < 0 || n_b < 0 || m < 0)
    throw ParseError("malformed header: expected 'mpsm' or 'mcbm nA nB m'");
  if (static_cast<long long>(lines.size()) - 1 != m)
    throw ParseError("expected " + std::to_string(m) + " edge lines, found " + std::to_string(lines.size() - 1));

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (std::size_t row = 1; row < lines.size(); ++row) {
    std::istringstream ss(lines[row]);
    long long i = 0, j = 0;
    ss >> i >> j;
    std::string rest;
    if (ss.fail() || (ss >> rest)) throw ParseError("malformed edge line " + std::to_string(row + 1));
    if (i < 1 || i > n_a || j < 1 || j > n_b)
      throw ParseError("edge index out of range on line " + std::to_string(row + 1));
    edges.push_back(Edge{static_cast<int>(i), static_cast<int>(j)});
  }
  Instance inst;
  inst.kind = Instance::Kind::mcbm;
  inst.graph = DuoGraph(static_cast<int>(n_a), static_cast<int>(n_b), std::move(edges));
  return inst;
}

inline std::string serialize_mpsm(std::string_view x, std::string_view y) {
  std::string out = "mpsm\n";
  out += x;
  out += '\n';
  out += y;
  out += '\n';
  return out;
}

inline std::string serialize_mcbm(const DuoGraph& g) {
  std::string out = "mcbm " + std::to_string(g.a_nodes()) + " " + std::to_string(g.b_nodes()) + " " +
                    std::to_string(g.edge_count()) + "\n";
  for (Edge e : g.edges()) out += std::to_string(e.i) + " " + std::to_string(e.j) + "\n";
  return out;
}

inline std::string serialize_instance(const Instance& inst) {
  return inst.kind == Instance::Kind::mpsm ? serialize_mpsm(inst.x, inst.y) : serialize_mcbm(inst.graph);
}

namespace detail {

// Thin wrapper enforcing our own integer/unit mappings so generated
// instances are identical across standard library implementations.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform in [0, bound), bound >= 1; rejection keeps it unbiased.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t v;
    do {
      v = eng_();
    } while (v >= limit);
    return v % bound;
  }

  int next_int(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(next_below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  double next_unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 eng_;
};

inline char alphabet_char(int v) {
  static constexpr char kChars[] = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
  return kChars[v];
}

}  // namespace detail

// Random MCSP-structured pair: X is uniform over the first sigma alphabet
// characters, Y rearranges X cut into `blocks` pieces at random positions.
// The construction witnesses a mapping with at most `blocks` pieces, so the
// optimal preserved-duo count is at least n - blocks.
inline std::pair<std::string, std::string> gen_mcsp_instance(int n, int blocks, int sigma, std::uint64_t seed) {
  if (n < 1) throw ParameterError("n must be >= 1");
  if (blocks < 1 || blocks > n) throw ParameterError("blocks must be in [1, n]");
  if (sigma < 1 || sigma > 62) throw ParameterError("alphabet size must be in [1, 62]");

  detail::SeededRng rng(seed);
  std::string x(static_cast<std::size_t>(n), '?');
  for (auto& c : x) c = detail::alphabet_char(rng.next_int(0, sigma - 1));

  // blocks-1 distinct cut positions out of 1..n-1, via partial Fisher-Yates.
  std::vector<int> positions(static_cast<std::size_t>(n) - 1);
  for (int v = 0; v < n - 1; ++v) positions[static_cast<std::size_t>(v)] = v + 1;
  for (int v = 0; v < blocks - 1; ++v) {
    const int swap_with = rng.next_int(v, n - 2);
    std::swap(positions[static_cast<std::size_t>(v)], positions[static_cast<std::size_t>(swap_with)]);
  }
  std::vector<int> cuts(positions.begin(), positions.begin() + (blocks - 1));
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(n);

  std::vector<std::string> pieces;
  int prev = 0;
  for (int cut : cuts) {
    pieces.push_back(x.substr(static_cast<std::size_t>(prev), static_cast<std::size_t>(cut - prev)));
    prev = cut;
  }
  for (int v = static_cast<int>(pieces.size()) - 1; v > 0; --v)
    std::swap(pieces[static_cast<std::size_t>(v)], pieces[static_cast<std::size_t>(rng.next_int(0, v))]);

  std::string y;
  y.reserve(static_cast<std::size_t>(n));
  for (const auto& piece : pieces) y += piece;
  return {std::move(x), std::move(y)};
}

// Bernoulli(p) per cell, deterministic per seed.
inline DuoGraph gen_random_graph(int n_a, int n_b, double p, std::uint64_t seed) {
  if (n_a < 0 || n_b < 0) throw ParameterError("node counts must be non-negative");
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("p must be in [0, 1]");

  detail::SeededRng rng(seed);
  std::vector<Edge> edges;
  for (int i = 1; i <= n_a; ++i)
    for (int j = 1; j <= n_b; ++j)
      if (rng.next_unit() < p) edges.push_back(Edge{i, j});
  return DuoGraph(n_a, n_b, std::move(edges));
}

}  // namespace duomap
