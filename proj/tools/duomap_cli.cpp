// Command-line front end: solve single instances, run the exact oracle,
// generate instances, convert MPSM solutions to letter mappings, and sweep
// benchmark grids to CSV.
//
// Exit codes: 0 success, 1 runtime failure, 2 bad input or usage,
// 3 instance over the oracle cap, 4 candidate budget exhausted.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "duomap/exact.hpp"
#include "duomap/instance_io.hpp"
#include "duomap/pipelines.hpp"

using nlohmann::json;
using namespace duomap;

namespace {

constexpr int kFormatVersion = 1;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << content;
}

PipelineReport run_pipeline(const std::string& algorithm, const DuoGraph& g, double epsilon, long long budget) {
  PipelineConfig cfg;
  cfg.candidate_budget = budget;
  if (algorithm == "approx4") return approx4(g, cfg);
  if (algorithm == "approx3") return approx3(g, cfg);
  if (algorithm == "approx267") return approx267(g, cfg);
  if (algorithm == "eps") return approx_eps(g, epsilon, cfg);
  throw ParameterError("unknown algorithm '" + algorithm + "'");
}

json report_to_json(const PipelineReport& r, const Instance* inst) {
  json out;
  out["format_version"] = kFormatVersion;
  out["algorithm"] = r.algorithm;
  if (r.algorithm == "eps") {
    out["epsilon"] = r.epsilon;
    out["t"] = r.t;
  }
  out["k"] = r.k;
  out["size"] = r.solution.size();
  out["guarantee"] = r.guarantee.str();
  json edges = json::array();
  for (Edge e : r.solution.edges()) edges.push_back({e.i, e.j});
  out["edges"] = std::move(edges);
  out["fingerprint"] = r.instance_fingerprint;
  out["timings_ms"] = {{"phase1", r.phase1_ms}, {"phase2", r.phase2_ms}};

  if (inst && inst->kind == Instance::Kind::mpsm) {
    const LetterMapping pi = extract_letter_mapping(inst->x, inst->y, r.solution);
    out["mapping"] = std::vector<int>(pi.to_y.begin() + 1, pi.to_y.end());
    out["preserved_duos"] = preserved_duos(pi);
    out["pieces"] = mcsp_pieces(inst->x, pi);
  }
  return out;
}

std::string report_to_csv(const PipelineReport& r) {
  std::ostringstream out;
  out << "algorithm,epsilon,k,t,size,guarantee,phase1_size,phase2_size,phase1_ms,phase2_ms,fingerprint\n";
  out << r.algorithm << ',';
  if (r.algorithm == "eps") out << r.epsilon;
  out << ',' << r.k << ',' << r.t << ',' << r.solution.size() << ',' << r.guarantee.str() << ',' << r.phase1_size
      << ',' << r.phase2_size << ',' << r.phase1_ms << ',' << r.phase2_ms << ',' << r.instance_fingerprint << '\n';
  return out.str();
}

// Every solution is re-validated before leaving the process.
void require_valid(const PipelineReport& r, const DuoGraph& g) {
  if (!is_valid(r.solution, g)) throw Error("internal: solution failed final validation");
}

int exit_code_for(const std::exception& err) {
  if (dynamic_cast<const InstanceTooLarge*>(&err)) return 3;
  if (dynamic_cast<const BudgetExceeded*>(&err)) return 4;
  if (dynamic_cast<const ParseError*>(&err) || dynamic_cast<const ParameterError*>(&err) ||
      dynamic_cast<const EpsilonOutOfRange*>(&err) || dynamic_cast<const PermutationMismatch*>(&err))
    return 2;
  return 1;
}

struct BenchOptions {
  std::string generator = "mcsp";
  int count = 10;
  std::uint64_t seed = 1;
  int n = 12;
  int blocks = 3;
  int sigma = 4;
  double p = 0.2;
  std::vector<std::string> algorithms{"approx4", "approx3", "approx267", "eps"};
  double epsilon = 1.0;
  int oracle_cap = 24;
  long long budget = kDefaultCandidateBudget;
  std::string output;
};

int bench_threads() {
  if (const char* env = std::getenv("DUOMAP_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return std::min(v, static_cast<int>(std::max(1u, std::thread::hardware_concurrency())));
  }
  return 1;
}

std::string sanitize(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

int cmd_bench(const BenchOptions& opt) {
  struct Cell {
    int instance = 0;
    std::string algorithm;
  };

  std::vector<DuoGraph> graphs;
  std::vector<std::string> names;
  for (int idx = 0; idx < opt.count; ++idx) {
    const std::uint64_t seed = opt.seed + static_cast<std::uint64_t>(idx);
    if (opt.generator == "mcsp") {
      const auto [x, y] = gen_mcsp_instance(opt.n, opt.blocks, opt.sigma, seed);
      graphs.push_back(build_from_strings(x, y));
    } else if (opt.generator == "random") {
      graphs.push_back(gen_random_graph(opt.n, opt.n, opt.p, seed));
    } else {
      throw ParameterError("unknown generator '" + opt.generator + "'");
    }
    names.push_back(opt.generator + "-" + std::to_string(idx) + "-s" + std::to_string(seed));
  }

  std::vector<int> opts(graphs.size(), -1);  // -1: above the oracle cap
  for (std::size_t v = 0; v < graphs.size(); ++v)
    if (graphs[v].edge_count() <= opt.oracle_cap) opts[v] = exact_opt(graphs[v]).size();

  std::vector<Cell> cells;
  for (std::size_t v = 0; v < graphs.size(); ++v)
    for (const auto& a : opt.algorithms) cells.push_back(Cell{static_cast<int>(v), a});

  std::vector<std::string> rows(cells.size());
  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    while (true) {
      const std::size_t c = cursor.fetch_add(1);
      if (c >= cells.size()) return;
      const auto& cell = cells[c];
      const DuoGraph& g = graphs[static_cast<std::size_t>(cell.instance)];
      const int opt_size = opts[static_cast<std::size_t>(cell.instance)];

      std::ostringstream row;
      row << names[static_cast<std::size_t>(cell.instance)] << ',' << opt.generator << ','
          << opt.seed + static_cast<std::uint64_t>(cell.instance) << ',' << g.a_nodes() << ',' << g.b_nodes() << ','
          << g.edge_count() << ',' << cell.algorithm << ',';
      try {
        const PipelineReport r = run_pipeline(cell.algorithm, g, opt.epsilon, opt.budget);
        require_valid(r, g);
        if (cell.algorithm == "eps") row << r.epsilon;
        row << ',' << r.k << ',' << r.t << ',' << r.solution.size() << ',';
        if (opt_size >= 0) row << opt_size;
        row << ',' << r.guarantee.str() << ',';
        if (opt_size >= 0) row << (r.guarantee.num * r.solution.size() >= r.guarantee.den * opt_size ? 1 : 0);
        row << ",1,ok," << r.phase1_ms << ',' << r.phase2_ms;
      } catch (const std::exception& err) {
        // Partial failure: record it on the row and keep sweeping.
        row << ",,,,";
        if (opt_size >= 0) row << opt_size;
        row << ",,,," << sanitize(err.what()) << ",,";
      }
      rows[c] = row.str();
    }
  };

  const int threads = bench_threads();
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int v = 0; v < threads; ++v) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::ostringstream out;
  out << "instance,kind,seed,n_a,n_b,m,algorithm,epsilon,k,t,size,opt,guarantee,ratio_ok,valid,status,"
         "phase1_ms,phase2_ms\n";
  for (const auto& row : rows) out << row << '\n';
  write_output(opt.output, out.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MPSM/MCBM solver: greedy streaks plus local search"};
  app.require_subcommand(1);

  std::string instance_path, algorithm = "approx267", format = "json", output;
  double epsilon = 0.0;
  bool epsilon_set = false;
  long long budget = kDefaultCandidateBudget;
  int oracle_cap = 24;

  auto add_epsilon = [&](CLI::App* cmd) {
    cmd->add_option("--epsilon", epsilon, "epsilon for the eps algorithm")->each([&](const std::string&) {
      epsilon_set = true;
    });
  };

  auto* solve = app.add_subcommand("solve", "solve an instance with a chosen pipeline");
  solve->add_option("instance", instance_path, "instance file (mpsm or mcbm format)")->required();
  solve->add_option("--algorithm", algorithm, "approx4|approx3|approx267|eps")
      ->check(CLI::IsMember({"approx4", "approx3", "approx267", "eps"}));
  add_epsilon(solve);
  solve->add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  solve->add_option("--budget", budget, "candidate budget for eps");
  solve->add_option("-o,--output", output, "output file (default stdout)");

  auto* exact = app.add_subcommand("exact", "exact optimum for desk-scale instances");
  exact->add_option("instance", instance_path, "instance file")->required();
  exact->add_option("--oracle-cap", oracle_cap, "edge cap for the exact solver");
  exact->add_option("-o,--output", output, "output file (default stdout)");

  auto* convert = app.add_subcommand("convert", "solve an mpsm instance and report the letter mapping");
  convert->add_option("instance", instance_path, "mpsm instance file")->required();
  convert->add_option("--algorithm", algorithm, "approx4|approx3|approx267|eps")
      ->check(CLI::IsMember({"approx4", "approx3", "approx267", "eps"}));
  add_epsilon(convert);
  convert->add_option("--budget", budget, "candidate budget for eps");
  convert->add_option("-o,--output", output, "output file (default stdout)");

  std::string gen_kind = "mcsp";
  int gen_n = 12, gen_blocks = 3, gen_sigma = 4;
  double gen_p = 0.2;
  std::uint64_t gen_seed = 1;
  auto* gen = app.add_subcommand("gen", "generate an instance file");
  gen->add_option("--kind", gen_kind, "mcsp|random")->check(CLI::IsMember({"mcsp", "random"}));
  gen->add_option("--n", gen_n, "string length (mcsp) or side size (random)");
  gen->add_option("--blocks", gen_blocks, "piece count for mcsp instances");
  gen->add_option("--sigma", gen_sigma, "alphabet size for mcsp instances");
  gen->add_option("--p", gen_p, "edge probability for random instances");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("-o,--output", output, "output file (default stdout)");

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "sweep a generator grid and emit CSV");
  bench_cmd->add_option("--gen", bench.generator, "mcsp|random")->check(CLI::IsMember({"mcsp", "random"}));
  bench_cmd->add_option("--count", bench.count, "number of instances");
  bench_cmd->add_option("--seed", bench.seed, "base seed (instance i uses seed+i)");
  bench_cmd->add_option("--n", bench.n, "instance size");
  bench_cmd->add_option("--blocks", bench.blocks, "piece count for mcsp instances");
  bench_cmd->add_option("--sigma", bench.sigma, "alphabet size for mcsp instances");
  bench_cmd->add_option("--p", bench.p, "edge probability for random instances");
  bench_cmd->add_option("--algorithm", bench.algorithms, "algorithms to run (repeatable)")
      ->check(CLI::IsMember({"approx4", "approx3", "approx267", "eps"}));
  bench_cmd->add_option("--epsilon", bench.epsilon, "epsilon for eps cells");
  bench_cmd->add_option("--oracle-cap", bench.oracle_cap, "skip exact optimum above this many edges");
  bench_cmd->add_option("--budget", bench.budget, "candidate budget for eps cells");
  bench_cmd->add_option("-o,--output", bench.output, "output CSV file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) {
      if (algorithm == "eps" && !epsilon_set) {
        std::cerr << "error: --epsilon is required with --algorithm eps\n";
        return 2;
      }
      const Instance inst = parse_instance(read_file(instance_path));
      const PipelineReport r = run_pipeline(algorithm, inst.graph, epsilon, budget);
      require_valid(r, inst.graph);
      write_output(output, format == "json" ? report_to_json(r, &inst).dump(2) + "\n" : report_to_csv(r));
      return 0;
    }

    if (exact->parsed()) {
      const Instance inst = parse_instance(read_file(instance_path));
      const auto t0 = std::chrono::steady_clock::now();
      const ConsecutiveMatching opt = exact_opt(inst.graph, ExactOptions{oracle_cap});
      const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      if (!is_valid(opt, inst.graph)) throw Error("internal: oracle solution failed validation");

      json out;
      out["format_version"] = kFormatVersion;
      out["algorithm"] = "exact";
      out["size"] = opt.size();
      out["guarantee"] = "1";
      json edges = json::array();
      for (Edge e : opt.edges()) edges.push_back({e.i, e.j});
      out["edges"] = std::move(edges);
      out["fingerprint"] = fingerprint(inst.graph);
      out["timings_ms"] = {{"phase1", ms}, {"phase2", 0.0}};
      write_output(output, out.dump(2) + "\n");
      return 0;
    }

    if (convert->parsed()) {
      if (algorithm == "eps" && !epsilon_set) {
        std::cerr << "error: --epsilon is required with --algorithm eps\n";
        return 2;
      }
      const Instance inst = parse_instance(read_file(instance_path));
      if (inst.kind != Instance::Kind::mpsm) {
        std::cerr << "error: convert needs an mpsm instance (strings), got mcbm\n";
        return 2;
      }
      const PipelineReport r = run_pipeline(algorithm, inst.graph, epsilon, budget);
      require_valid(r, inst.graph);
      json out = report_to_json(r, &inst);
      const int duos = out["preserved_duos"].get<int>();
      const int pieces = out["pieces"].get<int>();
      out["identity_ok"] = duos + pieces == static_cast<int>(inst.x.size());
      write_output(output, out.dump(2) + "\n");
      return 0;
    }

    if (gen->parsed()) {
      if (gen_kind == "mcsp") {
        const auto [x, y] = gen_mcsp_instance(gen_n, gen_blocks, gen_sigma, gen_seed);
        write_output(output, serialize_mpsm(x, y));
      } else {
        write_output(output, serialize_mcbm(gen_random_graph(gen_n, gen_n, gen_p, gen_seed)));
      }
      return 0;
    }

    if (bench_cmd->parsed()) return cmd_bench(bench);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return exit_code_for(err);
  }
  return 2;
}
