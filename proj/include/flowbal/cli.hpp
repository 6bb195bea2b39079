#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "flowbal/flowbal.hpp"

namespace flowbal::cli {

/// Process exit codes.
enum Exit : int {
  kOk = 0,        // feasible / converged with a clean audit
  kNegative = 1,  // infeasible instance, non-convergence or audit violations
  kUsage = 2,     // bad arguments, parse errors, I/O errors
};

/// Output directory used when --out is not given: $FLOWBAL_OUT, else
/// "flowbal-out".
inline std::filesystem::path default_output_dir() {
  if (const char* env = std::getenv("FLOWBAL_OUT"); env && *env) return env;
  return "flowbal-out";
}

/// Parses "1-100", "3,5,9" or mixtures such as "1-10,20".
inline std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(start, comma - start);
    start = comma + 1;
    if (item.empty()) throw std::invalid_argument("empty entry in seed list '" + text + "'");
    std::size_t used = 0;
    if (auto dash = item.find('-'); dash != std::string::npos && dash > 0) {
      const auto lo = std::stoull(item.substr(0, dash), &used);
      if (used != dash) throw std::invalid_argument("bad seed range '" + item + "'");
      const auto hi_text = item.substr(dash + 1);
      const auto hi = std::stoull(hi_text, &used);
      if (used != hi_text.size() || hi < lo) throw std::invalid_argument("bad seed range '" + item + "'");
      if (hi - lo > 10'000'000) throw std::invalid_argument("seed range too large '" + item + "'");
      for (auto s = lo; s <= hi; ++s) out.push_back(s);
    } else {
      const auto v = std::stoull(item, &used);
      if (used != item.size()) throw std::invalid_argument("bad seed '" + item + "'");
      out.push_back(v);
    }
  }
  return out;
}

/// Where a run or sweep takes its scenario from: a file or a named preset.
struct ScenarioSource {
  std::optional<std::string> path;
  std::optional<std::string> preset;
  std::uint64_t graph_seed = kDefaultPresetGraphSeed;
};

inline Scenario load_source(const ScenarioSource& src) {
  if (src.path && src.preset) throw std::invalid_argument("give either a scenario file or --preset, not both");
  if (src.preset) return make_preset(*src.preset, src.graph_seed);
  if (src.path) return load_scenario(*src.path);
  throw std::invalid_argument("a scenario file or --preset is required");
}

/// Feasibility check of a scenario file.
inline int cmd_check(const std::string& path, std::ostream& out, std::ostream& err) {
  try {
    const Scenario sc = load_scenario(path);
    const auto verdict = check_circulation(sc.graph, sc.bounds);
    if (verdict.feasible) {
      out << "Feasible\n";
      return kOk;
    }
    out << "Infeasible: " << describe(*verdict.witness, sc.graph) << "\n";
    return kNegative;
  } catch (const ParseError& e) {
    err << path << ": " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << path << ": " << e.what() << "\n";
  }
  return kUsage;
}

struct RunOptions {
  ScenarioSource source;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> max_iterations;
  bool allow_infeasible = false;
  std::optional<std::filesystem::path> out_dir;
};

inline void apply_overrides(Scenario& sc, const std::optional<std::uint64_t>& seed,
                            const std::optional<std::int64_t>& max_iterations, bool allow_infeasible) {
  if (seed) sc.seed = *seed;
  if (max_iterations) {
    if (*max_iterations < 1) throw std::invalid_argument("--max-iters must be at least 1");
    sc.max_iterations = *max_iterations;
  }
  if (allow_infeasible) sc.allow_infeasible = true;
}

/// Runs one scenario, writes the trace files and the audit report.
inline int cmd_run(const RunOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    Scenario sc = load_source(opt.source);
    apply_overrides(sc, opt.seed, opt.max_iterations, opt.allow_infeasible);
    const Trace t = run(sc);
    const AuditReport rep = audit(t);
    const auto dir = opt.out_dir.value_or(default_output_dir());
    write_run_outputs(t, rep, dir);
    out << fingerprint_line(t);
    out << "outcome: " << outcome_text(t) << "\n";
    out << "epsilon: " << t.records.front().epsilon << " -> " << t.records.back().epsilon << "\n";
    out << "audit violations: " << rep.total << "\n";
    out << "output: " << dir.string() << "\n";
    return t.outcome.converged && rep.clean() ? kOk : kNegative;
  } catch (const InfeasibleScenario& e) {
    err << e.what() << " (use --allow-infeasible to run anyway)\n";
  } catch (const std::exception& e) {
    err << e.what() << "\n";
  }
  return kUsage;
}

struct GenerateOptions {
  GeneratorParams params;
  Algorithm algorithm = Algorithm::delay_tolerant;
  int max_delay = 0;
  double drop = 0.0;
  std::optional<std::string> out_path;
};

/// Emits a random feasible scenario, to `out_path` or stdout.
inline int cmd_generate(const GenerateOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    Scenario sc = generate_scenario(opt.params);
    sc.algorithm = opt.algorithm;
    if (opt.algorithm == Algorithm::drop_resilient) {
      sc.channel.kind = ChannelKind::drop;
      sc.channel.drop_probability = opt.drop;
    } else {
      sc.channel.kind = ChannelKind::delay;
      sc.channel.max_delay = opt.max_delay;
    }
    sc.seed = opt.params.seed;
    if (opt.out_path) {
      save_scenario(sc, *opt.out_path);
    } else {
      out << serialize(sc);
    }
    return kOk;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
  }
  return kUsage;
}

struct SweepOptions {
  ScenarioSource source;
  std::vector<std::uint64_t> seeds;
  std::optional<std::int64_t> max_iterations;
  bool allow_infeasible = false;
  unsigned threads = 0;
  std::optional<std::filesystem::path> out_dir;
};

/// Runs a scenario under many seeds and reports convergence and audit
/// results.
inline int cmd_sweep(const SweepOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    if (opt.seeds.empty()) throw std::invalid_argument("no seeds given");
    Scenario sc = load_source(opt.source);
    apply_overrides(sc, std::nullopt, opt.max_iterations, opt.allow_infeasible);
    const SweepResult res = sweep(sc, opt.seeds, opt.threads);
    const std::string report = res.report();
    out << report;
    if (opt.out_dir) {
      std::filesystem::create_directories(*opt.out_dir);
      std::ofstream f(*opt.out_dir / "sweep.txt", std::ios::binary);
      f << report;
      if (!f) throw std::runtime_error("cannot write " + (*opt.out_dir / "sweep.txt").string());
    }
    return res.all_good() ? kOk : kNegative;
  } catch (const InfeasibleScenario& e) {
    err << e.what() << " (use --allow-infeasible to run anyway)\n";
  } catch (const std::exception& e) {
    err << e.what() << "\n";
  }
  return kUsage;
}

}  // namespace flowbal::cli
