// Command-line front end: check, run, generate, sweep.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "flowbal/cli.hpp"

namespace {

void add_source_options(CLI::App* cmd, flowbal::cli::ScenarioSource& src) {
  cmd->add_option("scenario", src.path, "Scenario file");
  cmd->add_option("--preset", src.preset, "Built-in scenario: fig2, fig3, sync, lossless")
      ->check(CLI::IsMember({"fig2", "fig3", "sync", "lossless"}));
  cmd->add_option("--graph-seed", src.graph_seed, "Generator seed for the preset's graph");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace flowbal::cli;
  CLI::App app{"Distributed integer flow balancing simulator"};
  app.require_subcommand(1);

  std::string check_path;
  auto* check = app.add_subcommand("check", "Decide whether a scenario admits a balanced integer flow");
  check->add_option("scenario", check_path, "Scenario file")->required();

  RunOptions run_opt;
  std::string run_out;
  auto* run = app.add_subcommand("run", "Simulate one scenario and write trace CSVs plus an audit report");
  add_source_options(run, run_opt.source);
  run->add_option("--seed", run_opt.seed, "Channel seed (overrides the file)");
  run->add_option("--max-iters", run_opt.max_iterations, "Iteration budget");
  run->add_flag("--allow-infeasible", run_opt.allow_infeasible, "Run even if no balanced flow exists");
  run->add_option("--out", run_out, "Output directory (default: $FLOWBAL_OUT or ./flowbal-out)");

  GenerateOptions gen_opt;
  std::string gen_alg = "alg1";
  std::string gen_out;
  auto* gen = app.add_subcommand("generate", "Emit a random strongly connected feasible scenario");
  gen->add_option("-n,--nodes", gen_opt.params.nodes, "Node count")->check(CLI::Range(2, 100000));
  gen->add_option("--density", gen_opt.params.density, "Probability of each extra ordered edge")
      ->check(CLI::Range(0.0, 1.0));
  gen->add_option("--weight-max", gen_opt.params.weight_max, "Largest planted cycle weight")
      ->check(CLI::PositiveNumber);
  gen->add_option("--slack", gen_opt.params.slack, "Largest distance of a bound from the planted flow")
      ->check(CLI::NonNegativeNumber);
  gen->add_option("--seed", gen_opt.params.seed, "Generator seed");
  gen->add_option("--algorithm", gen_alg, "alg1 or alg2")->check(CLI::IsMember({"alg1", "alg2"}));
  gen->add_option("--max-delay", gen_opt.max_delay, "Uniform delay bound (alg1)")->check(CLI::NonNegativeNumber);
  gen->add_option("--drop", gen_opt.drop, "Uniform drop probability (alg2)")->check(CLI::Range(0.0, 0.999999));
  gen->add_option("--out", gen_out, "Write to this file instead of stdout");

  SweepOptions sweep_opt;
  std::string seeds_text;
  std::string sweep_out;
  auto* sw = app.add_subcommand("sweep", "Run a scenario under many seeds");
  add_source_options(sw, sweep_opt.source);
  sw->add_option("--seeds", seeds_text, "Seed list, e.g. 1-100 or 1,5,9")->required();
  sw->add_option("--max-iters", sweep_opt.max_iterations, "Iteration budget per run");
  sw->add_flag("--allow-infeasible", sweep_opt.allow_infeasible, "Run even if no balanced flow exists");
  sw->add_option("--threads", sweep_opt.threads, "Worker threads (0: all cores)");
  sw->add_option("--out", sweep_out, "Directory for sweep.txt");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (*check) return cmd_check(check_path, std::cout, std::cerr);
  if (*run) {
    if (!run_out.empty()) run_opt.out_dir = run_out;
    return cmd_run(run_opt, std::cout, std::cerr);
  }
  if (*gen) {
    gen_opt.algorithm =
        gen_alg == "alg2" ? flowbal::Algorithm::drop_resilient : flowbal::Algorithm::delay_tolerant;
    if (!gen_out.empty()) gen_opt.out_path = gen_out;
    return cmd_generate(gen_opt, std::cout, std::cerr);
  }
  if (*sw) {
    try {
      sweep_opt.seeds = parse_seed_list(seeds_text);
    } catch (const std::exception& e) {
      std::cerr << e.what() << "\n";
      return kUsage;
    }
    if (!sweep_out.empty()) sweep_opt.out_dir = sweep_out;
    return cmd_sweep(sweep_opt, std::cout, std::cerr);
  }
  return kUsage;
}
