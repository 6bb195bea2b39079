#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "flowbal/cli.hpp"

namespace fb = flowbal;
namespace cli = flowbal::cli;
namespace fs = std::filesystem;

namespace {

const fs::path kData = FLOWBAL_TEST_DATA;

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / "flowbal_cli_test" / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(CmdCheck, Feasible) {
  std::ostringstream out, err;
  EXPECT_EQ(cli::cmd_check((kData / "feasible.scn").string(), out, err), cli::kOk);
  EXPECT_EQ(out.str(), "Feasible\n");
}

TEST(CmdCheck, Infeasible) {
  std::ostringstream out, err;
  EXPECT_EQ(cli::cmd_check((kData / "infeasible.scn").string(), out, err), cli::kNegative);
  EXPECT_EQ(out.str(), "Infeasible: S={v2}, lhs=5 > rhs=2\n");
}

TEST(CmdCheck, MalformedAndMissing) {
  std::ostringstream out, err;
  EXPECT_EQ(cli::cmd_check((kData / "malformed.scn").string(), out, err), cli::kUsage);
  EXPECT_NE(err.str().find("line 5, column 8"), std::string::npos) << err.str();
  EXPECT_EQ(cli::cmd_check((kData / "nope.scn").string(), out, err), cli::kUsage);
}

TEST(CmdRun, WritesOutputsWithFingerprint) {
  const auto dir = scratch("run");
  cli::RunOptions opt;
  opt.source.preset = "sync";
  opt.seed = 4;
  opt.out_dir = dir;
  std::ostringstream out, err;
  ASSERT_EQ(cli::cmd_run(opt, out, err), cli::kOk) << err.str();
  for (const char* f : {"trace.csv", "summary.csv", "balances.csv", "flows.csv", "audit.txt"}) {
    ASSERT_TRUE(fs::exists(dir / f)) << f;
  }
  const auto summary = slurp(dir / "summary.csv");
  const auto fp = fb::hex64(fb::fingerprint([] {
    auto sc = fb::make_preset("sync");
    sc.seed = 4;
    return sc;
  }()));
  EXPECT_EQ(summary.rfind("# scenario=" + fp + " seed=4 algorithm=alg1\nk,epsilon,epsilon_perceived,inflight\n", 0),
            0u);
  EXPECT_EQ(slurp(dir / "trace.csv").find("k,entity,metric,value\n"), summary.find('\n') + 1);
  EXPECT_NE(slurp(dir / "audit.txt").find("violations: 0"), std::string::npos);
}

TEST(CmdRun, FromFileAndInfeasibleGate) {
  const auto dir = scratch("gate");
  std::ostringstream out, err;
  cli::RunOptions opt;
  opt.source.path = (kData / "feasible.scn").string();
  opt.out_dir = dir;
  EXPECT_EQ(cli::cmd_run(opt, out, err), cli::kOk) << err.str();

  opt.source.path = (kData / "infeasible.scn").string();
  EXPECT_EQ(cli::cmd_run(opt, out, err), cli::kUsage);
  EXPECT_NE(err.str().find("--allow-infeasible"), std::string::npos);

  opt.allow_infeasible = true;
  opt.max_iterations = 300;
  EXPECT_EQ(cli::cmd_run(opt, out, err), cli::kNegative);
  EXPECT_NE(out.str().find("max iterations exceeded after 300"), std::string::npos);
}

TEST(CmdRun, UsageErrors) {
  std::ostringstream out, err;
  cli::RunOptions opt;
  EXPECT_EQ(cli::cmd_run(opt, out, err), cli::kUsage);
  opt.source.preset = "fig9";
  EXPECT_EQ(cli::cmd_run(opt, out, err), cli::kUsage);
  opt.source.preset = "sync";
  opt.source.path = (kData / "feasible.scn").string();
  EXPECT_EQ(cli::cmd_run(opt, out, err), cli::kUsage);
  opt.source.path.reset();
  opt.max_iterations = 0;
  EXPECT_EQ(cli::cmd_run(opt, out, err), cli::kUsage);
}

TEST(CmdRun, DefaultOutputDirFromEnvironment) {
  const auto dir = scratch("env");
  ::setenv("FLOWBAL_OUT", dir.c_str(), 1);
  EXPECT_EQ(cli::default_output_dir(), dir);
  cli::RunOptions opt;
  opt.source.path = (kData / "feasible.scn").string();
  std::ostringstream out, err;
  EXPECT_EQ(cli::cmd_run(opt, out, err), cli::kOk);
  EXPECT_TRUE(fs::exists(dir / "summary.csv"));
  ::unsetenv("FLOWBAL_OUT");
  EXPECT_EQ(cli::default_output_dir(), fs::path("flowbal-out"));
}

TEST(CmdGenerate, MinimalAndSeeded) {
  std::ostringstream out, err;
  cli::GenerateOptions opt;
  opt.params.nodes = 2;
  ASSERT_EQ(cli::cmd_generate(opt, out, err), cli::kOk);
  const auto sc = fb::parse_scenario(out.str());
  EXPECT_EQ(sc.graph, fb::Digraph(2, {{0, 1}, {1, 0}}));
  EXPECT_TRUE(fb::check_circulation(sc.graph, sc.bounds).feasible);

  std::ostringstream a, b;
  opt.params.nodes = 20;
  opt.params.seed = 1;
  cli::cmd_generate(opt, a, err);
  opt.params.seed = 2;
  cli::cmd_generate(opt, b, err);
  const auto sa = fb::parse_scenario(a.str()), sb = fb::parse_scenario(b.str());
  EXPECT_TRUE(fb::check_circulation(sa.graph, sa.bounds).feasible);
  EXPECT_NE(fb::fingerprint(sa), fb::fingerprint(sb));
  EXPECT_NE(sa.graph, sb.graph);
}

TEST(CmdGenerate, WritesFileAndRejectsBadParams) {
  const auto dir = scratch("gen");
  fs::create_directories(dir);
  std::ostringstream out, err;
  cli::GenerateOptions opt;
  opt.algorithm = fb::Algorithm::drop_resilient;
  opt.drop = 0.3;
  opt.out_path = (dir / "g.scn").string();
  ASSERT_EQ(cli::cmd_generate(opt, out, err), cli::kOk);
  const auto sc = fb::load_scenario(*opt.out_path);
  EXPECT_EQ(sc.algorithm, fb::Algorithm::drop_resilient);
  EXPECT_DOUBLE_EQ(sc.channel.drop_probability, 0.3);

  opt.params.nodes = 1;
  EXPECT_EQ(cli::cmd_generate(opt, out, err), cli::kUsage);
}

TEST(CmdSweep, ConvergesOnDelayPreset) {
  cli::SweepOptions opt;
  opt.source.preset = "fig2";
  opt.seeds = cli::parse_seed_list("1-6");
  opt.threads = 3;
  opt.out_dir = scratch("sweep");
  std::ostringstream out, err;
  EXPECT_EQ(cli::cmd_sweep(opt, out, err), cli::kOk) << err.str();
  EXPECT_NE(out.str().find("converged: 6/6"), std::string::npos);
  EXPECT_NE(out.str().find("audit failures: 0"), std::string::npos);
  EXPECT_EQ(slurp(*opt.out_dir / "sweep.txt"), out.str());
}

TEST(CmdSweep, ResultIndependentOfThreadCount) {
  const auto sc = fb::make_preset("fig3");
  const auto seeds = cli::parse_seed_list("1-8");
  EXPECT_EQ(fb::sweep(sc, seeds, 1).report(), fb::sweep(sc, seeds, 4).report());
}

TEST(CmdSweep, InfeasibleNeverConverges) {
  cli::SweepOptions opt;
  opt.source.path = (kData / "infeasible.scn").string();
  opt.seeds = cli::parse_seed_list("1-10");
  opt.allow_infeasible = true;
  opt.max_iterations = 200;
  std::ostringstream out, err;
  EXPECT_EQ(cli::cmd_sweep(opt, out, err), cli::kNegative);
  EXPECT_NE(out.str().find("converged: 0/10"), std::string::npos);
}

TEST(SeedList, Parsing) {
  EXPECT_EQ(cli::parse_seed_list("3"), (std::vector<std::uint64_t>{3}));
  EXPECT_EQ(cli::parse_seed_list("1-3,7"), (std::vector<std::uint64_t>{1, 2, 3, 7}));
  EXPECT_THROW(cli::parse_seed_list(""), std::invalid_argument);
  EXPECT_THROW(cli::parse_seed_list("5-2"), std::invalid_argument);
  EXPECT_THROW(cli::parse_seed_list("1,,2"), std::invalid_argument);
  EXPECT_THROW(cli::parse_seed_list("x"), std::invalid_argument);
  EXPECT_THROW(cli::parse_seed_list("1-2x"), std::invalid_argument);
}
