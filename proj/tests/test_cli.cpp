#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(DUOPOLY_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("duopoly_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string configs(const char* name) { return (fs::path(DUOPOLY_TEST_CONFIGS) / name).string(); }

// Two quick iterations for the resume tests.
fs::path two_iteration_config(const fs::path& dir) {
  const nlohmann::json j = {
      {"schema_version", 1},
      {"seed", 11},
      {"simulation", {{"days", 30}}},
      {"sampling", {{"initial", 6}, {"trim", 1}, {"cap", 20}, {"batch", 5}}},
      {"gsa",
       {{"schedule", {{{{"factor", "logistics"}, {"levels", 2}}}, {{{"factor", "safety_stock_cov"}, {"levels", 4}}}}},
        {"max_iterations", 2},
        {"stability", {{"steps", 100}}}}}};
  const fs::path p = dir / "two.json";
  std::ofstream(p) << j.dump(2);
  return p;
}

}  // namespace

TEST(Cli, SimulateIsByteReproducible) {
  const fs::path a = fresh("sim_a"), b = fresh("sim_b");
  const std::string common = " --config " + configs("smoke.json") + " --seed 5 -n 3 --trace";
  ASSERT_EQ(run("simulate" + common + " --out " + a.string()), 0);
  ASSERT_EQ(run("simulate" + common + " --jobs 2 --out " + b.string()), 0);
  EXPECT_EQ(slurp(a / "payoffs.json"), slurp(b / "payoffs.json"));
  EXPECT_EQ(slurp(a / "trace_0.csv"), slurp(b / "trace_0.csv"));
  EXPECT_TRUE(fs::exists(a / "trace_2.csv"));
  const auto j = nlohmann::json::parse(slurp(a / "payoffs.json"));
  EXPECT_FALSE(j.empty());
}

TEST(Cli, EstimateSolveStabilityPipeline) {
  const fs::path d = fresh("pipe");
  ASSERT_EQ(run("estimate --config " + configs("smoke.json") + " --out " + d.string()), 0);
  ASSERT_TRUE(fs::exists(d / "payoff_matrix.csv"));
  ASSERT_TRUE(fs::exists(d / "strategies.json"));
  const std::string m = (d / "payoff_matrix.csv").string();
  ASSERT_EQ(run("solve " + m + " --epsilon 100 --out " + d.string()), 0);
  ASSERT_TRUE(fs::exists(d / "solve.json"));
  ASSERT_EQ(run("stability " + m + " --steps 100 --out " + d.string()), 0);
  const auto s = nlohmann::json::parse(slurp(d / "stability.json"));
  EXPECT_FALSE(s.empty());
}

TEST(Cli, SmokeGsaWritesAllOutputs) {
  const fs::path d = fresh("smoke");
  ASSERT_EQ(run("gsa --config " + configs("smoke.json") + " --out " + d.string()), 0);
  for (const char* f : {"iteration_1.json", "payoff_matrix_1.csv", "summary.json", "timing.json", "config.json",
                        "fig7_equilibrium_share.csv", "table9_stability.csv", "checkpoints/checkpoint_1.json"})
    EXPECT_TRUE(fs::exists(d / f)) << f;
  const std::string before = slurp(d / "summary.json");
  fs::remove(d / "summary.json");
  ASSERT_EQ(run("report --out " + d.string()), 0);
  EXPECT_EQ(slurp(d / "summary.json"), before);
}

TEST(Cli, ResumedRunMatchesUninterruptedRun) {
  const fs::path cfg_dir = fresh("resume_cfg");
  const std::string cfg = two_iteration_config(cfg_dir).string();
  const fs::path full = fresh("resume_full"), part = fresh("resume_part");
  ASSERT_EQ(run("gsa --config " + cfg + " --out " + full.string()), 0);
  ASSERT_EQ(run("gsa --config " + cfg + " --out " + part.string()), 0);
  // drop the last iteration as if the process had been killed after the first checkpoint
  fs::remove(part / "checkpoints" / "checkpoint_2.json");
  fs::remove(part / "iteration_2.json");
  ASSERT_EQ(run("gsa --config " + cfg + " --jobs 2 --out " + part.string()), 0);
  for (const char* f : {"iteration_1.json", "iteration_2.json", "summary.json", "payoff_matrix_2.csv"})
    EXPECT_EQ(slurp(full / f), slurp(part / f)) << f;
  // a changed configuration must not silently resume
  EXPECT_NE(run("gsa --config " + cfg + " --seed 12 --out " + part.string()), 0);
}

TEST(Cli, ExitCodes) {
  const fs::path d = fresh("codes");
  EXPECT_EQ(run("simulate --config " + (d / "missing.json").string()), 2);
  std::ofstream(d / "bad.json") << R"({"schema_version": 1, "factors": {"psens_inv": [-0.1, -0.3, 0.5, -0.9]}})";
  EXPECT_EQ(run("simulate --config " + (d / "bad.json").string() + " --out " + d.string()), 2);
  std::ofstream(d / "unknown.json") << R"({"schema_version": 1, "nonsense": true})";
  EXPECT_EQ(run("gsa --config " + (d / "unknown.json").string() + " --out " + d.string()), 2);
  std::ofstream(d / "matrix.csv") << "strategy,x\nx,garbage\n";
  EXPECT_EQ(run("solve " + (d / "matrix.csv").string() + " --out " + d.string()), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run(""), 2);
}
