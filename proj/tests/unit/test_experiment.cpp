#include "emplan/harness/analysis.hpp"
#include "emplan/harness/config.hpp"
#include "emplan/harness/experiment.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace emplan::harness {
namespace {

namespace fs = std::filesystem;

const char* kSmall = R"(
[experiment]
name = small
runs = 4
episodes = 30
bin_size = 10
seed_base = 100

[env]
env = corridor
slip_prob = 1/3
phase_length = 10

[features]
features = random_binary
feature_d = 14
feature_k = 5

[agent]
planning_steps = 2
model_batch = 2

[agent.qlearning]
action_value_step_size = 0.1

[agent.alg1]
value_step_size = 0.05

[agent.alg3]
value_step_size = 0.05
)";

fs::path tempDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "emplan_test_experiment" / name;
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(Experiment, ShapeAndSeeds) {
  const ExperimentConfig cfg = parseConfig(kSmall);
  EXPECT_EQ(runSeed(cfg, 3).value, 103u);
  const ExperimentResult r = runExperiment(cfg, RunOptions{1, false});
  ASSERT_EQ(r.agents.size(), 3u);
  for (const auto& a : r.agents) {
    EXPECT_EQ(a.curve.perRun.size(), 4u);
    EXPECT_EQ(a.curve.episodes(), 30u);
    EXPECT_EQ(a.curve.binned.size(), 3u);
    EXPECT_EQ(a.curve.runIds, (std::vector<std::size_t>{0, 1, 2, 3}));
    EXPECT_EQ(a.curve.binned, binCurve(a.curve.perRun, 10));
  }
  EXPECT_EQ(r.configHash, gitBlobHash(cfg.canonical()));
  EXPECT_EQ(&r.agent("alg1"), &r.agents[1]);
  EXPECT_THROW(r.agent("nobody"), UsageError);
}

TEST(Experiment, RunsMatchSingleRuns) {
  const ExperimentConfig cfg = parseConfig(kSmall);
  const ExperimentResult r = runExperiment(cfg, RunOptions{2, false});
  for (std::size_t run = 0; run < cfg.runs; ++run) {
    EXPECT_EQ(runSingle(cfg, cfg.agents[2], run).returns, r.agents[2].curve.perRun[run]);
  }
}

TEST(Experiment, WorkerCountDoesNotChangeResults) {
  const ExperimentConfig cfg = parseConfig(kSmall);
  const ExperimentResult one = runExperiment(cfg, RunOptions{1, false});
  const ExperimentResult three = runExperiment(cfg, RunOptions{3, false});
  for (std::size_t a = 0; a < one.agents.size(); ++a) {
    EXPECT_EQ(one.agents[a].curve.perRun, three.agents[a].curve.perRun);
  }
}

TEST(Experiment, ArtifactsAreByteIdenticalOnRerun) {
  ExperimentConfig cfg = parseConfig(kSmall);
  const fs::path first = tempDir("a");
  cfg.output = first;
  runExperiment(cfg, RunOptions{1, true});
  cfg.output = tempDir("b");
  runExperiment(cfg, RunOptions{2, true});
  for (const char* f : {"qlearning.runs.csv", "alg1.binned.csv", "alg3.runs.csv", "metadata.txt"}) {
    const std::string a = slurp(first / f);
    EXPECT_FALSE(a.empty()) << f;
    EXPECT_EQ(a, slurp(cfg.output / f)) << f;
  }
  const std::string meta = slurp(cfg.output / "metadata.txt");
  EXPECT_EQ(meta.rfind("config_hash = " + gitBlobHash(cfg.canonical()) + "\n", 0), 0u);
  EXPECT_NE(meta.find("result.alg1.runs_kept = 4\n"), std::string::npos);
  EXPECT_NE(meta.find("result.alg1.feature_collisions = "), std::string::npos);
}

TEST(Experiment, MetadataReportsDroppedPartialBin) {
  ConfigDocument doc = ConfigDocument::parse(kSmall);
  applyOverride(doc, "episodes", "25");
  ExperimentConfig cfg = buildConfig(doc);
  cfg.output = tempDir("partial");
  runExperiment(cfg, RunOptions{1, true});
  EXPECT_NE(slurp(cfg.output / "metadata.txt").find("result.qlearning.dropped_partial_bin_episodes = 5\n"),
            std::string::npos);
}

TEST(Experiment, DivergencePolicy) {
  ConfigDocument doc = ConfigDocument::parse(kSmall);
  applyOverride(doc, "agent.qlearning.action_value_step_size", "1e6");
  const ExperimentConfig cfg = buildConfig(doc);
  const SingleRun run = runSingle(cfg, cfg.agents[0], 0);
  EXPECT_TRUE(run.diverged);
  EXPECT_FALSE(run.error.empty());
  EXPECT_THROW(runExperiment(cfg, RunOptions{1, false}), DivergenceError);
  ExperimentConfig excluded = cfg;
  excluded.excludeDiverged = true;
  // Every qlearning run diverges, so nothing is left to report.
  EXPECT_THROW(runExperiment(excluded, RunOptions{1, false}), DivergenceError);
}

TEST(Experiment, ResolveWorkers) {
  EXPECT_EQ(resolveWorkers(3), 3u);
  ::setenv(kWorkersEnvVar, "2", 1);
  EXPECT_EQ(resolveWorkers(0), 2u);
  ::unsetenv(kWorkersEnvVar);
  EXPECT_GE(resolveWorkers(0), 1u);
}

TEST(Sweep, GridAxisParsing) {
  const GridAxis axis = parseGridAxis("agent.alg1.value_step_size=0.1,0.3");
  EXPECT_EQ(axis.key, "agent.alg1.value_step_size");
  EXPECT_EQ(axis.values, (std::vector<std::string>{"0.1", "0.3"}));
  EXPECT_THROW(parseGridAxis("novalue="), ConfigError);
  EXPECT_THROW(parseGridAxis("=1,2"), ConfigError);
  EXPECT_THROW(parseGridAxis("key"), ConfigError);
  EXPECT_THROW(parseGridAxis("key=,"), ConfigError);
}

TEST(Sweep, SingleCellEqualsRunExperiment) {
  const ConfigDocument doc = ConfigDocument::parse(kSmall);
  const SweepResult s = sweep(doc, {parseGridAxis("agent.alg1.value_step_size=0.05")}, SweepProtocol{30, 4},
                              RunOptions{1, false});
  ASSERT_EQ(s.cells.size(), 1u);
  EXPECT_EQ(s.cells[0].label, "agent.alg1.value_step_size=0.05");
  const ExperimentResult r = runExperiment(buildConfig(doc), RunOptions{1, false});
  for (std::size_t a = 0; a < r.agents.size(); ++a) {
    const MeanSe expected = finalBinPerformance(r.agents[a].curve);
    EXPECT_EQ(s.cells[0].finalMean[a], expected.mean);
    EXPECT_EQ(s.cells[0].finalSe[a], expected.se);
    EXPECT_EQ(s.best[a], 0u);
  }
  EXPECT_EQ(s.agentLabels, (std::vector<std::string>{"qlearning", "alg1", "alg3"}));
}

TEST(Sweep, CartesianProductAndTieRule) {
  const ConfigDocument doc = ConfigDocument::parse(kSmall);
  // Values that only touch alg1: qlearning and alg3 tie across all cells.
  const SweepResult s = sweep(doc,
                              {parseGridAxis("agent.alg1.value_step_size=0.1,0.01"),
                               parseGridAxis("agent.alg1.model_step_size=0.2,0.1")},
                              SweepProtocol{20, 2}, RunOptions{1, false});
  ASSERT_EQ(s.cells.size(), 4u);
  EXPECT_EQ(s.cells[0].label, "agent.alg1.value_step_size=0.1 agent.alg1.model_step_size=0.2");
  EXPECT_EQ(s.cells[3].label, "agent.alg1.value_step_size=0.01 agent.alg1.model_step_size=0.1");
  // Lexicographically first label among the tying cells.
  std::size_t first = 0;
  for (std::size_t c = 1; c < s.cells.size(); ++c) {
    if (s.cells[c].label < s.cells[first].label) {
      first = c;
    }
  }
  EXPECT_EQ(s.best[0], first);
  EXPECT_EQ(s.best[2], first);
  for (std::size_t c = 0; c < s.cells.size(); ++c) {
    EXPECT_LE(s.cells[c].finalMean[1], s.cells[s.best[1]].finalMean[1]);
  }
  std::ostringstream csv;
  writeSweepCsv(csv, s);
  const std::string table = csv.str();
  EXPECT_EQ(table.rfind("cell,agent,final_mean,final_se,best\n", 0), 0u);
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 1 + 4 * 3);
  EXPECT_THROW(sweep(doc, {}, SweepProtocol{}, RunOptions{1, false}), ConfigError);
}

}  // namespace
}  // namespace emplan::harness
