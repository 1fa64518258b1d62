#pragma once

#include "emplan/agents.hpp"
#include "emplan/environment.hpp"
#include "emplan/features.hpp"
#include "emplan/harness/config.hpp"
#include "emplan/harness/curve.hpp"

#include <cstddef>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

namespace emplan::harness {

/// Worker-count environment variable read when no explicit count is given.
inline constexpr const char* kWorkersEnvVar = "EMPLAN_WORKERS";

struct RunOptions {
  std::size_t workers = 0;  // 0: EMPLAN_WORKERS, else hardware concurrency
  bool writeArtifacts = true;
};

std::size_t resolveWorkers(std::size_t requested);

std::unique_ptr<Environment> makeEnvironment(const EnvConfig& cfg, RngSeed seed);
FeatureMap makeFeatures(const FeatureConfig& cfg, std::size_t numObservations, RngSeed seed);

/// Seed of run `runIndex`: seed_base + runIndex.
RngSeed runSeed(const ExperimentConfig& cfg, std::size_t runIndex);

struct SingleRun {
  std::vector<double> returns;
  AgentStats stats;
  std::size_t featureCollisions = 0;
  bool diverged = false;
  std::string error;
};

/// One seed of one agent. Same (config, agent, run) always yields the same
/// returns, regardless of which thread executes it.
SingleRun runSingle(const ExperimentConfig& cfg, const AgentSpec& agent, std::size_t runIndex);

struct AgentResult {
  std::string label;
  LearningCurve curve;
  std::vector<std::size_t> divergedRuns;
  std::size_t truncatedEpisodes = 0;
  std::size_t featureCollisions = 0;
  std::size_t planningSkipped = 0;
};

struct ExperimentResult {
  std::string configHash;
  std::vector<AgentResult> agents;

  const AgentResult& agent(const std::string& label) const;
};

/// Runs every agent over seeds seed_base .. seed_base + runs − 1. Diverged runs
/// abort the experiment with DivergenceError unless exclude_diverged is set.
/// With writeArtifacts, writes `<label>.runs.csv`, `<label>.binned.csv` and
/// `metadata.txt` under cfg.output.
ExperimentResult runExperiment(const ExperimentConfig& cfg, const RunOptions& options = {});

void writeArtifacts(const ExperimentConfig& cfg, const ExperimentResult& result,
                    const std::filesystem::path& directory);

struct GridAxis {
  std::string key;
  std::vector<std::string> values;
};

/// Parses `key=v1,v2,...`.
GridAxis parseGridAxis(const std::string& spec);

struct SweepProtocol {
  std::size_t episodes = 1000;
  std::size_t runs = 30;
};

struct SweepCell {
  std::string label;  // e.g. "value_step_size=0.01 planning_steps=5"
  std::vector<double> finalMean;  // per agent, mean of the final bin
  std::vector<double> finalSe;
};

struct SweepResult {
  std::vector<std::string> agentLabels;
  std::vector<SweepCell> cells;
  std::vector<std::size_t> best;  // per agent: index into cells
};

/// Cartesian product of `grid` over the template; each cell is run under
/// `protocol`. Ties for best go to the lexicographically first cell label.
SweepResult sweep(const ConfigDocument& templ, const std::vector<GridAxis>& grid, const SweepProtocol& protocol,
                  const RunOptions& options = {});

void writeSweepCsv(std::ostream& out, const SweepResult& result);

}  // namespace emplan::harness
