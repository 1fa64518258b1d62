#include "emplan/harness/experiment.hpp"

#include "emplan/harness/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace emplan::harness {

std::size_t resolveWorkers(std::size_t requested) {
  if (requested > 0) {
    return requested;
  }
  if (const char* env = std::getenv(kWorkersEnvVar)) {
    const long value = std::strtol(env, nullptr, 10);
    if (value > 0) {
      return static_cast<std::size_t>(value);
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::unique_ptr<Environment> makeEnvironment(const EnvConfig& cfg, RngSeed seed) {
  std::unique_ptr<Environment> env;
  if (cfg.kind == EnvKind::Counterexample) {
    env = std::make_unique<CounterexampleMdp>(seed, cfg.counterexampleBReward);
  } else {
    env = std::make_unique<CorridorEnv>(seed, cfg.corridor);
  }
  env->setStepCap(cfg.stepCap);
  return env;
}

FeatureMap makeFeatures(const FeatureConfig& cfg, std::size_t numObservations, RngSeed seed) {
  if (cfg.kind == FeatureKind::OneHot) {
    return FeatureMap::oneHot(numObservations);
  }
  return generateRandomBinaryTable(numObservations, cfg.d, cfg.k, seed);
}

RngSeed runSeed(const ExperimentConfig& cfg, std::size_t runIndex) {
  return RngSeed{cfg.seedBase + static_cast<std::uint64_t>(runIndex)};
}

SingleRun runSingle(const ExperimentConfig& cfg, const AgentSpec& agent, std::size_t runIndex) {
  const RngSeed seed = runSeed(cfg, runIndex);
  std::unique_ptr<Environment> env = makeEnvironment(cfg.env, seed);
  FeatureMap features = makeFeatures(cfg.features, env->numObservations(), seed);
  SingleRun run;
  run.featureCollisions = features.collisions();
  Agent learner(agent.config, std::move(features), env->numActions(), seed);
  run.returns.reserve(cfg.episodes);
  try {
    for (std::size_t e = 0; e < cfg.episodes; ++e) {
      run.returns.push_back(learner.runEpisode(*env).totalReward);
    }
  } catch (const DivergenceError& err) {
    run.diverged = true;
    run.error = err.what();
  }
  run.stats = learner.stats();
  return run;
}

const AgentResult& ExperimentResult::agent(const std::string& label) const {
  for (const auto& a : agents) {
    if (a.label == label) {
      return a;
    }
  }
  throw UsageError("no agent labelled '" + label + "'");
}

ExperimentResult runExperiment(const ExperimentConfig& cfg, const RunOptions& options) {
  cfg.validate();
  const std::size_t jobs = cfg.agents.size() * cfg.runs;
  std::vector<SingleRun> results(jobs);
  std::vector<std::exception_ptr> failures(jobs);
  std::atomic<std::size_t> nextJob{0};

  auto worker = [&] {
    for (std::size_t job = nextJob++; job < jobs; job = nextJob++) {
      try {
        results[job] = runSingle(cfg, cfg.agents[job / cfg.runs], job % cfg.runs);
      } catch (...) {
        failures[job] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::min(resolveWorkers(options.workers), jobs);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < workers; ++i) {
      pool.emplace_back(worker);
    }
    for (auto& t : pool) {
      t.join();
    }
  }
  for (const auto& failure : failures) {
    if (failure) {
      std::rethrow_exception(failure);
    }
  }

  ExperimentResult result;
  result.configHash = gitBlobHash(cfg.canonical());
  for (std::size_t a = 0; a < cfg.agents.size(); ++a) {
    AgentResult agent;
    agent.label = cfg.agents[a].label;
    agent.curve.binSize = cfg.binSize;
    for (std::size_t r = 0; r < cfg.runs; ++r) {
      SingleRun& run = results[a * cfg.runs + r];
      agent.truncatedEpisodes += run.stats.truncatedEpisodes;
      agent.featureCollisions += run.featureCollisions;
      agent.planningSkipped += run.stats.planningSkipped;
      if (run.diverged) {
        agent.divergedRuns.push_back(r);
        if (!cfg.excludeDiverged) {
          throw DivergenceError("agent '" + agent.label + "' run " + std::to_string(r) + " diverged: " + run.error);
        }
        continue;
      }
      agent.curve.perRun.push_back(std::move(run.returns));
      agent.curve.runIds.push_back(r);
    }
    if (agent.curve.perRun.empty()) {
      throw DivergenceError("agent '" + agent.label + "': every run diverged");
    }
    agent.curve.binned = binCurve(agent.curve.perRun, cfg.binSize);
    result.agents.push_back(std::move(agent));
  }
  if (options.writeArtifacts) {
    writeArtifacts(cfg, result, cfg.output);
  }
  return result;
}

void writeArtifacts(const ExperimentConfig& cfg, const ExperimentResult& result,
                    const std::filesystem::path& directory) {
  std::filesystem::create_directories(directory);
  for (const auto& agent : result.agents) {
    std::ofstream runs(directory / (agent.label + ".runs.csv"), std::ios::binary);
    writePerRunCsv(runs, agent.curve.perRun, agent.curve.runIds);
    std::ofstream binned(directory / (agent.label + ".binned.csv"), std::ios::binary);
    writeBinnedCsv(binned, agent.curve.binned, agent.curve.binSize);
  }
  std::ofstream meta(directory / "metadata.txt", std::ios::binary);
  meta << "config_hash = " << result.configHash << '\n' << cfg.canonical();
  for (const auto& agent : result.agents) {
    const std::string p = "result." + agent.label + ".";
    meta << p << "runs_kept = " << agent.curve.perRun.size() << '\n';
    meta << p << "diverged_runs =";
    for (auto r : agent.divergedRuns) {
      meta << ' ' << r;
    }
    meta << '\n'
         << p << "truncated_episodes = " << agent.truncatedEpisodes << '\n'
         << p << "feature_collisions = " << agent.featureCollisions << '\n'
         << p << "planning_skipped = " << agent.planningSkipped << '\n';
    const std::size_t dropped = agent.curve.episodes() % agent.curve.binSize;
    if (dropped > 0) {
      meta << p << "dropped_partial_bin_episodes = " << dropped << '\n';
    }
  }
}

GridAxis parseGridAxis(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
    throw ConfigError("grid axis must look like key=v1,v2,... (got '" + spec + "')");
  }
  GridAxis axis{spec.substr(0, eq), {}};
  std::stringstream values(spec.substr(eq + 1));
  std::string v;
  while (std::getline(values, v, ',')) {
    if (!v.empty()) {
      axis.values.push_back(v);
    }
  }
  if (axis.values.empty()) {
    throw ConfigError("grid axis '" + axis.key + "' has no values");
  }
  return axis;
}

SweepResult sweep(const ConfigDocument& templ, const std::vector<GridAxis>& grid, const SweepProtocol& protocol,
                  const RunOptions& options) {
  if (grid.empty()) {
    throw ConfigError("sweep needs at least one grid axis");
  }
  std::size_t cells = 1;
  for (const auto& axis : grid) {
    cells *= axis.values.size();
  }
  SweepResult out;
  for (std::size_t c = 0; c < cells; ++c) {
    ConfigDocument doc = templ;
    SweepCell cell;
    std::size_t rest = c;
    for (std::size_t i = grid.size(); i-- > 0;) {
      const auto& axis = grid[i];
      const std::string& value = axis.values[rest % axis.values.size()];
      rest /= axis.values.size();
      applyOverride(doc, axis.key, value);
      cell.label = axis.key + "=" + value + (cell.label.empty() ? "" : " " + cell.label);
    }
    applyOverride(doc, "episodes", std::to_string(protocol.episodes));
    applyOverride(doc, "runs", std::to_string(protocol.runs));
    ExperimentConfig cfg = buildConfig(doc);
    cfg.binSize = std::min(cfg.binSize, cfg.episodes);
    RunOptions quiet = options;
    quiet.writeArtifacts = false;
    const ExperimentResult result = runExperiment(cfg, quiet);
    if (out.agentLabels.empty()) {
      for (const auto& a : result.agents) {
        out.agentLabels.push_back(a.label);
      }
    }
    for (const auto& a : result.agents) {
      const MeanSe finalPerf = finalBinPerformance(a.curve);
      cell.finalMean.push_back(finalPerf.mean);
      cell.finalSe.push_back(finalPerf.se);
    }
    out.cells.push_back(std::move(cell));
  }
  for (std::size_t a = 0; a < out.agentLabels.size(); ++a) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < out.cells.size(); ++c) {
      const double v = out.cells[c].finalMean[a];
      const double b = out.cells[best].finalMean[a];
      if (v > b || (v == b && out.cells[c].label < out.cells[best].label)) {
        best = c;
      }
    }
    out.best.push_back(best);
  }
  return out;
}

void writeSweepCsv(std::ostream& out, const SweepResult& result) {
  out << "cell,agent,final_mean,final_se,best\n";
  for (std::size_t c = 0; c < result.cells.size(); ++c) {
    for (std::size_t a = 0; a < result.agentLabels.size(); ++a) {
      out << '"' << result.cells[c].label << "\"," << result.agentLabels[a] << ','
          << formatNumber(result.cells[c].finalMean[a]) << ',' << formatNumber(result.cells[c].finalSe[a]) << ','
          << (result.best[a] == c ? 1 : 0) << '\n';
    }
  }
}

}  // namespace emplan::harness
