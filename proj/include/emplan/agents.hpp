#pragma once

#include "emplan/common.hpp"
#include "emplan/environment.hpp"
#include "emplan/features.hpp"
#include "emplan/models.hpp"
#include "emplan/planning.hpp"
#include "emplan/rng.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace emplan {

enum class AgentKind {
  QLearning,  // one-step Q-learning, no model
  QPlanTrue,  // Q-planning with the environment's true distribution model
  QPlanEmAv,  // Q-planning with a learned expectation model and action values
  Alg1,       // state values + one-step lookahead at decision time
  Alg2,       // state values + action values cached from backups
  Alg3,       // state values + softmax policy cached from backups
};

std::string_view toString(AgentKind kind);
/// Accepts the config spellings: qlearning, qplan-true, qplan-em-av, alg1, alg2, alg3.
AgentKind parseAgentKind(std::string_view name);

enum class PlanningCadence { PerStep, PerEpisode };

struct AgentConfig {
  AgentKind kind = AgentKind::QLearning;
  double valueStepSize = 0.01;
  double actionValueStepSize = 0.1;
  double policyStepSize = 0.001;
  double modelStepSize = 0.1;
  std::size_t planningSteps = 0;
  double epsilon = 0.1;
  double gamma = 1.0;
  std::size_t bufferCapacity = 10'000;
  /// Drop replayed experience whenever the environment changes phase.
  bool bufferPhaseReset = false;
  /// Extra model updates per real step, sampled from the buffer.
  std::size_t modelBatch = 16;
  PlanningCadence cadence = PlanningCadence::PerStep;
  PlanningCadence modelBatchCadence = PlanningCadence::PerStep;
  /// Run Alg. 2's direct cache update literally as w_q += α(δ − q̂)∇q̂.
  bool alg2LiteralPseudocode = false;
  /// Cache backups for every action during planning, not only the argmax.
  bool cacheAllActions = false;

  bool usesStateValues() const;
  bool usesActionValues() const;
  bool usesPolicy() const { return kind == AgentKind::Alg3; }
  bool usesLearnedModel() const;
  bool plans() const { return kind != AgentKind::QLearning; }

  /// Throws UsageError on out-of-range parameters for the heads `kind` uses.
  void validate() const;
};

/// Softmax policy over linear preferences θ_aᵀs.
struct PolicyParams {
  std::vector<Eigen::VectorXd> theta;
  double stepSize = 0.0;

  PolicyParams() = default;
  PolicyParams(std::size_t d, std::size_t numActions, double alpha)
      : theta(numActions, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d))), stepSize(alpha) {}

  std::vector<double> probabilities(const FeatureVector& s) const;
  Action sample(const FeatureVector& s, Rng& rng) const;
  /// ∇_θ log π(a|s): s(1 − π(a|s)) on θ_a and −s π(b|s) on every other θ_b.
  std::vector<Eigen::VectorXd> logGradient(const FeatureVector& s, Action a) const;
  /// θ += α δ ∇ log π(a|s).
  void step(const FeatureVector& s, Action a, double delta);
};

/// ε-greedy: with probability ε pick uniformly among all actions, otherwise
/// the greedy one (lowest index on ties).
struct ExplorationPolicy {
  double epsilon = 0.1;

  Action select(const std::vector<double>& values, Rng& rng) const;
};

/// b(s,a,w) = r(s,a) + γ s̄(s,a)ᵀw.
double backupValue(const FeatureVector& s, Action a, const ExpectationModel& m, const ValueWeights& w,
                   Discount gamma);

/// ε-greedy over backup values.
Action selectActionAlg1(const FeatureVector& s, const ExpectationModel& m, const ValueWeights& w,
                        const ExplorationPolicy& explore, Rng& rng, Discount gamma);

/// w_q[a] += α (b − w_q[a]ᵀs) s.
void alg2CacheUpdate(ActionValueWeights& q, const FeatureVector& s, Action a, double backup);

/// δ = r(s,a) + γ s̄(s,a)ᵀw − sᵀw followed by θ += α_θ δ ∇log π(a|s). Returns δ.
double alg3PolicyUpdate(PolicyParams& policy, const FeatureVector& s, Action a, const ExpectationModel& m,
                        const ValueWeights& w, Discount gamma);

struct EpisodeResult {
  double totalReward = 0.0;
  std::size_t steps = 0;
  bool truncated = false;
};

struct AgentStats {
  std::size_t episodes = 0;
  std::size_t truncatedEpisodes = 0;
  std::size_t planningBackups = 0;
  /// Planning rounds skipped because the buffer was still empty.
  std::size_t planningSkipped = 0;
  std::size_t bufferResets = 0;
};

/// One learning agent: its heads, its model, its replay buffer and its
/// exploration stream. Owns no environment; runEpisode drives the one given.
class Agent {
 public:
  Agent(AgentConfig config, FeatureMap features, std::size_t numActions, RngSeed seed);

  EpisodeResult runEpisode(Environment& env);

  /// Action the agent would take at `s` right now (consumes exploration randomness).
  Action decide(const FeatureVector& s);

  const AgentConfig& config() const { return config_; }
  const FeatureMap& features() const { return features_; }
  const ValueWeights& values() const { return values_; }
  const ActionValueWeights& actionValues() const { return actionValues_; }
  const PolicyParams& policy() const { return policy_; }
  const Ztem& model() const { return model_; }
  const BackupBuffer& buffer() const { return buffer_; }
  const AgentStats& stats() const { return stats_; }

  /// Replaces the learned model; used to study planning with a fixed exact model.
  void setModel(Ztem model) { model_ = std::move(model); }
  void freezeModel(bool frozen) { modelFrozen_ = frozen; }

 private:
  void learnDirect(const Transition& t);
  void learnModel(const Transition& t);
  void replayModel(std::size_t samples);
  void plan(std::size_t backups);

  AgentConfig config_;
  FeatureMap features_;
  std::size_t numActions_;
  Discount gamma_;
  ExplorationPolicy explore_;
  ValueWeights values_;
  ActionValueWeights actionValues_;
  PolicyParams policy_;
  Ztem model_;
  bool modelFrozen_ = false;
  std::optional<TabularDistributionModel> trueModel_;
  BackupBuffer buffer_;
  Rng rng_;
  std::size_t lastPhase_ = 0;
  AgentStats stats_;
  std::vector<double> scratch_;
};

}  // namespace emplan
