#include "emplan/agents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace emplan {

namespace {

struct KindName {
  AgentKind kind;
  std::string_view name;
};

constexpr KindName kKindNames[] = {
    {AgentKind::QLearning, "qlearning"}, {AgentKind::QPlanTrue, "qplan-true"},
    {AgentKind::QPlanEmAv, "qplan-em-av"}, {AgentKind::Alg1, "alg1"},
    {AgentKind::Alg2, "alg2"},           {AgentKind::Alg3, "alg3"},
};

void requirePositive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw UsageError(std::string(name) + " must be positive");
  }
}

}  // namespace

std::string_view toString(AgentKind kind) {
  for (const auto& entry : kKindNames) {
    if (entry.kind == kind) {
      return entry.name;
    }
  }
  return "unknown";
}

AgentKind parseAgentKind(std::string_view name) {
  for (const auto& entry : kKindNames) {
    if (entry.name == name) {
      return entry.kind;
    }
  }
  throw UsageError("unknown agent kind '" + std::string(name) + "'");
}

bool AgentConfig::usesStateValues() const {
  return kind == AgentKind::Alg1 || kind == AgentKind::Alg2 || kind == AgentKind::Alg3;
}

bool AgentConfig::usesActionValues() const {
  return kind == AgentKind::QLearning || kind == AgentKind::QPlanTrue || kind == AgentKind::QPlanEmAv ||
         kind == AgentKind::Alg2;
}

bool AgentConfig::usesLearnedModel() const {
  return kind == AgentKind::QPlanEmAv || usesStateValues();
}

void AgentConfig::validate() const {
  if (usesStateValues()) {
    requirePositive(valueStepSize, "value_step_size");
  }
  if (usesActionValues()) {
    requirePositive(actionValueStepSize, "action_value_step_size");
  }
  if (usesPolicy()) {
    requirePositive(policyStepSize, "policy_step_size");
  }
  if (usesLearnedModel()) {
    requirePositive(modelStepSize, "model_step_size");
  }
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw UsageError("epsilon must lie in [0, 1]");
  }
  Discount{gamma};
  if (bufferCapacity == 0) {
    throw UsageError("buffer_capacity must be positive");
  }
}

std::vector<double> PolicyParams::probabilities(const FeatureVector& s) const {
  std::vector<double> prefs(theta.size());
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < theta.size(); ++a) {
    prefs[a] = theta[a].dot(s);
    top = std::max(top, prefs[a]);
  }
  double total = 0.0;
  for (double& p : prefs) {
    p = std::exp(p - top);
    total += p;
  }
  for (double& p : prefs) {
    p /= total;
  }
  return prefs;
}

Action PolicyParams::sample(const FeatureVector& s, Rng& rng) const {
  const std::vector<double> probs = probabilities(s);
  double u = rng.uniform();
  for (std::size_t a = 0; a + 1 < probs.size(); ++a) {
    if (u < probs[a]) {
      return Action{a};
    }
    u -= probs[a];
  }
  return Action{probs.size() - 1};
}

std::vector<Eigen::VectorXd> PolicyParams::logGradient(const FeatureVector& s, Action a) const {
  const std::vector<double> probs = probabilities(s);
  std::vector<Eigen::VectorXd> grad(theta.size());
  for (std::size_t b = 0; b < theta.size(); ++b) {
    const double indicator = b == a.index ? 1.0 : 0.0;
    grad[b] = (indicator - probs[b]) * s;
  }
  return grad;
}

void PolicyParams::step(const FeatureVector& s, Action a, double delta) {
  requireFinite(delta, "policy update");
  const std::vector<double> probs = probabilities(s);
  for (std::size_t b = 0; b < theta.size(); ++b) {
    const double indicator = b == a.index ? 1.0 : 0.0;
    theta[b].noalias() += (stepSize * delta * (indicator - probs[b])) * s;
  }
}

Action ExplorationPolicy::select(const std::vector<double>& values, Rng& rng) const {
  if (epsilon > 0.0 && rng.uniform() < epsilon) {
    return Action{rng.index(values.size())};
  }
  return Action{argmaxLowest(values)};
}

double backupValue(const FeatureVector& s, Action a, const ExpectationModel& m, const ValueWeights& w,
                   Discount gamma) {
  return m.reward(s, a) + gamma.value() * m.expectedNextValue(s, a, w.w);
}

Action selectActionAlg1(const FeatureVector& s, const ExpectationModel& m, const ValueWeights& w,
                        const ExplorationPolicy& explore, Rng& rng, Discount gamma) {
  std::vector<double> backups(m.numActions());
  for (std::size_t a = 0; a < backups.size(); ++a) {
    backups[a] = backupValue(s, Action{a}, m, w, gamma);
  }
  return explore.select(backups, rng);
}

void alg2CacheUpdate(ActionValueWeights& q, const FeatureVector& s, Action a, double backup) {
  applyActionValueUpdate(q, s, a, backup);
}

double alg3PolicyUpdate(PolicyParams& policy, const FeatureVector& s, Action a, const ExpectationModel& m,
                        const ValueWeights& w, Discount gamma) {
  const double delta = backupValue(s, a, m, w, gamma) - w.value(s);
  policy.step(s, a, delta);
  return delta;
}

Agent::Agent(AgentConfig config, FeatureMap features, std::size_t numActions, RngSeed seed)
    : config_(config),
      features_(std::move(features)),
      numActions_(numActions),
      gamma_(config.gamma),
      explore_{config.epsilon},
      values_(features_.dimension(), config.valueStepSize),
      actionValues_(features_.dimension(), numActions, config.actionValueStepSize),
      policy_(features_.dimension(), numActions, config.policyStepSize),
      model_(features_.dimension(), numActions, config.modelStepSize),
      buffer_(config.bufferCapacity, seed),
      rng_(Rng::forStream(seed, Stream::Exploration)),
      scratch_(numActions) {
  config_.validate();
  if (numActions == 0) {
    throw UsageError("agent needs at least one action");
  }
}

Action Agent::decide(const FeatureVector& s) {
  switch (config_.kind) {
    case AgentKind::Alg1:
      return selectActionAlg1(s, model_, values_, explore_, rng_, gamma_);
    case AgentKind::Alg3:
      return policy_.sample(s, rng_);
    default:
      for (std::size_t a = 0; a < numActions_; ++a) {
        scratch_[a] = actionValues_.value(s, Action{a});
      }
      return explore_.select(scratch_, rng_);
  }
}

void Agent::learnDirect(const Transition& t) {
  switch (config_.kind) {
    case AgentKind::QLearning:
    case AgentKind::QPlanTrue:
    case AgentKind::QPlanEmAv: {
      const double target = t.reward + gamma_.value() * actionValues_.maxValue(t.nextState);
      applyActionValueUpdate(actionValues_, t.state, t.action, target);
      return;
    }
    case AgentKind::Alg1:
      tdDirectUpdate(values_, t.state, t.reward, t.nextState, gamma_);
      return;
    case AgentKind::Alg2: {
      const double realizedBackup = t.reward + gamma_.value() * values_.value(t.nextState);
      const double delta = tdDirectUpdate(values_, t.state, t.reward, t.nextState, gamma_);
      alg2CacheUpdate(actionValues_, t.state, t.action, config_.alg2LiteralPseudocode ? delta : realizedBackup);
      return;
    }
    case AgentKind::Alg3: {
      const double delta = tdDirectUpdate(values_, t.state, t.reward, t.nextState, gamma_);
      policy_.step(t.state, t.action, delta);
      return;
    }
  }
}

void Agent::learnModel(const Transition& t) {
  if (!config_.usesLearnedModel() || modelFrozen_) {
    return;
  }
  model_.learnStep(t.state, t.action, t.reward, t.nextState);
  if (config_.modelBatchCadence == PlanningCadence::PerStep) {
    replayModel(config_.modelBatch);
  }
}

void Agent::replayModel(std::size_t samples) {
  if (!config_.usesLearnedModel() || modelFrozen_) {
    return;
  }
  const std::size_t batch = std::min(samples, buffer_.size());
  for (std::size_t i = 0; i < batch; ++i) {
    const Transition& replay = buffer_.sample();
    model_.learnStep(replay.state, replay.action, replay.reward, replay.nextState);
  }
}

void Agent::plan(std::size_t backups) {
  if (backups == 0) {
    return;
  }
  if (buffer_.empty()) {
    ++stats_.planningSkipped;
    return;
  }
  switch (config_.kind) {
    case AgentKind::QLearning:
      return;
    case AgentKind::QPlanTrue:
      for (std::size_t i = 0; i < backups; ++i) {
        const Transition& t = buffer_.sample();
        const double target = aaviTargetDistribution(static_cast<std::size_t>(t.observation), t.action,
                                                     *trueModel_, actionValues_, features_, gamma_);
        applyActionValueUpdate(actionValues_, t.state, t.action, target);
      }
      break;
    case AgentKind::QPlanEmAv:
      for (std::size_t i = 0; i < backups; ++i) {
        const Transition& t = buffer_.sample();
        const double target = aaviTargetExpectation(t.state, t.action, model_, actionValues_, gamma_);
        applyActionValueUpdate(actionValues_, t.state, t.action, target);
      }
      break;
    case AgentKind::Alg1:
      planRound(values_, model_, buffer_, backups, gamma_);
      break;
    case AgentKind::Alg2:
      for (std::size_t i = 0; i < backups; ++i) {
        const FeatureVector& s = buffer_.sample().state;
        const Action best = leviGreedyAction(s, model_, values_, gamma_);
        applyValueUpdate(values_, s, leviTarget(s, model_, values_, gamma_));
        for (std::size_t a = 0; a < numActions_; ++a) {
          if (config_.cacheAllActions || a == best.index) {
            alg2CacheUpdate(actionValues_, s, Action{a}, backupValue(s, Action{a}, model_, values_, gamma_));
          }
        }
      }
      break;
    case AgentKind::Alg3:
      for (std::size_t i = 0; i < backups; ++i) {
        const FeatureVector& s = buffer_.sample().state;
        applyValueUpdate(values_, s, leviTarget(s, model_, values_, gamma_));
        const Action a = policy_.sample(s, rng_);
        alg3PolicyUpdate(policy_, s, a, model_, values_, gamma_);
      }
      break;
  }
  stats_.planningBackups += backups;
}

EpisodeResult Agent::runEpisode(Environment& env) {
  if (env.numActions() != numActions_ || env.numObservations() != features_.numObservations()) {
    throw UsageError("agent and environment dimensions disagree");
  }
  Observation obs = env.reset();
  if (config_.bufferPhaseReset && env.phase() != lastPhase_) {
    buffer_.clear();
    ++stats_.bufferResets;
  }
  lastPhase_ = env.phase();
  if (config_.kind == AgentKind::QPlanTrue) {
    trueModel_ = env.exportTrueModel();
  }

  EpisodeResult result;
  FeatureVector s = features_.encode(obs);
  while (true) {
    const Action a = decide(s);
    const Step step = env.step(a);
    result.totalReward += step.reward;
    ++result.steps;

    Transition t;
    t.observation = obs;
    t.state = s;
    t.action = a;
    t.reward = step.reward;
    t.nextObservation = step.observation;
    t.nextState = features_.encode(step.terminal ? kTerminalObservation : step.observation);
    t.terminal = step.terminal;

    learnDirect(t);
    if (config_.plans()) {
      buffer_.push(t);
      learnModel(t);
      if (config_.cadence == PlanningCadence::PerStep) {
        plan(config_.planningSteps);
      }
    }
    if (step.terminal || step.truncated) {
      result.truncated = step.truncated;
      break;
    }
    obs = step.observation;
    s = std::move(t.nextState);
  }
  if (config_.plans() && config_.modelBatchCadence == PlanningCadence::PerEpisode) {
    replayModel(config_.modelBatch);
  }
  if (config_.plans() && config_.cadence == PlanningCadence::PerEpisode) {
    plan(config_.planningSteps);
  }
  ++stats_.episodes;
  if (result.truncated) {
    ++stats_.truncatedEpisodes;
  }
  return result;
}

}  // namespace emplan
