#include "emplan/envs.hpp"

#include <algorithm>
#include <string>

namespace emplan {

CounterexampleMdp::CounterexampleMdp(RngSeed seed, double bReward)
    : Environment(seed), bReward_(bReward) {}

std::vector<double> CounterexampleMdp::rewardSupport() const {
  std::vector<double> support{0.0, -5.0, bReward_};
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  return support;
}

Environment::Outcome CounterexampleMdp::transition(Observation from, Action a, Rng& rng) {
  switch (from) {
    case 0:
      if (a.index == kA) {
        return {0.0, rng.bernoulli(0.5) ? 1 : 2};
      }
      return {bReward_, kTerminalObservation};
    case 1:
      return {a.index == kA ? 0.0 : -5.0, kTerminalObservation};
    case 2:
      return {a.index == kA ? -5.0 : 0.0, kTerminalObservation};
    default:
      throw UsageError("counterexample: invalid state token " + std::to_string(from));
  }
}

TabularDistributionModel CounterexampleMdp::exportTrueModel() const {
  TabularDistributionModel m(3, 2);
  m.p(0, kA, 1) = 0.5;
  m.p(0, kA, 2) = 0.5;
  m.r(0, kA) = 0.0;
  m.termProb(0, kB) = 1.0;
  m.r(0, kB) = bReward_;
  for (std::size_t s : {1, 2}) {
    m.termProb(s, kA) = 1.0;
    m.termProb(s, kB) = 1.0;
  }
  m.r(1, kA) = 0.0;
  m.r(1, kB) = -5.0;
  m.r(2, kA) = -5.0;
  m.r(2, kB) = 0.0;
  return m;
}

GoalSide opposite(GoalSide side) {
  return side == GoalSide::Left ? GoalSide::Right : GoalSide::Left;
}

CorridorEnv::CorridorEnv(RngSeed seed, CorridorParams params) : Environment(seed), params_(params) {
  if (!(params_.slipProb >= 0.0 && params_.slipProb <= 1.0)) {
    throw UsageError("corridor slip probability must lie in [0, 1]");
  }
}

std::vector<double> CorridorEnv::rewardSupport() const {
  std::vector<double> support{params_.stepReward, params_.goalReward, params_.otherTerminalReward};
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  return support;
}

void CorridorEnv::switchGoal() {
  if (params_.phaseLength == 0) {
    throw UsageError("switchGoal requires a non-stationary corridor (phase_length > 0)");
  }
  params_.goalSide = opposite(params_.goalSide);
  episodesInPhase_ = 0;
  ++switches_;
}

Observation CorridorEnv::startEpisode(Rng& rng) {
  if (params_.phaseLength > 0 && episodesInPhase_ == params_.phaseLength) {
    switchGoal();
  }
  ++episodesInPhase_;
  return static_cast<Observation>(rng.index(kLength));
}

Environment::Outcome CorridorEnv::move(int cell, int delta) const {
  const int next = cell + delta;
  if (next < 0 || next >= static_cast<int>(kLength)) {
    const GoalSide reached = next < 0 ? GoalSide::Left : GoalSide::Right;
    const double reward =
        reached == params_.goalSide ? params_.goalReward : params_.otherTerminalReward;
    return {reward, kTerminalObservation};
  }
  return {params_.stepReward, next};
}

Environment::Outcome CorridorEnv::transition(Observation from, Action a, Rng& rng) {
  if (from < 0 || from >= static_cast<int>(kLength)) {
    throw UsageError("corridor: invalid cell token " + std::to_string(from));
  }
  int delta = a.index == kLeft ? -1 : 1;
  if (rng.bernoulli(params_.slipProb)) {
    delta = -delta;
  }
  return move(from, delta);
}

TabularDistributionModel CorridorEnv::exportTrueModel() const {
  TabularDistributionModel m(kLength, 2);
  for (std::size_t s = 0; s < kLength; ++s) {
    for (std::size_t a = 0; a < 2; ++a) {
      const int intended = a == kLeft ? -1 : 1;
      const std::pair<int, double> outcomes[] = {{intended, 1.0 - params_.slipProb},
                                                 {-intended, params_.slipProb}};
      for (const auto& [delta, prob] : outcomes) {
        if (prob == 0.0) {
          continue;
        }
        const Outcome out = move(static_cast<int>(s), delta);
        if (out.next == kTerminalObservation) {
          m.termProb(s, a) += prob;
        } else {
          m.p(s, a, static_cast<std::size_t>(out.next)) += prob;
        }
        m.r(s, a) += prob * out.reward;
      }
    }
  }
  return m;
}

}  // namespace emplan
