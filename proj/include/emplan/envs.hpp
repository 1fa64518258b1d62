#pragma once

#include "emplan/environment.hpp"

#include <cstddef>
#include <vector>

namespace emplan {

/// Three-state episodic MDP where the expected next state of the start
/// state's action A hides which leaf was reached.
///
/// Tokens 0, 1, 2 are states 1, 2, 3. From state 1, A reaches state 2 or 3
/// with probability 1/2 each (reward 0) and B terminates with reward `bReward`.
/// In state 2, A terminates with 0 and B with -5; state 3 is the mirror image.
class CounterexampleMdp final : public Environment {
 public:
  static constexpr std::size_t kState1 = 0;
  static constexpr std::size_t kState2 = 1;
  static constexpr std::size_t kState3 = 2;
  static constexpr std::size_t kA = 0;
  static constexpr std::size_t kB = 1;
  static constexpr double kDefaultBReward = -1.0;

  explicit CounterexampleMdp(RngSeed seed, double bReward = kDefaultBReward);

  std::size_t numActions() const override { return 2; }
  std::size_t numObservations() const override { return 3; }
  std::vector<double> rewardSupport() const override;
  TabularDistributionModel exportTrueModel() const override;

  double bReward() const { return bReward_; }

 protected:
  Observation startEpisode(Rng&) override { return 0; }
  Outcome transition(Observation from, Action a, Rng& rng) override;

 private:
  double bReward_;
};

enum class GoalSide { Left, Right };

GoalSide opposite(GoalSide side);

struct CorridorParams {
  /// Probability that a move goes opposite to its name.
  double slipProb = 1.0 / 3.0;
  /// Episodes between goal switches; 0 keeps the goal fixed.
  std::size_t phaseLength = 0;
  GoalSide goalSide = GoalSide::Right;
  double stepReward = -1.0;
  double goalReward = 20.0;
  double otherTerminalReward = 0.0;
};

/// One-dimensional corridor of nine cells with a terminal at each end.
/// Action 0 is `left`, action 1 is `right`. Entering the goal end pays
/// goalReward, entering the other end pays otherTerminalReward, and every
/// other step pays stepReward.
class CorridorEnv final : public Environment {
 public:
  static constexpr std::size_t kLength = 9;
  static constexpr std::size_t kLeft = 0;
  static constexpr std::size_t kRight = 1;

  CorridorEnv(RngSeed seed, CorridorParams params);

  std::size_t numActions() const override { return 2; }
  std::size_t numObservations() const override { return kLength; }
  std::vector<double> rewardSupport() const override;
  TabularDistributionModel exportTrueModel() const override;
  std::size_t phase() const override { return switches_; }

  GoalSide goalSide() const { return params_.goalSide; }
  const CorridorParams& params() const { return params_; }

  /// Flips the goal to the other end and restarts the phase counter.
  /// Requires a non-stationary corridor (phaseLength > 0).
  void switchGoal();

 protected:
  Observation startEpisode(Rng& rng) override;
  Outcome transition(Observation from, Action a, Rng& rng) override;

 private:
  // Reward and next token for moving from `cell` by `delta` (+1 or -1).
  Outcome move(int cell, int delta) const;

  CorridorParams params_;
  std::size_t episodesInPhase_ = 0;
  std::size_t switches_ = 0;
};

}  // namespace emplan
