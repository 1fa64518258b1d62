#pragma once

#include "emplan/common.hpp"
#include "emplan/rng.hpp"
#include "emplan/tabular_model.hpp"

#include <cstddef>
#include <vector>

namespace emplan {

/// Discrete observation token. Non-terminal tokens are 0..numObservations()-1.
using Observation = int;
inline constexpr Observation kTerminalObservation = -1;

struct Step {
  double reward = 0.0;
  Observation observation = kTerminalObservation;
  bool terminal = false;
  /// Episode aborted by the step cap. Never set together with `terminal`.
  bool truncated = false;
};

inline constexpr std::size_t kDefaultStepCap = 10'000;

/// Episodic environment. Owns its random stream, so two instances built with
/// the same seed and driven by the same actions emit identical steps.
class Environment {
 public:
  virtual ~Environment() = default;

  Observation reset();
  Step step(Action a);

  virtual std::size_t numActions() const = 0;
  virtual std::size_t numObservations() const = 0;
  virtual std::vector<double> rewardSupport() const = 0;

  /// Dynamics of the current phase as an explicit tabular model.
  virtual TabularDistributionModel exportTrueModel() const = 0;

  /// Number of goal switches so far (always 0 for stationary environments).
  virtual std::size_t phase() const { return 0; }

  bool inEpisode() const { return inEpisode_; }
  std::size_t stepCount() const { return steps_; }
  std::size_t episodeCount() const { return episodes_; }
  Observation current() const { return current_; }

  std::size_t stepCap() const { return stepCap_; }
  void setStepCap(std::size_t cap);

 protected:
  explicit Environment(RngSeed seed) : rng_(Rng::forStream(seed, Stream::Environment)) {}

  struct Outcome {
    double reward;
    Observation next;  // kTerminalObservation when the episode ends
  };

  virtual Observation startEpisode(Rng& rng) = 0;
  virtual Outcome transition(Observation from, Action a, Rng& rng) = 0;

 private:
  Rng rng_;
  Observation current_ = kTerminalObservation;
  bool inEpisode_ = false;
  std::size_t steps_ = 0;
  std::size_t episodes_ = 0;
  std::size_t stepCap_ = kDefaultStepCap;
};

}  // namespace emplan
