#include "emplan/environment.hpp"

#include <string>

namespace emplan {

Observation Environment::reset() {
  current_ = startEpisode(rng_);
  inEpisode_ = true;
  steps_ = 0;
  ++episodes_;
  return current_;
}

Step Environment::step(Action a) {
  if (!inEpisode_) {
    throw UsageError("step called on a finished episode; reset first");
  }
  if (a.index >= numActions()) {
    throw UsageError("action " + std::to_string(a.index) + " out of range");
  }
  const Outcome out = transition(current_, a, rng_);
  ++steps_;
  Step result{out.reward, out.next, out.next == kTerminalObservation, false};
  current_ = out.next;
  if (result.terminal) {
    inEpisode_ = false;
  } else if (steps_ >= stepCap_) {
    result.truncated = true;
    inEpisode_ = false;
  }
  return result;
}

void Environment::setStepCap(std::size_t cap) {
  if (cap == 0) {
    throw UsageError("step cap must be positive");
  }
  stepCap_ = cap;
}

}  // namespace emplan
