#include "emplan/planning.hpp"

#include <algorithm>
#include <limits>
#include <utility>

namespace emplan {

std::size_t argmaxLowest(const std::vector<double>& values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) {
      best = i;
    }
  }
  return best;
}

Action ActionValueWeights::greedy(const FeatureVector& s) const {
  std::size_t best = 0;
  double bestValue = wq[0].dot(s);
  for (std::size_t a = 1; a < wq.size(); ++a) {
    const double v = wq[a].dot(s);
    if (v > bestValue) {
      bestValue = v;
      best = a;
    }
  }
  return Action{best};
}

double ActionValueWeights::maxValue(const FeatureVector& s) const {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& w : wq) {
    best = std::max(best, w.dot(s));
  }
  return best;
}

BackupBuffer::BackupBuffer(std::size_t capacity, RngSeed seed)
    : capacity_(capacity), rng_(Rng::forStream(seed, Stream::Buffer)) {
  if (capacity == 0) {
    throw UsageError("buffer capacity must be positive");
  }
  entries_.reserve(std::min<std::size_t>(capacity, 1 << 16));
}

void BackupBuffer::push(Transition t) {
  if (entries_.size() < capacity_) {
    entries_.push_back(std::move(t));
    return;
  }
  entries_[head_] = std::move(t);
  head_ = (head_ + 1) % capacity_;
}

const Transition& BackupBuffer::sample() {
  if (entries_.empty()) {
    throw UsageError("cannot sample from an empty buffer");
  }
  return entries_[rng_.index(entries_.size())];
}

void BackupBuffer::clear() {
  entries_.clear();
  head_ = 0;
}

namespace {

double leviActionValue(const FeatureVector& s, Action a, const ExpectationModel& m, const ValueWeights& w,
                       Discount gamma) {
  return m.reward(s, a) + gamma.value() * m.expectedNextValue(s, a, w.w);
}

}  // namespace

double leviTarget(const FeatureVector& s, const ExpectationModel& m, const ValueWeights& w, Discount gamma) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < m.numActions(); ++a) {
    best = std::max(best, leviActionValue(s, Action{a}, m, w, gamma));
  }
  return best;
}

Action leviGreedyAction(const FeatureVector& s, const ExpectationModel& m, const ValueWeights& w,
                        Discount gamma) {
  std::size_t best = 0;
  double bestValue = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < m.numActions(); ++a) {
    const double v = leviActionValue(s, Action{a}, m, w, gamma);
    if (v > bestValue) {
      bestValue = v;
      best = a;
    }
  }
  return Action{best};
}

double eviTarget(const FeatureVector& s, const Geem& g, const ValueWeights& w, Discount gamma) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g.numActions(); ++i) {
    const Action a{i};
    const double v = g.rHat(s, a) + gamma.value() * (1.0 - g.beta(s, a)) * w.value(g.sHat(s, a));
    best = std::max(best, v);
  }
  return best;
}

double aviTarget(std::size_t state, const TabularDistributionModel& dm, const ValueWeights& w,
                 const FeatureMap& map, Discount gamma) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < dm.numActions(); ++a) {
    double expected = 0.0;
    for (std::size_t next = 0; next < dm.numStates(); ++next) {
      const double p = dm.p(state, a, next);
      if (p != 0.0) {
        expected += p * w.value(map.encode(static_cast<Observation>(next)));
      }
    }
    best = std::max(best, dm.r(state, a) + gamma.value() * expected);
  }
  return best;
}

double aaviTargetExpectation(const FeatureVector& s, Action a, const ExpectationModel& m,
                             const ActionValueWeights& q, Discount gamma) {
  const FeatureVector next = m.expectedNext(s, a);
  return m.reward(s, a) + gamma.value() * q.maxValue(next);
}

double aaviTargetDistribution(std::size_t state, Action a, const TabularDistributionModel& dm,
                              const ActionValueWeights& q, const FeatureMap& map, Discount gamma) {
  double expected = 0.0;
  for (std::size_t next = 0; next < dm.numStates(); ++next) {
    const double p = dm.p(state, a.index, next);
    if (p != 0.0) {
      expected += p * q.maxValue(map.encode(static_cast<Observation>(next)));
    }
  }
  return dm.r(state, a.index) + gamma.value() * expected;
}

void applyValueUpdate(ValueWeights& w, const FeatureVector& s, double target) {
  const double scale = w.stepSize * (target - w.value(s));
  requireFinite(scale, "state-value update");
  w.w.noalias() += scale * s;
}

void applyActionValueUpdate(ActionValueWeights& q, const FeatureVector& s, Action a, double target) {
  Eigen::VectorXd& head = q.wq.at(a.index);
  const double scale = q.stepSize * (target - head.dot(s));
  requireFinite(scale, "action-value update");
  head.noalias() += scale * s;
}

double tdDirectUpdate(ValueWeights& w, const FeatureVector& s, double reward, const FeatureVector& next,
                      Discount gamma) {
  const double delta = reward + gamma.value() * w.value(next) - w.value(s);
  requireFinite(delta, "TD error");
  w.w.noalias() += (w.stepSize * delta) * s;
  return delta;
}

std::size_t planRound(ValueWeights& w, const ExpectationModel& m, BackupBuffer& buffer, std::size_t nSteps,
                      Discount gamma) {
  if (buffer.empty()) {
    return 0;
  }
  for (std::size_t i = 0; i < nSteps; ++i) {
    const FeatureVector& s = buffer.sample().state;
    applyValueUpdate(w, s, leviTarget(s, m, w, gamma));
  }
  return nSteps;
}

}  // namespace emplan
