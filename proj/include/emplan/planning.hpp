#pragma once

#include "emplan/common.hpp"
#include "emplan/environment.hpp"
#include "emplan/features.hpp"
#include "emplan/models.hpp"
#include "emplan/rng.hpp"
#include "emplan/tabular_model.hpp"

#include <cstddef>
#include <vector>

namespace emplan {

/// Linear state values v̂(s,w) = wᵀs.
struct ValueWeights {
  Eigen::VectorXd w;
  double stepSize = 0.0;

  ValueWeights() = default;
  ValueWeights(std::size_t d, double alpha) : w(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d))), stepSize(alpha) {}

  double value(const FeatureVector& s) const { return w.dot(s); }
};

/// One linear head per action: q̂(s,a) = w_aᵀs.
struct ActionValueWeights {
  std::vector<Eigen::VectorXd> wq;
  double stepSize = 0.0;

  ActionValueWeights() = default;
  ActionValueWeights(std::size_t d, std::size_t numActions, double alpha)
      : wq(numActions, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d))), stepSize(alpha) {}

  std::size_t numActions() const { return wq.size(); }
  double value(const FeatureVector& s, Action a) const { return wq.at(a.index).dot(s); }
  /// Lowest index wins ties.
  Action greedy(const FeatureVector& s) const;
  double maxValue(const FeatureVector& s) const;
};

/// Index of the largest entry; lowest index wins ties.
std::size_t argmaxLowest(const std::vector<double>& values);

struct Transition {
  Observation observation = kTerminalObservation;
  FeatureVector state;
  Action action;
  double reward = 0.0;
  Observation nextObservation = kTerminalObservation;
  FeatureVector nextState;  // zero vector when terminal
  bool terminal = false;
};

/// Experience-replay ring buffer used both as the backup distribution for
/// planning and as the batch source for model training. Sampling is uniform
/// over the current contents.
class BackupBuffer {
 public:
  explicit BackupBuffer(std::size_t capacity, RngSeed seed);

  void push(Transition t);
  const Transition& sample();
  void clear();

  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return entries_.empty(); }
  const Transition& at(std::size_t i) const { return entries_.at(i); }

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;
  std::vector<Transition> entries_;
  Rng rng_;
};

/// LEVI target: max_a [ r(s,a) + γ wᵀ s̄(s,a) ].
double leviTarget(const FeatureVector& s, const ExpectationModel& m, const ValueWeights& w, Discount gamma);

/// Argmax action of the LEVI target (lowest index on ties).
Action leviGreedyAction(const FeatureVector& s, const ExpectationModel& m, const ValueWeights& w,
                        Discount gamma);

/// EVI target: max_a [ r̂(s,a) + γ (1 − β(s,a)) v̂(ŝ(s,a), w) ].
double eviTarget(const FeatureVector& s, const Geem& g, const ValueWeights& w, Discount gamma);

/// AVI target with an explicit distribution model over tabular states:
/// max_a [ r(s,a) + γ Σ_{s'} p(s'|s,a) v̂(encode(s'), w) ]; termination adds 0.
double aviTarget(std::size_t state, const TabularDistributionModel& dm, const ValueWeights& w,
                 const FeatureMap& map, Discount gamma);

/// AAVI target through an expectation model: r(s,a) + γ max_{a'} (s̄(s,a))ᵀ w_{a'}.
/// Biased in stochastic environments because max and expectation do not commute.
double aaviTargetExpectation(const FeatureVector& s, Action a, const ExpectationModel& m,
                             const ActionValueWeights& q, Discount gamma);

/// AAVI target with a distribution model: r(s,a) + γ Σ_{s'} p(s'|s,a) max_{a'} w_{a'}ᵀ s'.
double aaviTargetDistribution(std::size_t state, Action a, const TabularDistributionModel& dm,
                              const ActionValueWeights& q, const FeatureMap& map, Discount gamma);

/// Semi-gradient step w += α (target − wᵀs) s.
void applyValueUpdate(ValueWeights& w, const FeatureVector& s, double target);

/// Semi-gradient step on one action head: w_a += α (target − w_aᵀs) s.
void applyActionValueUpdate(ActionValueWeights& q, const FeatureVector& s, Action a, double target);

/// TD(0): δ = R + γ wᵀs' − wᵀs, w += α δ s. Returns δ.
double tdDirectUpdate(ValueWeights& w, const FeatureVector& s, double reward, const FeatureVector& next,
                      Discount gamma);

/// `nSteps` LEVI backups from states sampled out of `buffer`. Returns the
/// number of backups performed (0 for an empty buffer).
std::size_t planRound(ValueWeights& w, const ExpectationModel& m, BackupBuffer& buffer, std::size_t nSteps,
                      Discount gamma);

}  // namespace emplan
