#pragma once

#include "emplan/common.hpp"
#include "emplan/features.hpp"
#include "emplan/tabular_model.hpp"

#include <cstddef>
#include <iosfwd>
#include <utility>
#include <vector>

namespace emplan {

struct Prediction {
  double reward;
  FeatureVector next;
};

/// Anything that predicts an expected reward r(s,a) and a zero-terminal
/// expected next state s̄(s,a), i.e. the inputs of a linear planning target.
class ExpectationModel {
 public:
  virtual ~ExpectationModel() = default;

  virtual std::size_t numActions() const = 0;
  virtual std::size_t dimension() const = 0;
  virtual double reward(const FeatureVector& s, Action a) const = 0;
  virtual FeatureVector expectedNext(const FeatureVector& s, Action a) const = 0;

  /// wᵀ s̄(s,a); overridden where it can be computed without materialising s̄.
  virtual double expectedNextValue(const FeatureVector& s, Action a, const Eigen::VectorXd& w) const {
    return w.dot(expectedNext(s, a));
  }

  Prediction predict(const FeatureVector& s, Action a) const { return {reward(s, a), expectedNext(s, a)}; }
};

/// Running means of the squared prediction errors seen by learnStep.
struct ModelLossStats {
  double transitionLoss = 0.0;
  double rewardLoss = 0.0;
  std::size_t count = 0;

  void record(double transition, double reward);
};

struct StepLoss {
  double transition;
  double reward;
};

/// Linear zero-terminal expectation model: s̄(s,a) = F_a s, r(s,a) = b_aᵀ s.
class Ztem final : public ExpectationModel {
 public:
  Ztem(std::size_t d, std::size_t numActions, double stepSize = 0.0);

  std::size_t numActions() const override { return F_.size(); }
  std::size_t dimension() const override { return d_; }
  double reward(const FeatureVector& s, Action a) const override;
  FeatureVector expectedNext(const FeatureVector& s, Action a) const override;
  double expectedNextValue(const FeatureVector& s, Action a, const Eigen::VectorXd& w) const override;

  /// One half-gradient SGD step on ½‖F_a s − s'‖² and ½(b_aᵀs − R)².
  /// `next` must be the zero vector for terminal transitions. Returns the
  /// squared errors measured before the step.
  StepLoss learnStep(const FeatureVector& s, Action a, double reward, const FeatureVector& next);

  /// ½‖F_a s − s'‖² and its gradient with respect to F_a.
  double transitionLoss(const FeatureVector& s, Action a, const FeatureVector& next) const;
  Eigen::MatrixXd transitionLossGradient(const FeatureVector& s, Action a, const FeatureVector& next) const;
  /// ½(b_aᵀs − R)² and its gradient with respect to b_a.
  double rewardLoss(const FeatureVector& s, Action a, double reward) const;
  Eigen::VectorXd rewardLossGradient(const FeatureVector& s, Action a, double reward) const;

  double stepSize() const { return stepSize_; }
  void setStepSize(double alpha) { stepSize_ = alpha; }

  Eigen::MatrixXd& transition(Action a) { return F_.at(a.index); }
  const Eigen::MatrixXd& transition(Action a) const { return F_.at(a.index); }
  Eigen::VectorXd& rewardWeights(Action a) { return b_.at(a.index); }
  const Eigen::VectorXd& rewardWeights(Action a) const { return b_.at(a.index); }

  const ModelLossStats& lossStats() const { return stats_; }

  /// Flat CSV dump: `action,kind,row,col,value` with kind F or b.
  void writeCsv(std::ostream& out) const;

 private:
  void checkInput(const FeatureVector& s, Action a) const;

  std::size_t d_;
  std::vector<Eigen::MatrixXd> F_;
  std::vector<Eigen::VectorXd> b_;
  double stepSize_;
  ModelLossStats stats_;
};

/// General episodic expectation model with linear heads: r̂(s,a) = b_aᵀs,
/// ŝ(s,a) = G_a s, β(s,a) = clamp(c_aᵀs, 0, 1).
struct Geem {
  std::vector<Eigen::VectorXd> rewardWeights;
  std::vector<Eigen::MatrixXd> nextState;
  std::vector<Eigen::VectorXd> termination;

  std::size_t numActions() const { return rewardWeights.size(); }
  std::size_t dimension() const { return rewardWeights.empty() ? 0 : static_cast<std::size_t>(rewardWeights[0].size()); }
  double rHat(const FeatureVector& s, Action a) const { return rewardWeights.at(a.index).dot(s); }
  FeatureVector sHat(const FeatureVector& s, Action a) const { return nextState.at(a.index) * s; }
  double beta(const FeatureVector& s, Action a) const;
};

/// ZTEM induced by a GEEM: s̄ = (1 − β) ŝ with identical rewards.
class GeemAlignedModel final : public ExpectationModel {
 public:
  explicit GeemAlignedModel(Geem geem) : geem_(std::move(geem)) {}

  std::size_t numActions() const override { return geem_.numActions(); }
  std::size_t dimension() const override { return geem_.dimension(); }
  double reward(const FeatureVector& s, Action a) const override { return geem_.rHat(s, a); }
  FeatureVector expectedNext(const FeatureVector& s, Action a) const override {
    return (1.0 - geem_.beta(s, a)) * geem_.sHat(s, a);
  }

  const Geem& geem() const { return geem_; }

 private:
  Geem geem_;
};

GeemAlignedModel alignZtemFromGeem(const Geem& g);

/// Exact linear ZTEM for a tabular model under one-hot features:
/// column s of F_a is Σ_{s'} p(s'|s,a) e_{s'}, and b_a[s] = r(s,a).
/// Throws UsageError for non-one-hot maps.
Ztem alignZtemFromDistribution(const TabularDistributionModel& dm, const FeatureMap& map);

}  // namespace emplan
