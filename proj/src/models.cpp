#include "emplan/models.hpp"

#include <algorithm>
#include <ostream>
#include <string>

namespace emplan {

void ModelLossStats::record(double transition, double reward) {
  ++count;
  const double n = static_cast<double>(count);
  transitionLoss += (transition - transitionLoss) / n;
  rewardLoss += (reward - rewardLoss) / n;
}

Ztem::Ztem(std::size_t d, std::size_t numActions, double stepSize)
    : d_(d),
      F_(numActions, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d))),
      b_(numActions, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d))),
      stepSize_(stepSize) {
  if (numActions == 0 || d == 0) {
    throw UsageError("expectation model needs d > 0 and at least one action");
  }
}

void Ztem::checkInput(const FeatureVector& s, Action a) const {
  if (a.index >= F_.size()) {
    throw UsageError("model: action " + std::to_string(a.index) + " out of range");
  }
  if (static_cast<std::size_t>(s.size()) != d_) {
    throw UsageError("model: feature dimension " + std::to_string(s.size()) + " != " +
                     std::to_string(d_));
  }
}

double Ztem::reward(const FeatureVector& s, Action a) const {
  checkInput(s, a);
  return b_[a.index].dot(s);
}

FeatureVector Ztem::expectedNext(const FeatureVector& s, Action a) const {
  checkInput(s, a);
  return F_[a.index] * s;
}

double Ztem::expectedNextValue(const FeatureVector& s, Action a, const Eigen::VectorXd& w) const {
  checkInput(s, a);
  return w.dot(F_[a.index] * s);
}

StepLoss Ztem::learnStep(const FeatureVector& s, Action a, double reward, const FeatureVector& next) {
  checkInput(s, a);
  if (next.size() != s.size()) {
    throw UsageError("model: next-state dimension mismatch");
  }
  Eigen::MatrixXd& F = F_[a.index];
  Eigen::VectorXd& b = b_[a.index];
  const Eigen::VectorXd transitionError = next - F * s;
  const double rewardError = reward - b.dot(s);
  const StepLoss loss{transitionError.squaredNorm(), rewardError * rewardError};
  requireFinite(loss.transition, "model transition error");
  requireFinite(loss.reward, "model reward error");
  F.noalias() += (stepSize_ * transitionError) * s.transpose();
  b.noalias() += (stepSize_ * rewardError) * s;
  stats_.record(loss.transition, loss.reward);
  return loss;
}

double Ztem::transitionLoss(const FeatureVector& s, Action a, const FeatureVector& next) const {
  checkInput(s, a);
  return 0.5 * (F_[a.index] * s - next).squaredNorm();
}

Eigen::MatrixXd Ztem::transitionLossGradient(const FeatureVector& s, Action a, const FeatureVector& next) const {
  checkInput(s, a);
  return (F_[a.index] * s - next) * s.transpose();
}

double Ztem::rewardLoss(const FeatureVector& s, Action a, double reward) const {
  checkInput(s, a);
  const double e = b_[a.index].dot(s) - reward;
  return 0.5 * e * e;
}

Eigen::VectorXd Ztem::rewardLossGradient(const FeatureVector& s, Action a, double reward) const {
  checkInput(s, a);
  return (b_[a.index].dot(s) - reward) * s;
}

void Ztem::writeCsv(std::ostream& out) const {
  out << "action,kind,row,col,value\n";
  out.precision(17);
  for (std::size_t a = 0; a < F_.size(); ++a) {
    for (Eigen::Index i = 0; i < F_[a].rows(); ++i) {
      for (Eigen::Index j = 0; j < F_[a].cols(); ++j) {
        out << a << ",F," << i << ',' << j << ',' << F_[a](i, j) << '\n';
      }
    }
    for (Eigen::Index i = 0; i < b_[a].size(); ++i) {
      out << a << ",b," << i << ",0," << b_[a][i] << '\n';
    }
  }
}

double Geem::beta(const FeatureVector& s, Action a) const {
  return std::clamp(termination.at(a.index).dot(s), 0.0, 1.0);
}

GeemAlignedModel alignZtemFromGeem(const Geem& g) { return GeemAlignedModel(g); }

Ztem alignZtemFromDistribution(const TabularDistributionModel& dm, const FeatureMap& map) {
  if (map.kind() != FeatureKind::OneHot) {
    throw UsageError("exact alignment from a distribution model requires one-hot features");
  }
  if (map.numObservations() != dm.numStates()) {
    throw UsageError("feature map and distribution model disagree on the number of states");
  }
  const std::size_t n = dm.numStates();
  Ztem m(map.dimension(), dm.numActions());
  for (std::size_t a = 0; a < dm.numActions(); ++a) {
    Eigen::MatrixXd& F = m.transition(Action{a});
    Eigen::VectorXd& b = m.rewardWeights(Action{a});
    for (std::size_t s = 0; s < n; ++s) {
      const FeatureVector& code = map.encode(static_cast<Observation>(s));
      Eigen::Index active = 0;
      code.maxCoeff(&active);
      // Termination mass contributes the zero vector.
      Eigen::VectorXd column = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(map.dimension()));
      for (std::size_t next = 0; next < n; ++next) {
        column += dm.p(s, a, next) * map.encode(static_cast<Observation>(next));
      }
      F.col(active) = column;
      b[active] = dm.r(s, a);
    }
  }
  return m;
}

}  // namespace emplan
