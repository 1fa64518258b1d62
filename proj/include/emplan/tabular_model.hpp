#pragma once

#include "emplan/common.hpp"

#include <cstddef>
#include <vector>

namespace emplan {

/// Exact one-step dynamics over an enumerable state set. For every (s, a) the
/// transition row sums to at most one; the shortfall is the probability of
/// terminating.
class TabularDistributionModel {
 public:
  TabularDistributionModel() = default;
  TabularDistributionModel(std::size_t numStates, std::size_t numActions);

  std::size_t numStates() const { return numStates_; }
  std::size_t numActions() const { return numActions_; }

  double& p(std::size_t s, std::size_t a, std::size_t next) {
    return p_[(s * numActions_ + a) * numStates_ + next];
  }
  double p(std::size_t s, std::size_t a, std::size_t next) const {
    return p_[(s * numActions_ + a) * numStates_ + next];
  }
  double& termProb(std::size_t s, std::size_t a) { return term_[s * numActions_ + a]; }
  double termProb(std::size_t s, std::size_t a) const { return term_[s * numActions_ + a]; }
  double& r(std::size_t s, std::size_t a) { return r_[s * numActions_ + a]; }
  double r(std::size_t s, std::size_t a) const { return r_[s * numActions_ + a]; }

  /// Throws UsageError when some row is not a sub-probability distribution
  /// whose residual matches termProb within tol.
  void validate(double tol = 1e-12) const;

  friend bool operator==(const TabularDistributionModel&, const TabularDistributionModel&) = default;

 private:
  std::size_t numStates_ = 0;
  std::size_t numActions_ = 0;
  std::vector<double> p_;
  std::vector<double> term_;
  std::vector<double> r_;
};

}  // namespace emplan
