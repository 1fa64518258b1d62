#include "emplan/tabular_model.hpp"

#include <cmath>
#include <string>

namespace emplan {

TabularDistributionModel::TabularDistributionModel(std::size_t numStates, std::size_t numActions)
    : numStates_(numStates),
      numActions_(numActions),
      p_(numStates * numActions * numStates, 0.0),
      term_(numStates * numActions, 0.0),
      r_(numStates * numActions, 0.0) {}

void TabularDistributionModel::validate(double tol) const {
  for (std::size_t s = 0; s < numStates_; ++s) {
    for (std::size_t a = 0; a < numActions_; ++a) {
      double total = termProb(s, a);
      bool inRange = termProb(s, a) >= 0.0 && termProb(s, a) <= 1.0;
      for (std::size_t next = 0; next < numStates_; ++next) {
        const double q = p(s, a, next);
        inRange = inRange && q >= 0.0 && q <= 1.0;
        total += q;
      }
      if (!inRange || std::abs(total - 1.0) > tol || !std::isfinite(r(s, a))) {
        throw UsageError("invalid transition row at state " + std::to_string(s) + ", action " +
                         std::to_string(a));
      }
    }
  }
}

}  // namespace emplan
