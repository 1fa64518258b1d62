#pragma once

#include "emplan/tabular_model.hpp"

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

// Brute-force ground truth. Everything here is plain arithmetic over
// TabularDistributionModel; none of it goes through the planning code it is
// used to check.
namespace emplan::oracles {

class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TabularSolution {
  std::size_t numActions = 0;
  std::vector<double> vStar;
  std::vector<double> qStar;  // row-major [state][action]
  std::vector<std::size_t> piStar;
  double residual = 0.0;
  std::size_t sweeps = 0;

  double q(std::size_t s, std::size_t a) const { return qStar[s * numActions + a]; }
};

inline constexpr std::size_t kDefaultSweepCap = 1'000'000;

/// Synchronous value-iteration sweeps until the largest change is below `tol`.
/// Throws OracleError if the sweep cap is reached first.
TabularSolution solveValueIteration(const TabularDistributionModel& dm, double gamma, double tol,
                                    std::size_t sweepCap = kDefaultSweepCap);

/// Max Bellman-optimality residual of `solution`, recomputed with one naive sweep.
double bellmanResidual(const TabularDistributionModel& dm, double gamma, const TabularSolution& solution);

/// Value of the ε-smoothed greedy policy: greedy action with probability
/// 1 − ε + ε/|A|, every other action with ε/|A|.
std::vector<double> evaluateEpsilonGreedy(const TabularDistributionModel& dm,
                                          const std::vector<std::size_t>& greedy, double epsilon,
                                          double gamma, double tol = 1e-13,
                                          std::size_t sweepCap = kDefaultSweepCap);

/// Same, with the greedy action read off a [state][action] value table
/// (lowest index wins ties).
std::vector<double> evaluateEpsilonGreedyFromValues(const TabularDistributionModel& dm,
                                                    const std::vector<double>& actionValues, double epsilon,
                                                    double gamma, double tol = 1e-13);

struct TheoremReport {
  std::size_t trials = 0;
  std::size_t targetsCompared = 0;
  /// max |LEVI(aligned ZTEM) − AVI| with AVI computed by enumeration here.
  double maxLeviVsAvi = 0.0;
  /// max |planning aviTarget − AVI enumeration|.
  double maxAviVsOracle = 0.0;
  /// max |LEVI(GEEM-aligned ZTEM) − EVI| with EVI computed here.
  double maxLeviVsEvi = 0.0;
  /// max |planning eviTarget − EVI enumeration|.
  double maxEviVsOracle = 0.0;

  double maxDeviation() const;
};

/// Random tabular models (1..maxStates states, 1..maxActions actions) with
/// one-hot features and random w. A non-zero `perturbation` is added to one
/// random entry of each aligned ZTEM's transition matrix (negative control).
TheoremReport enumerateTheoremChecks(std::size_t maxStates, std::size_t maxActions, std::size_t trials,
                                     std::uint64_t seed, double perturbation = 0.0);

struct Eq14Witness {
  double lhs;  // Σ_{s'} p(s'|1,A) max_{a'} q(s',a')
  double rhs;  // max_{a'} Σ_{s'} p(s'|1,A) q(s',a')
};

/// Both sides of the max/expectation inequality on the counterexample MDP at
/// its optimal leaf action values.
Eq14Witness eq14Witness();

}  // namespace emplan::oracles
