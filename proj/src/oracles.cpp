#include "emplan/oracles.hpp"

#include "emplan/envs.hpp"
#include "emplan/features.hpp"
#include "emplan/models.hpp"
#include "emplan/planning.hpp"
#include "emplan/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace emplan::oracles {

namespace {

// Σ_{s'} p(s'|s,a) v(s'), termination contributing zero.
double expectedNextValue(const TabularDistributionModel& dm, std::size_t s, std::size_t a,
                         const std::vector<double>& v) {
  double total = 0.0;
  for (std::size_t next = 0; next < dm.numStates(); ++next) {
    total += dm.p(s, a, next) * v[next];
  }
  return total;
}

}  // namespace

TabularSolution solveValueIteration(const TabularDistributionModel& dm, double gamma, double tol,
                                    std::size_t sweepCap) {
  if (!(tol > 0.0)) {
    throw OracleError("value iteration tolerance must be positive");
  }
  const std::size_t n = dm.numStates();
  const std::size_t na = dm.numActions();
  TabularSolution sol;
  sol.numActions = na;
  sol.vStar.assign(n, 0.0);
  sol.qStar.assign(n * na, 0.0);
  sol.piStar.assign(n, 0);
  std::vector<double> next(n);
  for (std::size_t sweep = 1; sweep <= sweepCap; ++sweep) {
    double change = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t a = 0; a < na; ++a) {
        const double q = dm.r(s, a) + gamma * expectedNextValue(dm, s, a, sol.vStar);
        sol.qStar[s * na + a] = q;
        if (q > best) {
          best = q;
          sol.piStar[s] = a;
        }
      }
      next[s] = best;
      change = std::max(change, std::abs(best - sol.vStar[s]));
    }
    sol.vStar.swap(next);
    sol.sweeps = sweep;
    sol.residual = change;
    if (!std::isfinite(change)) {
      throw OracleError("value iteration diverged");
    }
    if (change < tol) {
      // One more pass so qStar is consistent with the final vStar.
      for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t a = 0; a < na; ++a) {
          sol.qStar[s * na + a] = dm.r(s, a) + gamma * expectedNextValue(dm, s, a, sol.vStar);
        }
      }
      return sol;
    }
  }
  throw OracleError("value iteration did not converge within " + std::to_string(sweepCap) + " sweeps");
}

double bellmanResidual(const TabularDistributionModel& dm, double gamma, const TabularSolution& solution) {
  double worst = 0.0;
  for (std::size_t s = 0; s < dm.numStates(); ++s) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < dm.numActions(); ++a) {
      double backup = dm.r(s, a);
      for (std::size_t next = 0; next < dm.numStates(); ++next) {
        backup += gamma * dm.p(s, a, next) * solution.vStar[next];
      }
      worst = std::max(worst, std::abs(backup - solution.q(s, a)));
      best = std::max(best, backup);
    }
    worst = std::max(worst, std::abs(best - solution.vStar[s]));
  }
  return worst;
}

std::vector<double> evaluateEpsilonGreedy(const TabularDistributionModel& dm,
                                          const std::vector<std::size_t>& greedy, double epsilon,
                                          double gamma, double tol, std::size_t sweepCap) {
  const std::size_t n = dm.numStates();
  const std::size_t na = dm.numActions();
  if (greedy.size() != n) {
    throw OracleError("policy size does not match the number of states");
  }
  std::vector<double> v(n, 0.0);
  std::vector<double> next(n);
  for (std::size_t sweep = 0; sweep < sweepCap; ++sweep) {
    double change = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      double value = 0.0;
      for (std::size_t a = 0; a < na; ++a) {
        const double prob = epsilon / static_cast<double>(na) + (a == greedy[s] ? 1.0 - epsilon : 0.0);
        value += prob * (dm.r(s, a) + gamma * expectedNextValue(dm, s, a, v));
      }
      next[s] = value;
      change = std::max(change, std::abs(value - v[s]));
    }
    v.swap(next);
    if (!std::isfinite(change)) {
      throw OracleError("policy evaluation diverged");
    }
    if (change < tol) {
      return v;
    }
  }
  throw OracleError("policy evaluation did not converge");
}

std::vector<double> evaluateEpsilonGreedyFromValues(const TabularDistributionModel& dm,
                                                    const std::vector<double>& actionValues, double epsilon,
                                                    double gamma, double tol) {
  const std::size_t na = dm.numActions();
  if (actionValues.size() != dm.numStates() * na) {
    throw OracleError("action-value table has the wrong size");
  }
  std::vector<std::size_t> greedy(dm.numStates(), 0);
  for (std::size_t s = 0; s < dm.numStates(); ++s) {
    for (std::size_t a = 1; a < na; ++a) {
      if (actionValues[s * na + a] > actionValues[s * na + greedy[s]]) {
        greedy[s] = a;
      }
    }
  }
  return evaluateEpsilonGreedy(dm, greedy, epsilon, gamma, tol);
}

double TheoremReport::maxDeviation() const {
  return std::max({maxLeviVsAvi, maxAviVsOracle, maxLeviVsEvi, maxEviVsOracle});
}

namespace {

// Uniform positives normalised onto the simplex; the last slot is returned
// separately as termination mass.
std::vector<double> randomSimplex(std::size_t size, Rng& rng) {
  std::vector<double> weights(size);
  double total = 0.0;
  for (double& x : weights) {
    x = rng.uniform(1e-3, 1.0);
    total += x;
  }
  for (double& x : weights) {
    x /= total;
  }
  return weights;
}

TabularDistributionModel randomDistributionModel(std::size_t n, std::size_t na, Rng& rng) {
  TabularDistributionModel dm(n, na);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t a = 0; a < na; ++a) {
      const std::vector<double> row = randomSimplex(n + 1, rng);
      for (std::size_t next = 0; next < n; ++next) {
        dm.p(s, a, next) = row[next];
      }
      dm.termProb(s, a) = row[n];
      dm.r(s, a) = rng.uniform(-5.0, 5.0);
    }
  }
  return dm;
}

Geem randomGeem(std::size_t n, std::size_t na, Rng& rng) {
  Geem g;
  const auto dim = static_cast<Eigen::Index>(n);
  for (std::size_t a = 0; a < na; ++a) {
    Eigen::VectorXd reward(dim);
    Eigen::MatrixXd next(dim, dim);
    Eigen::VectorXd beta(dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
      reward[j] = rng.uniform(-5.0, 5.0);
      beta[j] = rng.uniform();
      const std::vector<double> column = randomSimplex(n, rng);
      for (Eigen::Index i = 0; i < dim; ++i) {
        next(i, j) = column[static_cast<std::size_t>(i)];
      }
    }
    g.rewardWeights.push_back(std::move(reward));
    g.nextState.push_back(std::move(next));
    g.termination.push_back(std::move(beta));
  }
  return g;
}

void perturbOneEntry(Ztem& m, double perturbation, Rng& rng) {
  const Action a{rng.index(m.numActions())};
  const auto i = static_cast<Eigen::Index>(rng.index(m.dimension()));
  const auto j = static_cast<Eigen::Index>(rng.index(m.dimension()));
  m.transition(a)(i, j) += perturbation;
}

}  // namespace

TheoremReport enumerateTheoremChecks(std::size_t maxStates, std::size_t maxActions, std::size_t trials,
                                     std::uint64_t seed, double perturbation) {
  if (maxStates == 0 || maxActions == 0) {
    throw OracleError("theorem checks need at least one state and one action");
  }
  Rng rng(seed);
  TheoremReport report;
  report.trials = trials;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const std::size_t n = 1 + rng.index(maxStates);
    const std::size_t na = 1 + rng.index(maxActions);
    const double gamma = rng.uniform();
    const FeatureMap map = FeatureMap::oneHot(n);
    ValueWeights w(n, 0.0);
    std::vector<double> wPlain(n);
    for (std::size_t i = 0; i < n; ++i) {
      wPlain[i] = rng.uniform(-1.0, 1.0);
      w.w[static_cast<Eigen::Index>(i)] = wPlain[i];
    }

    const TabularDistributionModel dm = randomDistributionModel(n, na, rng);
    Ztem aligned = alignZtemFromDistribution(dm, map);
    if (perturbation != 0.0) {
      perturbOneEntry(aligned, perturbation, rng);
    }

    const Geem geem = randomGeem(n, na, rng);
    const GeemAlignedModel geemAligned = alignZtemFromGeem(geem);
    Ztem geemAsZtem(n, na);
    if (perturbation != 0.0) {
      for (std::size_t a = 0; a < na; ++a) {
        for (std::size_t j = 0; j < n; ++j) {
          const FeatureVector& e = map.encode(static_cast<Observation>(j));
          geemAsZtem.transition(Action{a}).col(static_cast<Eigen::Index>(j)) =
              geemAligned.expectedNext(e, Action{a});
          geemAsZtem.rewardWeights(Action{a})[static_cast<Eigen::Index>(j)] = geemAligned.reward(e, Action{a});
        }
      }
      perturbOneEntry(geemAsZtem, perturbation, rng);
    }
    const ExpectationModel& eviModel =
        perturbation != 0.0 ? static_cast<const ExpectationModel&>(geemAsZtem) : geemAligned;

    for (std::size_t s = 0; s < n; ++s) {
      const FeatureVector& e = map.encode(static_cast<Observation>(s));
      const auto col = static_cast<Eigen::Index>(s);

      double avi = -std::numeric_limits<double>::infinity();
      double evi = -std::numeric_limits<double>::infinity();
      double eviAligned = -std::numeric_limits<double>::infinity();
      for (std::size_t a = 0; a < na; ++a) {
        avi = std::max(avi, dm.r(s, a) + gamma * expectedNextValue(dm, s, a, wPlain));

        // EVI in both groupings: γ(1 − β)·(ŝᵀw) and γ·(((1 − β)ŝ)ᵀw). They are the
        // same number up to rounding; each is compared with the target written
        // in that grouping, so degenerate instances agree bit for bit.
        const double keep = 1.0 - geem.termination[a][col];
        double sHatValue = 0.0;
        double sBarValue = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double g = geem.nextState[a](static_cast<Eigen::Index>(i), col);
          sHatValue += g * wPlain[i];
          sBarValue += wPlain[i] * (keep * g);
        }
        evi = std::max(evi, geem.rewardWeights[a][col] + gamma * keep * sHatValue);
        eviAligned = std::max(eviAligned, geem.rewardWeights[a][col] + gamma * sBarValue);
      }

      const Discount g(gamma);
      report.maxLeviVsAvi = std::max(report.maxLeviVsAvi, std::abs(leviTarget(e, aligned, w, g) - avi));
      report.maxAviVsOracle = std::max(report.maxAviVsOracle, std::abs(aviTarget(s, dm, w, map, g) - avi));
      report.maxLeviVsEvi = std::max(report.maxLeviVsEvi, std::abs(leviTarget(e, eviModel, w, g) - eviAligned));
      report.maxEviVsOracle = std::max(report.maxEviVsOracle, std::abs(eviTarget(e, geem, w, g) - evi));
      ++report.targetsCompared;
    }
  }
  return report;
}

Eq14Witness eq14Witness() {
  const TabularDistributionModel dm = CounterexampleMdp(RngSeed{0}).exportTrueModel();
  const TabularSolution sol = solveValueIteration(dm, 1.0, 1e-14);
  constexpr std::size_t start = 0;
  constexpr std::size_t actionA = CounterexampleMdp::kA;

  double lhs = 0.0;
  for (std::size_t next = 0; next < dm.numStates(); ++next) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < dm.numActions(); ++a) {
      best = std::max(best, sol.q(next, a));
    }
    lhs += dm.p(start, actionA, next) * best;
  }

  double rhs = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < dm.numActions(); ++a) {
    double expected = 0.0;
    for (std::size_t next = 0; next < dm.numStates(); ++next) {
      expected += dm.p(start, actionA, next) * sol.q(next, a);
    }
    rhs = std::max(rhs, expected);
  }
  return {lhs, rhs};
}

}  // namespace emplan::oracles
