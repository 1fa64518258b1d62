#include "emplan/envs.hpp"
#include "emplan/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace emplan::oracles {
namespace {

using CE = CounterexampleMdp;

TEST(ValueIteration, Counterexample) {
  const TabularSolution sol = solveValueIteration(CE(RngSeed{0}, -1.0).exportTrueModel(), 1.0, 1e-14);
  EXPECT_EQ(sol.q(CE::kState2, CE::kA), 0.0);
  EXPECT_EQ(sol.q(CE::kState2, CE::kB), -5.0);
  EXPECT_EQ(sol.q(CE::kState3, CE::kA), -5.0);
  EXPECT_EQ(sol.q(CE::kState3, CE::kB), 0.0);
  EXPECT_EQ(sol.q(CE::kState1, CE::kA), 0.0);
  EXPECT_EQ(sol.q(CE::kState1, CE::kB), -1.0);
  EXPECT_EQ(sol.vStar, (std::vector<double>{0.0, 0.0, 0.0}));
  EXPECT_EQ(sol.piStar, (std::vector<std::size_t>{CE::kA, CE::kA, CE::kB}));
  EXPECT_LE(sol.residual, 1e-14);
}

TEST(ValueIteration, CounterexampleRewardingB) {
  const TabularSolution sol = solveValueIteration(CE(RngSeed{0}, 2.0).exportTrueModel(), 1.0, 1e-14);
  EXPECT_EQ(sol.vStar[0], 2.0);
  EXPECT_EQ(sol.piStar[0], CE::kB);
}

TEST(ValueIteration, DeterministicCorridorIsShortestPath) {
  const auto dm = CorridorEnv(RngSeed{0}, CorridorParams{.slipProb = 0.0}).exportTrueModel();
  const TabularSolution sol = solveValueIteration(dm, 1.0, 1e-13);
  for (std::size_t cell = 0; cell < CorridorEnv::kLength; ++cell) {
    // From cell c the goal is 9 - c moves away: 8 - c steps of -1, then +20.
    const double stepsToGoal = static_cast<double>(CorridorEnv::kLength - cell);
    EXPECT_NEAR(sol.vStar[cell], 21.0 - stepsToGoal, 1e-12) << cell;
    EXPECT_EQ(sol.piStar[cell], CorridorEnv::kRight);
  }
  const auto left = CorridorEnv(RngSeed{0}, CorridorParams{.slipProb = 0.0, .goalSide = GoalSide::Left})
                        .exportTrueModel();
  const TabularSolution mirrored = solveValueIteration(left, 1.0, 1e-13);
  for (std::size_t cell = 0; cell < CorridorEnv::kLength; ++cell) {
    EXPECT_NEAR(mirrored.vStar[cell], sol.vStar[CorridorEnv::kLength - 1 - cell], 1e-12);
  }
}

TEST(ValueIteration, StochasticCorridorBellmanIdentity) {
  const double slip = 1.0 / 3.0;
  const auto dm = CorridorEnv(RngSeed{0}, CorridorParams{.slipProb = slip}).exportTrueModel();
  const TabularSolution sol = solveValueIteration(dm, 1.0, 1e-13);
  // Right from the last cell: goal w.p. 2/3, one step back w.p. 1/3.
  const double identity = (1 - slip) * 20.0 + slip * (-1.0 + sol.vStar[7]);
  EXPECT_NEAR(sol.q(8, CorridorEnv::kRight), identity, 1e-10);
  EXPECT_NEAR(sol.vStar[8], identity, 1e-10);
  // Interior cell: two -1 steps.
  const double interior = (1 - slip) * (-1.0 + sol.vStar[5]) + slip * (-1.0 + sol.vStar[3]);
  EXPECT_NEAR(sol.q(4, CorridorEnv::kRight), interior, 1e-10);
  EXPECT_LT(bellmanResidual(dm, 1.0, sol), 1e-10);
}

TEST(ValueIteration, ResidualOfWrongSolutionIsLarge) {
  const auto dm = CE(RngSeed{0}).exportTrueModel();
  TabularSolution sol = solveValueIteration(dm, 1.0, 1e-14);
  sol.vStar[1] = 3.0;
  EXPECT_GT(bellmanResidual(dm, 1.0, sol), 1.0);
}

TEST(ValueIteration, NonConvergenceThrows) {
  // Self-loop that terminates with probability 1/2: converges geometrically, not in 3 sweeps.
  TabularDistributionModel dm(1, 1);
  dm.p(0, 0, 0) = 0.5;
  dm.termProb(0, 0) = 0.5;
  dm.r(0, 0) = 1.0;
  EXPECT_THROW(solveValueIteration(dm, 1.0, 1e-12, 3), OracleError);
  EXPECT_NEAR(solveValueIteration(dm, 1.0, 1e-12).vStar[0], 2.0, 1e-11);
  // A reward-paying loop that never terminates has no finite value at γ = 1.
  TabularDistributionModel loop(1, 1);
  loop.p(0, 0, 0) = 1.0;
  loop.r(0, 0) = 1.0;
  EXPECT_THROW(solveValueIteration(loop, 1.0, 1e-12, 10000), OracleError);
  EXPECT_THROW(solveValueIteration(dm, 1.0, 0.0), OracleError);
}

TEST(ValueIteration, DiscountedGeometricValue) {
  TabularDistributionModel dm(1, 1);
  dm.p(0, 0, 0) = 1.0;
  dm.r(0, 0) = 1.0;
  EXPECT_NEAR(solveValueIteration(dm, 0.9, 1e-12).vStar[0], 10.0, 1e-9);
}

TEST(EpsilonGreedy, CounterexampleValues) {
  const auto dm = CE(RngSeed{0}, -1.0).exportTrueModel();
  const TabularSolution sol = solveValueIteration(dm, 1.0, 1e-14);
  const std::vector<double> v = evaluateEpsilonGreedy(dm, sol.piStar, 0.1, 1.0);
  // Leaves: 0.95 * 0 + 0.05 * (-5).
  EXPECT_NEAR(v[1], -0.25, 1e-12);
  EXPECT_NEAR(v[2], -0.25, 1e-12);
  // Start: 0.95 * leaf + 0.05 * r_B.
  EXPECT_NEAR(v[0], 0.95 * -0.25 + 0.05 * -1.0, 1e-12);
  EXPECT_EQ(evaluateEpsilonGreedyFromValues(dm, sol.qStar, 0.1, 1.0), v);
}

TEST(EpsilonGreedy, ZeroEpsilonIsOptimal) {
  const auto dm = CorridorEnv(RngSeed{0}, CorridorParams{.slipProb = 0.1}).exportTrueModel();
  const TabularSolution sol = solveValueIteration(dm, 1.0, 1e-13);
  const std::vector<double> v = evaluateEpsilonGreedy(dm, sol.piStar, 0.0, 1.0);
  for (std::size_t s = 0; s < v.size(); ++s) {
    EXPECT_NEAR(v[s], sol.vStar[s], 1e-10);
  }
}

TEST(EpsilonGreedy, FullEpsilonIsUniformPolicy) {
  const auto dm = CE(RngSeed{0}, -1.0).exportTrueModel();
  const std::vector<double> v = evaluateEpsilonGreedy(dm, {1, 1, 1}, 1.0, 1.0);
  // Uniform policy in closed form.
  EXPECT_NEAR(v[1], -2.5, 1e-12);
  EXPECT_NEAR(v[2], -2.5, 1e-12);
  EXPECT_NEAR(v[0], 0.5 * -2.5 + 0.5 * -1.0, 1e-12);
}

TEST(EpsilonGreedy, UniformPolicyOnCorridorMatchesLinearSolve) {
  // Uniform random walk with slip: v = r_pi + P_pi v, solved directly.
  const auto dm = CorridorEnv(RngSeed{0}, CorridorParams{.slipProb = 1.0 / 3.0}).exportTrueModel();
  const std::size_t n = dm.numStates();
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t a = 0; a < 2; ++a) {
      b[s] += 0.5 * dm.r(s, a);
      for (std::size_t t = 0; t < n; ++t) {
        A(s, t) -= 0.5 * dm.p(s, a, t);
      }
    }
  }
  const Eigen::VectorXd direct = A.partialPivLu().solve(b);
  const std::vector<double> v = evaluateEpsilonGreedy(dm, std::vector<std::size_t>(n, 0), 1.0, 1.0);
  for (std::size_t s = 0; s < n; ++s) {
    EXPECT_NEAR(v[s], direct[s], 1e-10);
  }
}

TEST(EpsilonGreedy, WrongPolicySizeThrows) {
  const auto dm = CE(RngSeed{0}).exportTrueModel();
  EXPECT_THROW(evaluateEpsilonGreedy(dm, {0, 0}, 0.1, 1.0), OracleError);
  EXPECT_THROW(evaluateEpsilonGreedyFromValues(dm, {0, 0, 0}, 0.1, 1.0), OracleError);
}

TEST(Theorems, AlignedTargetsAgree) {
  const TheoremReport report = enumerateTheoremChecks(8, 4, 300, 99);
  EXPECT_EQ(report.trials, 300u);
  EXPECT_GT(report.targetsCompared, 300u);
  EXPECT_LT(report.maxLeviVsAvi, 1e-12);
  EXPECT_LT(report.maxAviVsOracle, 1e-12);
  EXPECT_LT(report.maxLeviVsEvi, 1e-12);
  EXPECT_LT(report.maxEviVsOracle, 1e-12);
  EXPECT_LT(report.maxDeviation(), 1e-12);
}

TEST(Theorems, PerturbedAlignmentIsDetected) {
  const TheoremReport report = enumerateTheoremChecks(8, 4, 300, 99, 0.1);
  EXPECT_GT(report.maxLeviVsAvi, 1e-3);
  EXPECT_GT(report.maxDeviation(), 1e-3);
}

TEST(Theorems, DegenerateInstanceIsExact) {
  const TheoremReport report = enumerateTheoremChecks(1, 1, 50, 3);
  EXPECT_EQ(report.maxDeviation(), 0.0);
  EXPECT_THROW(enumerateTheoremChecks(0, 1, 1, 0), OracleError);
}

TEST(Eq14, Witness) {
  const Eq14Witness w = eq14Witness();
  EXPECT_EQ(w.lhs, 0.0);
  EXPECT_EQ(w.rhs, -2.5);
  EXPECT_GT(w.lhs, w.rhs);
}

}  // namespace
}  // namespace emplan::oracles
