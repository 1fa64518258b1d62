#include "emplan/envs.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <algorithm>
#include <set>
#include <vector>

namespace emplan {
namespace {

using CE = CounterexampleMdp;

// Starts episodes until the corridor begins in `cell`.
void resetTo(CorridorEnv& env, Observation cell) {
  while (env.reset() != cell) {
  }
}

TEST(Counterexample, ResetIsStateOne) {
  CE env(RngSeed{0});
  for (int i = 0; i < 5; ++i) {
    EXPECT_EQ(env.reset(), static_cast<Observation>(CE::kState1));
    env.step(Action{CE::kB});
  }
}

TEST(Counterexample, StartBTerminatesWithBReward) {
  CE env(RngSeed{0}, -1.0);
  env.reset();
  const Step s = env.step(Action{CE::kB});
  EXPECT_EQ(s.reward, -1.0);
  EXPECT_TRUE(s.terminal);
  EXPECT_EQ(s.observation, kTerminalObservation);
}

TEST(Counterexample, LeafRewards) {
  // State 2: A -> 0, B -> -5. State 3 is the mirror image.
  const double expected[3][2] = {{0, 0}, {0.0, -5.0}, {-5.0, 0.0}};
  CE env(RngSeed{11});
  std::set<Observation> seen;
  for (int e = 0; e < 40; ++e) {
    env.reset();
    const Step first = env.step(Action{CE::kA});
    EXPECT_EQ(first.reward, 0.0);
    ASSERT_FALSE(first.terminal);
    seen.insert(first.observation);
    const std::size_t a = e % 2 == 0 ? CE::kA : CE::kB;
    const Step second = env.step(Action{a});
    EXPECT_TRUE(second.terminal);
    EXPECT_EQ(second.reward, expected[first.observation][a]);
  }
  EXPECT_EQ(seen, (std::set<Observation>{1, 2}));
}

TEST(Counterexample, ExportedModel) {
  const TabularDistributionModel m = CE(RngSeed{0}, -1.0).exportTrueModel();
  EXPECT_NO_THROW(m.validate());
  EXPECT_EQ(m.p(CE::kState1, CE::kA, CE::kState2), 0.5);
  EXPECT_EQ(m.p(CE::kState1, CE::kA, CE::kState3), 0.5);
  EXPECT_EQ(m.termProb(CE::kState1, CE::kB), 1.0);
  EXPECT_EQ(m.r(CE::kState1, CE::kB), -1.0);
  EXPECT_EQ(m.r(CE::kState2, CE::kA), 0.0);
  EXPECT_EQ(m.r(CE::kState2, CE::kB), -5.0);
  EXPECT_EQ(m.r(CE::kState3, CE::kA), -5.0);
  EXPECT_EQ(m.r(CE::kState3, CE::kB), 0.0);
}

TEST(Counterexample, RewardSupport) {
  EXPECT_EQ(CE(RngSeed{0}, -1.0).rewardSupport(), (std::vector<double>{-5.0, -1.0, 0.0}));
  EXPECT_EQ(CE(RngSeed{0}, 0.0).rewardSupport(), (std::vector<double>{-5.0, 0.0}));
}

TEST(Counterexample, LeafFrequencyIsOneHalf) {
  CE env(RngSeed{5});
  const int n = 20000;
  int toState2 = 0;
  for (int i = 0; i < n; ++i) {
    env.reset();
    toState2 += env.step(Action{CE::kA}).observation == static_cast<Observation>(CE::kState2);
    env.step(Action{CE::kA});
  }
  EXPECT_NEAR(static_cast<double>(toState2) / n, 0.5, 3.0 * std::sqrt(0.25 / n));
}

TEST(Corridor, DeterministicGoalAdjacentStep) {
  CorridorEnv env(RngSeed{1}, CorridorParams{.slipProb = 0.0});
  resetTo(env, 8);
  const Step s = env.step(Action{CorridorEnv::kRight});
  EXPECT_EQ(s.reward, 20.0);
  EXPECT_TRUE(s.terminal);
  resetTo(env, 0);
  const Step other = env.step(Action{CorridorEnv::kLeft});
  EXPECT_EQ(other.reward, 0.0);
  EXPECT_TRUE(other.terminal);
  resetTo(env, 4);
  const Step inner = env.step(Action{CorridorEnv::kLeft});
  EXPECT_EQ(inner.reward, -1.0);
  EXPECT_EQ(inner.observation, 3);
  EXPECT_FALSE(inner.terminal);
}

TEST(Corridor, FullSlipReversesMoves) {
  CorridorEnv env(RngSeed{1}, CorridorParams{.slipProb = 1.0});
  resetTo(env, 4);
  EXPECT_EQ(env.step(Action{CorridorEnv::kLeft}).observation, 5);
}

TEST(Corridor, StartIsUniformOverCells) {
  CorridorEnv env(RngSeed{2}, CorridorParams{});
  std::vector<int> counts(CorridorEnv::kLength, 0);
  const int n = 27000;
  for (int i = 0; i < n; ++i) {
    const Observation o = env.reset();
    ASSERT_GE(o, 0);
    ASSERT_LT(o, static_cast<Observation>(CorridorEnv::kLength));
    ++counts[static_cast<std::size_t>(o)];
  }
  const double p = 1.0 / CorridorEnv::kLength;
  for (int c : counts) {
    EXPECT_NEAR(static_cast<double>(c) / n, p, 4.0 * std::sqrt(p * (1 - p) / n));
  }
}

TEST(Corridor, SameSeedSameTrajectory) {
  CorridorEnv a(RngSeed{77}, CorridorParams{});
  CorridorEnv b(RngSeed{77}, CorridorParams{});
  for (int e = 0; e < 20; ++e) {
    ASSERT_EQ(a.reset(), b.reset());
    std::size_t t = 0;
    while (a.inEpisode()) {
      const Action act{t++ % 3 == 0 ? CorridorEnv::kLeft : CorridorEnv::kRight};
      const Step sa = a.step(act);
      const Step sb = b.step(act);
      ASSERT_EQ(sa.reward, sb.reward);
      ASSERT_EQ(sa.observation, sb.observation);
      ASSERT_EQ(sa.terminal, sb.terminal);
    }
    ASSERT_FALSE(b.inEpisode());
  }
}

TEST(Corridor, RewardsStayInSupport) {
  CorridorEnv env(RngSeed{4}, CorridorParams{.phaseLength = 3});
  const std::vector<double> support = env.rewardSupport();
  EXPECT_EQ(support, (std::vector<double>{-1.0, 0.0, 20.0}));
  for (int e = 0; e < 200; ++e) {
    env.reset();
    while (env.inEpisode()) {
      const double r = env.step(Action{static_cast<std::size_t>(e % 2)}).reward;
      EXPECT_NE(std::find(support.begin(), support.end(), r), support.end());
    }
  }
}

TEST(Corridor, ExportedModelIsRowStochastic) {
  for (double slip : {0.0, 0.1, 1.0 / 3.0, 0.5, 1.0}) {
    const TabularDistributionModel m = CorridorEnv(RngSeed{0}, CorridorParams{.slipProb = slip}).exportTrueModel();
    EXPECT_NO_THROW(m.validate()) << "slip " << slip;
    EXPECT_EQ(m.numStates(), CorridorEnv::kLength);
    EXPECT_EQ(m.numActions(), 2u);
  }
}

TEST(Corridor, ExportedModelValues) {
  const double slip = 1.0 / 3.0;
  const TabularDistributionModel m = CorridorEnv(RngSeed{0}, CorridorParams{.slipProb = slip}).exportTrueModel();
  EXPECT_NEAR(m.p(4, CorridorEnv::kRight, 5), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(m.p(4, CorridorEnv::kRight, 3), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(m.r(4, CorridorEnv::kRight), -1.0, 1e-15);
  EXPECT_NEAR(m.termProb(8, CorridorEnv::kRight), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(m.r(8, CorridorEnv::kRight), 2.0 / 3.0 * 20.0 - 1.0 / 3.0, 1e-13);
  EXPECT_NEAR(m.r(0, CorridorEnv::kLeft), -1.0 / 3.0, 1e-15);  // other end pays 0
}

TEST(Corridor, EmpiricalKernelMatchesExport) {
  const CorridorParams params{.slipProb = 1.0 / 3.0};
  CorridorEnv env(RngSeed{123}, params);
  const TabularDistributionModel m = env.exportTrueModel();
  const int perPair = 3000;
  for (std::size_t s = 0; s < CorridorEnv::kLength; ++s) {
    for (std::size_t a = 0; a < 2; ++a) {
      std::vector<int> next(CorridorEnv::kLength, 0);
      int terminal = 0;
      double rewardSum = 0.0;
      for (int i = 0; i < perPair; ++i) {
        resetTo(env, static_cast<Observation>(s));
        const Step st = env.step(Action{a});
        rewardSum += st.reward;
        if (st.terminal) {
          ++terminal;
        } else {
          ++next[static_cast<std::size_t>(st.observation)];
        }
      }
      auto within = [&](double freq, double p) {
        return std::abs(freq - p) <= 3.0 * std::sqrt(p * (1 - p) / perPair) + 1e-12;
      };
      for (std::size_t n = 0; n < CorridorEnv::kLength; ++n) {
        EXPECT_TRUE(within(static_cast<double>(next[n]) / perPair, m.p(s, a, n))) << s << ' ' << a << ' ' << n;
      }
      EXPECT_TRUE(within(static_cast<double>(terminal) / perPair, m.termProb(s, a))) << s << ' ' << a;
    }
  }
}

TEST(Corridor, SwitchGoalIsAnInvolution) {
  CorridorEnv env(RngSeed{0}, CorridorParams{.phaseLength = 10});
  const TabularDistributionModel before = env.exportTrueModel();
  env.switchGoal();
  EXPECT_EQ(env.goalSide(), GoalSide::Left);
  EXPECT_EQ(env.phase(), 1u);
  env.switchGoal();
  EXPECT_EQ(env.goalSide(), GoalSide::Right);
  EXPECT_EQ(env.exportTrueModel(), before);
}

TEST(Corridor, SwitchOnStationaryCorridorThrows) {
  CorridorEnv env(RngSeed{0}, CorridorParams{});
  EXPECT_THROW(env.switchGoal(), UsageError);
}

TEST(Corridor, SwitchChangesOnlyTerminalRewards) {
  CorridorEnv env(RngSeed{0}, CorridorParams{.phaseLength = 10});
  const TabularDistributionModel before = env.exportTrueModel();
  env.switchGoal();
  const TabularDistributionModel after = env.exportTrueModel();
  for (std::size_t s = 0; s < CorridorEnv::kLength; ++s) {
    for (std::size_t a = 0; a < 2; ++a) {
      EXPECT_EQ(before.termProb(s, a), after.termProb(s, a));
      for (std::size_t n = 0; n < CorridorEnv::kLength; ++n) {
        EXPECT_EQ(before.p(s, a, n), after.p(s, a, n));
      }
      const bool touchesEnd = before.termProb(s, a) > 0.0;
      if (!touchesEnd) {
        EXPECT_EQ(before.r(s, a), after.r(s, a));
      }
    }
  }
  EXPECT_NE(before.r(8, CorridorEnv::kRight), after.r(8, CorridorEnv::kRight));
  EXPECT_NE(before.r(0, CorridorEnv::kLeft), after.r(0, CorridorEnv::kLeft));
}

TEST(Corridor, GoalSwitchesEveryPhase) {
  CorridorEnv env(RngSeed{0}, CorridorParams{.slipProb = 0.0, .phaseLength = 2});
  std::vector<GoalSide> sides;
  for (int e = 0; e < 6; ++e) {
    env.reset();
    sides.push_back(env.goalSide());
    while (env.inEpisode()) {
      env.step(Action{CorridorEnv::kRight});
    }
  }
  const std::vector<GoalSide> expected{GoalSide::Right, GoalSide::Right, GoalSide::Left,
                                       GoalSide::Left,  GoalSide::Right, GoalSide::Right};
  EXPECT_EQ(sides, expected);
  EXPECT_EQ(env.phase(), 2u);
}

TEST(Corridor, InvalidSlipThrows) {
  EXPECT_THROW(CorridorEnv(RngSeed{0}, CorridorParams{.slipProb = 1.5}), UsageError);
}

}  // namespace
}  // namespace emplan
