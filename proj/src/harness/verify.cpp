#include "emplan/harness/verify.hpp"

#include "emplan/agents.hpp"
#include "emplan/envs.hpp"
#include "emplan/harness/curve.hpp"
#include "emplan/models.hpp"
#include "emplan/oracles.hpp"
#include "emplan/planning.hpp"
#include "emplan/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>

namespace emplan::harness {

namespace {

constexpr std::uint64_t kVerifySeed = 20190801;
constexpr std::size_t kTheoremTrials = 1000;
constexpr double kTheoremTol = 1e-12;
constexpr double kNegativeControlMin = 1e-3;
constexpr double kDpTol = 1e-10;
constexpr double kGradientTol = 1e-6;
constexpr std::size_t kGradientPoints = 100;

CheckMetric atMost(std::string name, double value, double tol) { return {std::move(name), value, tol, value <= tol}; }
CheckMetric atLeast(std::string name, double value, double bound) {
  return {std::move(name), value, bound, value > bound};
}
CheckMetric near(std::string name, double value, double expected, double tol) {
  return {std::move(name), value, tol, std::abs(value - expected) <= tol};
}

CheckResult theorems() {
  const auto r = oracles::enumerateTheoremChecks(8, 4, kTheoremTrials, kVerifySeed);
  return {"theorems",
          {atMost("levi_vs_avi", r.maxLeviVsAvi, kTheoremTol), atMost("avi_vs_oracle", r.maxAviVsOracle, kTheoremTol),
           atMost("levi_vs_evi", r.maxLeviVsEvi, kTheoremTol), atMost("evi_vs_oracle", r.maxEviVsOracle, kTheoremTol)}};
}

CheckResult negativeControl() {
  const auto r = oracles::enumerateTheoremChecks(8, 4, kTheoremTrials, kVerifySeed, 0.1);
  return {"negative-control",
          {atLeast("perturbed_levi_vs_avi", r.maxLeviVsAvi, kNegativeControlMin),
           atLeast("perturbed_levi_vs_evi", r.maxLeviVsEvi, kNegativeControlMin)}};
}

CheckResult eq14() {
  const auto w = oracles::eq14Witness();
  return {"eq14", {near("lhs", w.lhs, 0.0, 0.0), near("rhs", w.rhs, -2.5, 0.0), atLeast("gap", w.lhs - w.rhs, 0.0)}};
}

CheckResult dpAnchors() {
  CheckResult out{"dp-anchors", {}};
  const auto ce = CounterexampleMdp(RngSeed{0}).exportTrueModel();
  const auto ceSol = oracles::solveValueIteration(ce, 1.0, 1e-14);
  const std::size_t s2 = CounterexampleMdp::kState2, s3 = CounterexampleMdp::kState3;
  const std::size_t A = CounterexampleMdp::kA, B = CounterexampleMdp::kB;
  out.metrics.push_back(near("counterexample_q2A", ceSol.q(s2, A), 0.0, kDpTol));
  out.metrics.push_back(near("counterexample_q2B", ceSol.q(s2, B), -5.0, kDpTol));
  out.metrics.push_back(near("counterexample_q3A", ceSol.q(s3, A), -5.0, kDpTol));
  out.metrics.push_back(near("counterexample_q3B", ceSol.q(s3, B), 0.0, kDpTol));
  out.metrics.push_back(near("counterexample_v1", ceSol.vStar[CounterexampleMdp::kState1], 0.0, kDpTol));
  out.metrics.push_back(atMost("counterexample_residual", oracles::bellmanResidual(ce, 1.0, ceSol), kDpTol));

  CorridorParams det;
  det.slipProb = 0.0;
  const auto cd = CorridorEnv(RngSeed{0}, det).exportTrueModel();
  const auto cdSol = oracles::solveValueIteration(cd, 1.0, 1e-14);
  double worst = 0.0;
  for (std::size_t cell = 0; cell < CorridorEnv::kLength; ++cell) {
    const double stepsToGoal = static_cast<double>(CorridorEnv::kLength - cell);
    worst = std::max(worst, std::abs(cdSol.vStar[cell] - (det.goalReward + 1.0 - stepsToGoal)));
  }
  out.metrics.push_back(atMost("deterministic_corridor_v_max_error", worst, kDpTol));

  CorridorParams slip;
  const auto cs = CorridorEnv(RngSeed{0}, slip).exportTrueModel();
  const auto csSol = oracles::solveValueIteration(cs, 1.0, 1e-14);
  // Goal-adjacent cell, moving toward the goal: 2/3 · 20 + 1/3 · (−1 + v(left neighbour)).
  const std::size_t adj = CorridorEnv::kLength - 1;
  const double identity = (2.0 / 3.0) * slip.goalReward + (1.0 / 3.0) * (slip.stepReward + csSol.vStar[adj - 1]);
  out.metrics.push_back(near("stochastic_corridor_goal_adjacent_identity", csSol.q(adj, CorridorEnv::kRight),
                             identity, kDpTol));
  out.metrics.push_back(atMost("stochastic_corridor_residual", oracles::bellmanResidual(cs, 1.0, csSol), kDpTol));

  const auto eps0 = oracles::evaluateEpsilonGreedy(ce, ceSol.piStar, 0.0, 1.0);
  out.metrics.push_back(near("counterexample_eps0_start", eps0[CounterexampleMdp::kState1], ceSol.vStar[0], kDpTol));
  const auto eps01 = oracles::evaluateEpsilonGreedy(ce, ceSol.piStar, 0.1, 1.0);
  // Leaves: 0.95·0 + 0.05·(−5); start: 0.95·leaf + 0.05·r_B.
  const double leaf = 0.05 * -5.0;
  out.metrics.push_back(near("counterexample_eps01_leaf", eps01[s2], leaf, kDpTol));
  out.metrics.push_back(near("counterexample_eps01_start", eps01[CounterexampleMdp::kState1],
                             0.95 * leaf + 0.05 * CounterexampleMdp::kDefaultBReward, kDpTol));
  return out;
}

// Planning with the exact aligned ZTEM reproduces the optimal Bellman backup at v*.
CheckResult alignment() {
  CheckResult out{"alignment", {}};
  auto check = [&](const std::string& name, const TabularDistributionModel& dm) {
    const auto sol = oracles::solveValueIteration(dm, 1.0, 1e-14);
    const FeatureMap map = FeatureMap::oneHot(dm.numStates());
    const Ztem model = alignZtemFromDistribution(dm, map);
    ValueWeights w(dm.numStates(), 0.0);
    for (std::size_t s = 0; s < dm.numStates(); ++s) {
      w.w[static_cast<Eigen::Index>(s)] = sol.vStar[s];
    }
    double worst = 0.0;
    for (std::size_t s = 0; s < dm.numStates(); ++s) {
      const double t = leviTarget(map.encode(static_cast<Observation>(s)), model, w, Discount(1.0));
      worst = std::max(worst, std::abs(t - sol.vStar[s]));
    }
    out.metrics.push_back(atMost(name, worst, kDpTol));
  };
  check("counterexample_levi_vs_vstar", CounterexampleMdp(RngSeed{0}).exportTrueModel());
  CorridorParams det;
  det.slipProb = 0.0;
  check("deterministic_corridor_levi_vs_vstar", CorridorEnv(RngSeed{0}, det).exportTrueModel());
  check("stochastic_corridor_levi_vs_vstar", CorridorEnv(RngSeed{0}, CorridorParams{}).exportTrueModel());
  return out;
}

double relativeError(const Eigen::VectorXd& analytic, const Eigen::VectorXd& numeric) {
  const double scale = std::max({analytic.norm(), numeric.norm(), 1e-300});
  return (analytic - numeric).norm() / scale;
}

// Central difference of f over the entries of x.
Eigen::VectorXd centralDifference(Eigen::VectorXd& x, const std::function<double()>& f, double h) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + h;
    const double up = f();
    x[i] = saved - h;
    const double down = f();
    x[i] = saved;
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

Eigen::VectorXd randomVector(Rng& rng, std::size_t n) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v[i] = rng.uniform(-1.0, 1.0);
  }
  return v;
}

CheckResult gradients() {
  constexpr std::size_t d = 6, numActions = 3;
  Rng rng = Rng::forStream(RngSeed{kVerifySeed}, Stream::Model);
  double softmaxWorst = 0.0, transitionWorst = 0.0, rewardWorst = 0.0;
  for (std::size_t point = 0; point < kGradientPoints; ++point) {
    const FeatureVector s = randomVector(rng, d);
    const Action a{rng.index(numActions)};

    PolicyParams policy(d, numActions, 0.0);
    for (auto& th : policy.theta) {
      th = 2.0 * randomVector(rng, d);
    }
    const auto analytic = policy.logGradient(s, a);
    for (std::size_t b = 0; b < numActions; ++b) {
      const auto numeric = centralDifference(
          policy.theta[b], [&] { return std::log(policy.probabilities(s)[a.index]); }, 1e-5);
      softmaxWorst = std::max(softmaxWorst, relativeError(analytic[b], numeric));
    }

    Ztem model(d, numActions);
    for (std::size_t b = 0; b < numActions; ++b) {
      Eigen::MatrixXd& F = model.transition(Action{b});
      for (Eigen::Index i = 0; i < F.size(); ++i) {
        F.data()[i] = rng.uniform(-1.0, 1.0);
      }
      model.rewardWeights(Action{b}) = randomVector(rng, d);
    }
    const FeatureVector next = randomVector(rng, d);
    const double reward = rng.uniform(-5.0, 5.0);

    const Eigen::MatrixXd gF = model.transitionLossGradient(s, a, next);
    Eigen::MatrixXd& F = model.transition(a);
    Eigen::VectorXd flat = Eigen::Map<Eigen::VectorXd>(F.data(), F.size());
    const auto numericF = centralDifference(
        flat,
        [&] {
          F = Eigen::Map<Eigen::MatrixXd>(flat.data(), F.rows(), F.cols());
          return model.transitionLoss(s, a, next);
        },
        1e-5);
    F = Eigen::Map<Eigen::MatrixXd>(flat.data(), F.rows(), F.cols());
    transitionWorst =
        std::max(transitionWorst, relativeError(Eigen::Map<const Eigen::VectorXd>(gF.data(), gF.size()), numericF));

    const Eigen::VectorXd gb = model.rewardLossGradient(s, a, reward);
    const auto numericB =
        centralDifference(model.rewardWeights(a), [&] { return model.rewardLoss(s, a, reward); }, 1e-5);
    rewardWorst = std::max(rewardWorst, relativeError(gb, numericB));
  }
  return {"gradients",
          {atMost("softmax_log_gradient_rel_error", softmaxWorst, kGradientTol),
           atMost("transition_loss_gradient_rel_error", transitionWorst, kGradientTol),
           atMost("reward_loss_gradient_rel_error", rewardWorst, kGradientTol)}};
}

struct NamedCheck {
  const char* name;
  CheckResult (*run)();
};

constexpr NamedCheck kChecks[] = {{"theorems", theorems}, {"negative-control", negativeControl},
                                  {"eq14", eq14},         {"dp-anchors", dpAnchors},
                                  {"alignment", alignment}, {"gradients", gradients}};

}  // namespace

bool CheckResult::passed() const {
  return std::all_of(metrics.begin(), metrics.end(), [](const CheckMetric& m) { return m.passed; });
}

const std::vector<std::string>& verificationChecks() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& c : kChecks) {
      n.emplace_back(c.name);
    }
    return n;
  }();
  return names;
}

std::vector<CheckResult> runVerification(const std::vector<std::string>& only) {
  for (const auto& name : only) {
    const auto& all = verificationChecks();
    if (std::find(all.begin(), all.end(), name) == all.end()) {
      throw UsageError("unknown check '" + name + "'");
    }
  }
  std::vector<CheckResult> results;
  for (const auto& c : kChecks) {
    if (only.empty() || std::find(only.begin(), only.end(), c.name) != only.end()) {
      results.push_back(c.run());
    }
  }
  return results;
}

void writeVerificationReport(std::ostream& out, const std::vector<CheckResult>& results) {
  std::size_t failed = 0;
  for (const auto& r : results) {
    out << (r.passed() ? "PASS " : "FAIL ") << r.name << '\n';
    for (const auto& m : r.metrics) {
      out << "  " << (m.passed ? "ok   " : "FAIL ") << m.name << '=' << formatNumber(m.value)
          << " (tol " << formatNumber(m.tolerance) << ")\n";
    }
    failed += r.passed() ? 0 : 1;
  }
  out << results.size() - failed << '/' << results.size() << " checks passed\n";
}

void writeVerificationCsv(std::ostream& out, const std::vector<CheckResult>& results) {
  out << "check,metric,value,tolerance,passed\n";
  for (const auto& r : results) {
    for (const auto& m : r.metrics) {
      out << r.name << ',' << m.name << ',' << formatNumber(m.value) << ',' << formatNumber(m.tolerance) << ','
          << (m.passed ? 1 : 0) << '\n';
    }
  }
}

}  // namespace emplan::harness
