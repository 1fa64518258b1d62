#pragma once

#include "emplan/harness/curve.hpp"

#include <cstddef>
#include <vector>

namespace emplan::harness {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;  // sample standard deviation / sqrt(n); 0 for n = 1

  double lower(double k = 2.0) const { return mean - k * se; }
  double upper(double k = 2.0) const { return mean + k * se; }
};

MeanSe meanAndSe(const std::vector<double>& samples);

/// True when [a − k·se, a + k·se] lies strictly above the interval for b.
bool separatedAbove(const MeanSe& a, const MeanSe& b, double k = 2.0);

/// Per-run mean over the last `episodes` episodes, summarised across runs.
MeanSe finalEpisodesPerformance(const RunMatrix& perRun, std::size_t episodes);

/// Per-run mean over the last complete bin of the curve, summarised across runs.
MeanSe finalBinPerformance(const LearningCurve& curve);

/// Recovery after a goal switch, measured on a binned curve.
///
/// The reference level is the mean of the `referenceBins` bins before the
/// switch; the threshold is reference − (1 − fraction)·|reference|. The
/// recovery time is the smallest j ≥ 1 such that bin (switch + j − 1) reaches
/// the threshold, or phaseBins + 1 if no bin of the next phase does.
struct RecoveryParams {
  std::size_t phaseLength = 500;  // episodes
  std::size_t binSize = 50;
  std::size_t referenceBins = 3;
  double fraction = 0.9;
};

/// One recovery time per switch that has a full phase after it.
std::vector<std::size_t> recoveryBins(const std::vector<double>& binned, const RecoveryParams& params);

/// Recovery times of each run's own binned curve: [run][switch].
std::vector<std::vector<std::size_t>> perRunRecovery(const RunMatrix& perRun, const RecoveryParams& params);

/// Mean ± SE across runs of the per-run recovery time at each switch.
std::vector<MeanSe> perSwitchRecovery(const RunMatrix& perRun, const RecoveryParams& params);

/// Recovery times of each run's own binned curve, averaged over switches.
std::vector<double> perRunMeanRecovery(const RunMatrix& perRun, const RecoveryParams& params);

}  // namespace emplan::harness
