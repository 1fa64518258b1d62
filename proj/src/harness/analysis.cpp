#include "emplan/harness/analysis.hpp"

#include "emplan/common.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace emplan::harness {

MeanSe meanAndSe(const std::vector<double>& samples) {
  if (samples.empty()) {
    throw UsageError("mean of an empty sample");
  }
  const double n = static_cast<double>(samples.size());
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  if (samples.size() == 1) {
    return {mean, 0.0};
  }
  double ss = 0.0;
  for (double x : samples) {
    ss += (x - mean) * (x - mean);
  }
  return {mean, std::sqrt(ss / (n - 1.0)) / std::sqrt(n)};
}

bool separatedAbove(const MeanSe& a, const MeanSe& b, double k) { return a.lower(k) > b.upper(k); }

MeanSe finalEpisodesPerformance(const RunMatrix& perRun, std::size_t episodes) {
  if (perRun.empty() || episodes == 0) {
    throw UsageError("final performance needs at least one run and one episode");
  }
  std::vector<double> perRunMean;
  for (const auto& row : perRun) {
    if (row.size() < episodes) {
      throw UsageError("run shorter than the final window");
    }
    perRunMean.push_back(std::accumulate(row.end() - static_cast<std::ptrdiff_t>(episodes), row.end(), 0.0) /
                         static_cast<double>(episodes));
  }
  return meanAndSe(perRunMean);
}

MeanSe finalBinPerformance(const LearningCurve& curve) {
  const std::size_t bins = curve.episodes() / curve.binSize;
  if (bins == 0) {
    throw UsageError("curve has no complete bin");
  }
  std::vector<double> perRunMean;
  const std::size_t begin = (bins - 1) * curve.binSize;
  for (const auto& row : curve.perRun) {
    double total = 0.0;
    for (std::size_t e = begin; e < begin + curve.binSize; ++e) {
      total += row[e];
    }
    perRunMean.push_back(total / static_cast<double>(curve.binSize));
  }
  return meanAndSe(perRunMean);
}

std::vector<std::size_t> recoveryBins(const std::vector<double>& binned, const RecoveryParams& params) {
  if (params.binSize == 0 || params.phaseLength % params.binSize != 0) {
    throw UsageError("phase length must be a positive multiple of the bin size");
  }
  const std::size_t phaseBins = params.phaseLength / params.binSize;
  if (params.referenceBins == 0 || params.referenceBins > phaseBins) {
    throw UsageError("reference window must fit inside one phase");
  }
  std::vector<std::size_t> out;
  for (std::size_t sw = phaseBins; sw + phaseBins <= binned.size(); sw += phaseBins) {
    double reference = 0.0;
    for (std::size_t b = sw - params.referenceBins; b < sw; ++b) {
      reference += binned[b];
    }
    reference /= static_cast<double>(params.referenceBins);
    const double threshold = reference - (1.0 - params.fraction) * std::abs(reference);
    std::size_t recovery = phaseBins + 1;
    for (std::size_t j = 1; j <= phaseBins; ++j) {
      if (binned[sw + j - 1] >= threshold) {
        recovery = j;
        break;
      }
    }
    out.push_back(recovery);
  }
  return out;
}

std::vector<std::vector<std::size_t>> perRunRecovery(const RunMatrix& perRun, const RecoveryParams& params) {
  std::vector<std::vector<std::size_t>> out;
  for (const auto& row : binEachRun(perRun, params.binSize)) {
    out.push_back(recoveryBins(row, params));
  }
  return out;
}

std::vector<MeanSe> perSwitchRecovery(const RunMatrix& perRun, const RecoveryParams& params) {
  const auto times = perRunRecovery(perRun, params);
  std::vector<MeanSe> out;
  for (std::size_t sw = 0; !times.empty() && sw < times.front().size(); ++sw) {
    std::vector<double> samples;
    for (const auto& run : times) {
      samples.push_back(static_cast<double>(run[sw]));
    }
    out.push_back(meanAndSe(samples));
  }
  return out;
}

std::vector<double> perRunMeanRecovery(const RunMatrix& perRun, const RecoveryParams& params) {
  std::vector<double> out;
  for (const auto& row : binEachRun(perRun, params.binSize)) {
    const auto times = recoveryBins(row, params);
    if (times.empty()) {
      throw UsageError("run has no complete phase after a switch");
    }
    out.push_back(std::accumulate(times.begin(), times.end(), 0.0) / static_cast<double>(times.size()));
  }
  return out;
}

}  // namespace emplan::harness
