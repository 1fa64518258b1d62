#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace emplan::harness {

/// runs × episodes matrix of per-episode total reward.
using RunMatrix = std::vector<std::vector<double>>;

struct LearningCurve {
  std::size_t binSize = 1;
  RunMatrix perRun;
  std::vector<std::size_t> runIds;  // seed offset of each row
  std::vector<double> binned;

  std::size_t episodes() const { return perRun.empty() ? 0 : perRun.front().size(); }
};

/// Mean across runs within each episode, then across consecutive bins of
/// `binSize` episodes. A trailing partial bin is dropped.
std::vector<double> binCurve(const RunMatrix& perRun, std::size_t binSize);

/// Per-run mean over consecutive bins (no averaging across runs).
RunMatrix binEachRun(const RunMatrix& perRun, std::size_t binSize);

/// `episode,run,total_reward`, rows ordered by run then episode.
void writePerRunCsv(std::ostream& out, const RunMatrix& perRun, const std::vector<std::size_t>& runIds);
/// `bin_start,mean_total_reward`.
void writeBinnedCsv(std::ostream& out, const std::vector<double>& binned, std::size_t binSize);

RunMatrix readPerRunCsv(const std::filesystem::path& path);

struct BinnedSeries {
  std::vector<double> binStart;
  std::vector<double> mean;
};
BinnedSeries readBinnedCsv(const std::filesystem::path& path);

/// Shortest round-trip decimal for a double.
std::string formatNumber(double x);

/// Hex SHA-1 of "blob <size>\0<content>", i.e. the id git assigns to a file
/// with this content.
std::string gitBlobHash(std::string_view content);

}  // namespace emplan::harness
