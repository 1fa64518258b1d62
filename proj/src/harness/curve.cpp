#include "emplan/harness/curve.hpp"

#include "emplan/harness/config.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace emplan::harness {

std::vector<double> binCurve(const RunMatrix& perRun, std::size_t binSize) {
  if (binSize == 0) {
    throw ConfigError("bin size must be at least 1");
  }
  if (perRun.empty()) {
    throw ConfigError("no runs to bin");
  }
  const std::size_t episodes = perRun.front().size();
  for (const auto& row : perRun) {
    if (row.size() != episodes) {
      throw ConfigError("runs have different episode counts");
    }
  }
  if (binSize > episodes) {
    throw ConfigError("bin size exceeds the number of episodes");
  }
  const std::size_t bins = episodes / binSize;
  std::vector<double> binned(bins, 0.0);
  const double runs = static_cast<double>(perRun.size());
  for (std::size_t bin = 0; bin < bins; ++bin) {
    double total = 0.0;
    for (std::size_t e = bin * binSize; e < (bin + 1) * binSize; ++e) {
      double episodeMean = 0.0;
      for (const auto& row : perRun) {
        episodeMean += row[e];
      }
      total += episodeMean / runs;
    }
    binned[bin] = total / static_cast<double>(binSize);
  }
  return binned;
}

RunMatrix binEachRun(const RunMatrix& perRun, std::size_t binSize) {
  RunMatrix out;
  out.reserve(perRun.size());
  for (const auto& row : perRun) {
    out.push_back(binCurve(RunMatrix{row}, binSize));
  }
  return out;
}

std::string formatNumber(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

void writePerRunCsv(std::ostream& out, const RunMatrix& perRun, const std::vector<std::size_t>& runIds) {
  out << "episode,run,total_reward\n";
  for (std::size_t r = 0; r < perRun.size(); ++r) {
    const std::size_t id = r < runIds.size() ? runIds[r] : r;
    for (std::size_t e = 0; e < perRun[r].size(); ++e) {
      out << e << ',' << id << ',' << formatNumber(perRun[r][e]) << '\n';
    }
  }
}

void writeBinnedCsv(std::ostream& out, const std::vector<double>& binned, std::size_t binSize) {
  out << "bin_start,mean_total_reward\n";
  for (std::size_t b = 0; b < binned.size(); ++b) {
    out << b * binSize << ',' << formatNumber(binned[b]) << '\n';
  }
}

namespace {

std::vector<std::string> splitCsvLine(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) {
    fields.push_back(field);
  }
  return fields;
}

std::ifstream openCsv(const std::filesystem::path& path, const std::string& expectedHeader) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open " + path.string());
  }
  std::string header;
  std::getline(in, header);
  if (!header.empty() && header.back() == '\r') {
    header.pop_back();
  }
  if (header != expectedHeader) {
    throw ConfigError(path.string() + ": expected header '" + expectedHeader + "'");
  }
  return in;
}

}  // namespace

RunMatrix readPerRunCsv(const std::filesystem::path& path) {
  std::ifstream in = openCsv(path, "episode,run,total_reward");
  std::map<std::size_t, std::map<std::size_t, double>> byRun;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    const auto fields = splitCsvLine(line);
    if (fields.size() != 3) {
      throw ConfigError(path.string() + ": malformed row '" + line + "'");
    }
    byRun[std::stoul(fields[1])][std::stoul(fields[0])] = parseReal(fields[2]);
  }
  RunMatrix matrix;
  for (const auto& [run, episodes] : byRun) {
    std::vector<double> row;
    row.reserve(episodes.size());
    std::size_t expected = 0;
    for (const auto& [episode, reward] : episodes) {
      if (episode != expected++) {
        throw ConfigError(path.string() + ": missing episodes in run " + std::to_string(run));
      }
      row.push_back(reward);
    }
    matrix.push_back(std::move(row));
  }
  return matrix;
}

BinnedSeries readBinnedCsv(const std::filesystem::path& path) {
  std::ifstream in = openCsv(path, "bin_start,mean_total_reward");
  BinnedSeries series;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    const auto fields = splitCsvLine(line);
    if (fields.size() != 2) {
      throw ConfigError(path.string() + ": malformed row '" + line + "'");
    }
    series.binStart.push_back(parseReal(fields[0]));
    series.mean.push_back(parseReal(fields[1]));
  }
  return series;
}

std::string gitBlobHash(std::string_view content) {
  std::string blob = "blob " + std::to_string(content.size());
  blob.push_back('\0');
  blob.append(content);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(blob.data(), blob.size(), digest, &length, EVP_sha1(), nullptr) != 1) {
    throw std::runtime_error("SHA-1 digest failed");
  }
  std::string hex;
  char byte[3];
  for (unsigned int i = 0; i < length; ++i) {
    std::snprintf(byte, sizeof byte, "%02x", digest[i]);
    hex += byte;
  }
  return hex;
}

}  // namespace emplan::harness
