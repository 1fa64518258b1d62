// emplan: run, sweep and verify the planning experiments; bin and plot curves.

#include "emplan/harness/config.hpp"
#include "emplan/harness/curve.hpp"
#include "emplan/harness/experiment.hpp"
#include "emplan/harness/svg.hpp"
#include "emplan/harness/verify.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace emplan;
using namespace emplan::harness;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDiverged = 3;

std::string readFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open " + path.string());
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// "alg1.runs.csv" -> "alg1"
std::string seriesLabel(const fs::path& path) {
  std::string stem = path.filename().string();
  for (const char* suffix : {".csv", ".runs", ".binned"}) {
    const std::string s(suffix);
    if (stem.size() > s.size() && stem.compare(stem.size() - s.size(), s.size(), s) == 0) {
      stem.erase(stem.size() - s.size());
    }
  }
  return stem;
}

std::string firstLine(const fs::path& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  return line;
}

ConfigDocument loadDocument(const fs::path& path, const std::vector<std::string>& overrides) {
  ConfigDocument doc = ConfigDocument::parse(readFile(path));
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("override must be key=value (got '" + o + "')");
    }
    applyOverride(doc, o.substr(0, eq), o.substr(eq + 1));
  }
  return doc;
}

int cmdRun(const fs::path& config, const std::vector<std::string>& overrides, const std::string& output,
           std::size_t workers) {
  ExperimentConfig cfg = buildConfig(loadDocument(config, overrides));
  if (!output.empty()) {
    cfg.output = output;
  }
  const ExperimentResult result = runExperiment(cfg, RunOptions{workers, true});
  std::cout << "wrote " << cfg.output.string() << " (config " << result.configHash << ")\n";
  for (const auto& a : result.agents) {
    std::cout << "  " << a.label << ": final bin mean " << formatNumber(a.curve.binned.back());
    if (!a.divergedRuns.empty()) {
      std::cout << ", " << a.divergedRuns.size() << " diverged runs excluded";
    }
    std::cout << '\n';
  }
  return 0;
}

int cmdSweep(const fs::path& config, const std::vector<std::string>& grid, std::size_t episodes, std::size_t runs,
             const std::string& csv, std::size_t workers) {
  std::vector<GridAxis> axes;
  for (const auto& g : grid) {
    axes.push_back(parseGridAxis(g));
  }
  const SweepResult result =
      sweep(loadDocument(config, {}), axes, SweepProtocol{episodes, runs}, RunOptions{workers, false});
  for (std::size_t a = 0; a < result.agentLabels.size(); ++a) {
    std::cout << result.agentLabels[a] << '\n';
    for (std::size_t c = 0; c < result.cells.size(); ++c) {
      std::cout << (result.best[a] == c ? "  * " : "    ") << result.cells[c].label << "  "
                << formatNumber(result.cells[c].finalMean[a]) << " +- " << formatNumber(result.cells[c].finalSe[a])
                << '\n';
    }
  }
  if (!csv.empty()) {
    std::ofstream out(csv, std::ios::binary);
    writeSweepCsv(out, result);
  }
  return 0;
}

int cmdVerify(const std::vector<std::string>& only, const std::string& csv) {
  const auto results = runVerification(only);
  writeVerificationReport(std::cout, results);
  if (!csv.empty()) {
    std::ofstream out(csv, std::ios::binary);
    writeVerificationCsv(out, results);
  }
  for (const auto& r : results) {
    if (!r.passed()) {
      return kExitFailure;
    }
  }
  return 0;
}

int cmdCurves(const std::vector<fs::path>& inputs, std::size_t bin, const std::string& outDir) {
  for (const auto& path : inputs) {
    const RunMatrix perRun = readPerRunCsv(path);
    const auto binned = binCurve(perRun, bin);
    if (outDir.empty()) {
      writeBinnedCsv(std::cout, binned, bin);
    } else {
      fs::create_directories(outDir);
      const fs::path target = fs::path(outDir) / (seriesLabel(path) + ".binned.csv");
      std::ofstream out(target, std::ios::binary);
      writeBinnedCsv(out, binned, bin);
      std::cout << "wrote " << target.string() << '\n';
    }
  }
  return 0;
}

int cmdPlot(const std::vector<fs::path>& inputs, const std::string& output, std::size_t bin,
            const std::string& title) {
  std::vector<PlotSeries> series;
  for (const auto& path : inputs) {
    PlotSeries s{seriesLabel(path), {}, {}};
    if (firstLine(path) == "episode,run,total_reward") {
      const auto binned = binCurve(readPerRunCsv(path), bin);
      for (std::size_t b = 0; b < binned.size(); ++b) {
        s.x.push_back(static_cast<double>(b * bin));
        s.y.push_back(binned[b]);
      }
    } else {
      const BinnedSeries b = readBinnedCsv(path);
      s.x = b.binStart;
      s.y = b.mean;
    }
    series.push_back(std::move(s));
  }
  PlotAxes axes;
  axes.title = title;
  const std::string svg = plotSvg(series, axes);
  std::ofstream out(output, std::ios::binary);
  out << svg;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planning with expectation models: experiments, oracle checks and plots"};
  app.require_subcommand(1);
  std::size_t workers = 0;
  app.add_option("-j,--workers", workers, std::string("Worker threads (default: $") + kWorkersEnvVar +
                                              " or hardware concurrency)");

  auto* run = app.add_subcommand("run", "Run a configured experiment");
  fs::path runConfig;
  std::vector<std::string> runSet;
  std::string runOutput;
  run->add_option("config", runConfig, "Config file")->required()->check(CLI::ExistingFile);
  run->add_option("--set", runSet, "Override key=value (repeatable)");
  run->add_option("-o,--output", runOutput, "Output directory (overrides experiment.output)");

  auto* sw = app.add_subcommand("sweep", "Parameter study over a grid");
  fs::path sweepConfig;
  std::vector<std::string> grid;
  std::size_t sweepEpisodes = 1000, sweepRuns = 30;
  std::string sweepCsv;
  sw->add_option("config", sweepConfig, "Template config file")->required()->check(CLI::ExistingFile);
  sw->add_option("--grid", grid, "Axis key=v1,v2,... (repeatable)")->required();
  sw->add_option("--episodes", sweepEpisodes, "Episodes per cell")->capture_default_str();
  sw->add_option("--runs", sweepRuns, "Runs per cell")->capture_default_str();
  sw->add_option("--csv", sweepCsv, "Write the table as CSV");

  auto* verify = app.add_subcommand("verify", "Run the oracle checks");
  std::vector<std::string> only;
  std::string verifyCsv;
  verify->add_option("--only", only, "Run only these checks")->check(CLI::IsMember(verificationChecks()));
  verify->add_option("--csv", verifyCsv, "Write the report as CSV");

  auto* curves = app.add_subcommand("curves", "Bin per-run CSVs");
  std::vector<fs::path> curveInputs;
  std::size_t curveBin = 0;
  std::string curveOut;
  curves->add_option("csv", curveInputs, "Per-run CSV files")->required()->check(CLI::ExistingFile);
  curves->add_option("--bin", curveBin, "Bin size in episodes")->required();
  curves->add_option("-o,--output", curveOut, "Output directory (default: stdout)");

  auto* plot = app.add_subcommand("plot", "Plot binned or per-run CSVs as SVG");
  std::vector<fs::path> plotInputs;
  std::string plotOut, plotTitle;
  std::size_t plotBin = 1;
  plot->add_option("csv", plotInputs, "Binned or per-run CSV files")->required()->check(CLI::ExistingFile);
  plot->add_option("-o,--output", plotOut, "SVG file")->required();
  plot->add_option("--bin", plotBin, "Bin size for per-run inputs")->capture_default_str();
  plot->add_option("--title", plotTitle, "Plot title");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (*run) return cmdRun(runConfig, runSet, runOutput, workers);
    if (*sw) return cmdSweep(sweepConfig, grid, sweepEpisodes, sweepRuns, sweepCsv, workers);
    if (*verify) return cmdVerify(only, verifyCsv);
    if (*curves) return cmdCurves(curveInputs, curveBin, curveOut);
    if (*plot) return cmdPlot(plotInputs, plotOut, plotBin, plotTitle);
  } catch (const ConfigError& e) {
    std::cerr << "emplan: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "emplan: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DivergenceError& e) {
    std::cerr << "emplan: " << e.what() << '\n';
    return kExitDiverged;
  } catch (const std::exception& e) {
    std::cerr << "emplan: " << e.what() << '\n';
    return kExitFailure;
  }
  return 0;
}
