#pragma once

#include <string>
#include <vector>

namespace emplan::harness {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotAxes {
  std::string title;
  std::string xLabel = "episode";
  std::string yLabel = "total reward per episode";
};

/// Line plot with gridlines and a legend. Output depends only on the inputs:
/// fixed canvas, fixed palette order, fixed number formatting.
std::string plotSvg(const std::vector<PlotSeries>& series, const PlotAxes& axes);

}  // namespace emplan::harness
