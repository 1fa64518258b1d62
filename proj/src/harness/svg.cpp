#include "emplan/harness/svg.hpp"

#include "emplan/common.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace emplan::harness {

namespace {

constexpr double kWidth = 800;
constexpr double kHeight = 500;
constexpr double kLeft = 70;
constexpr double kRight = 170;  // legend column
constexpr double kTop = 40;
constexpr double kBottom = 60;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

double niceStep(double range) {
  const double raw = range / 5.0;
  const double magnitude = std::pow(10.0, std::floor(std::log10(raw)));
  const double fraction = raw / magnitude;
  const double nice = fraction <= 1.0 ? 1.0 : fraction <= 2.0 ? 2.0 : fraction <= 5.0 ? 5.0 : 10.0;
  return nice * magnitude;
}

struct Range {
  double lo;
  double hi;
  double step;
};

Range niceRange(double lo, double hi) {
  if (hi - lo < 1e-12) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double step = niceStep(hi - lo);
  return {std::floor(lo / step) * step, std::ceil(hi / step) * step, step};
}

}  // namespace

std::string plotSvg(const std::vector<PlotSeries>& series, const PlotAxes& axes) {
  if (series.empty()) {
    throw UsageError("plot needs at least one series");
  }
  double xlo = INFINITY, xhi = -INFINITY, ylo = INFINITY, yhi = -INFINITY;
  for (const auto& s : series) {
    if (s.x.empty() || s.x.size() != s.y.size()) {
      throw UsageError("series '" + s.label + "' is empty or has mismatched x/y lengths");
    }
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xlo = std::min(xlo, s.x[i]);
      xhi = std::max(xhi, s.x[i]);
      ylo = std::min(ylo, s.y[i]);
      yhi = std::max(yhi, s.y[i]);
    }
  }
  const Range xr = niceRange(xlo, xhi);
  const Range yr = niceRange(ylo, yhi);
  const double plotW = kWidth - kLeft - kRight;
  const double plotH = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * plotW; };
  auto sy = [&](double y) { return kTop + (yr.hi - y) / (yr.hi - yr.lo) * plotH; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!axes.title.empty()) {
    out << "<text x=\"" << px(kLeft + plotW / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
        << escape(axes.title) << "</text>\n";
  }

  out << "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
  for (double y = yr.lo; y <= yr.hi + yr.step * 1e-9; y += yr.step) {
    const bool zero = std::abs(y) < yr.step * 1e-9;
    out << "<line x1=\"" << px(kLeft) << "\" y1=\"" << px(sy(y)) << "\" x2=\"" << px(kLeft + plotW) << "\" y2=\""
        << px(sy(y)) << '"' << (zero ? " stroke=\"#888888\"" : "") << "/>\n";
  }
  for (double x = xr.lo; x <= xr.hi + xr.step * 1e-9; x += xr.step) {
    out << "<line x1=\"" << px(sx(x)) << "\" y1=\"" << px(kTop) << "\" x2=\"" << px(sx(x)) << "\" y2=\""
        << px(kTop + plotH) << "\"/>\n";
  }
  out << "</g>\n<g fill=\"#333333\">\n";
  for (double y = yr.lo; y <= yr.hi + yr.step * 1e-9; y += yr.step) {
    out << "<text x=\"" << px(kLeft - 6) << "\" y=\"" << px(sy(y) + 4) << "\" text-anchor=\"end\">" << label(y)
        << "</text>\n";
  }
  for (double x = xr.lo; x <= xr.hi + xr.step * 1e-9; x += xr.step) {
    out << "<text x=\"" << px(sx(x)) << "\" y=\"" << px(kTop + plotH + 18) << "\" text-anchor=\"middle\">"
        << label(x) << "</text>\n";
  }
  out << "<text x=\"" << px(kLeft + plotW / 2) << "\" y=\"" << px(kHeight - 16) << "\" text-anchor=\"middle\">"
      << escape(axes.xLabel) << "</text>\n";
  out << "<text x=\"18\" y=\"" << px(kTop + plotH / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << px(kTop + plotH / 2) << ")\">" << escape(axes.yLabel) << "</text>\n";
  out << "</g>\n";
  out << "<rect x=\"" << px(kLeft) << "\" y=\"" << px(kTop) << "\" width=\"" << px(plotW) << "\" height=\""
      << px(plotH) << "\" fill=\"none\" stroke=\"#333333\"/>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* color = kPalette[i % std::size(kPalette)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t j = 0; j < s.x.size(); ++j) {
      out << (j ? " " : "") << px(sx(s.x[j])) << ',' << px(sy(s.y[j]));
    }
    out << "\"/>\n";
    const double ly = kTop + 10 + 20.0 * static_cast<double>(i);
    const double lx = kLeft + plotW + 15;
    out << "<line x1=\"" << px(lx) << "\" y1=\"" << px(ly) << "\" x2=\"" << px(lx + 20) << "\" y2=\"" << px(ly)
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << px(lx + 26) << "\" y=\"" << px(ly + 4) << "\">" << escape(s.label) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace emplan::harness
