#include "sapdrl/harness/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sapdrl/errors.hpp"
#include "sapdrl/harness/run_log.hpp"

namespace sapdrl::harness {

namespace {

constexpr double kWidth = 760.0, kHeight = 480.0;
constexpr double kLeft = 70.0, kRight = 30.0, kTop = 50.0, kBottom = 60.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

struct Range {
  double lo, hi;
  double span() const { return hi - lo; }
};

Range padded(double lo, double hi) {
  if (lo == hi) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

std::string fmt(double v) { return csvDouble(v); }

}  // namespace

void emitPlot(const std::vector<Curve>& curves, const std::string& title,
              const std::string& xLabel, const std::string& yLabel,
              const std::filesystem::path& outPath) {
  if (curves.empty()) throw ConfigError("emitPlot: no curves to draw");
  for (const auto& c : curves) {
    if (c.x.empty() || c.x.size() != c.y.size())
      throw ConfigError("emitPlot: curve '" + c.label + "' is empty or has mismatched lengths");
    if (!c.band.empty() && c.band.size() != c.x.size())
      throw ConfigError("emitPlot: curve '" + c.label + "' band length mismatch");
  }

  double xLo = curves[0].x.front(), xHi = curves[0].x.front();
  double yLo = curves[0].y.front(), yHi = curves[0].y.front();
  for (const auto& c : curves) {
    for (std::size_t i = 0; i < c.x.size(); ++i) {
      xLo = std::min(xLo, c.x[i]);
      xHi = std::max(xHi, c.x[i]);
      const double b = c.band.empty() ? 0.0 : c.band[i];
      yLo = std::min(yLo, c.y[i] - b);
      yHi = std::max(yHi, c.y[i] + b);
    }
  }
  const Range xr = padded(xLo, xHi), yr = padded(yLo, yHi);

  const double plotW = kWidth - kLeft - kRight;
  const double plotH = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xr.lo) / xr.span() * plotW; };
  auto py = [&](double y) { return kTop + plotH - (y - yr.lo) / yr.span() * plotH; };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
         "font-family=\"sans-serif\">"
      << title << "</text>\n";

  // axes
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plotH << "\" x2=\"" << kLeft + plotW
      << "\" y2=\"" << kTop + plotH << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
      << kTop + plotH << "\" stroke=\"black\"/>\n";

  for (int i = 0; i <= 5; ++i) {
    const double xv = xr.lo + xr.span() * i / 5.0;
    const double yv = yr.lo + yr.span() * i / 5.0;
    svg << "<line x1=\"" << px(xv) << "\" y1=\"" << kTop + plotH << "\" x2=\"" << px(xv)
        << "\" y2=\"" << kTop + plotH + 5 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << px(xv) << "\" y=\"" << kTop + plotH + 20
        << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">" << fmt(xv)
        << "</text>\n";
    svg << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << py(yv) << "\" x2=\"" << kLeft << "\" y2=\""
        << py(yv) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << py(yv) + 4
        << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" << fmt(yv)
        << "</text>\n";
  }
  svg << "<text x=\"" << kLeft + plotW / 2 << "\" y=\"" << kHeight - 16
      << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">" << xLabel
      << "</text>\n";
  svg << "<text x=\"18\" y=\"" << kTop + plotH / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" transform=\"rotate(-90 18 "
      << kTop + plotH / 2 << ")\">" << yLabel << "</text>\n";

  for (std::size_t ci = 0; ci < curves.size(); ++ci) {
    const auto& c = curves[ci];
    const char* color = kPalette[ci % (sizeof(kPalette) / sizeof(kPalette[0]))];

    if (!c.band.empty()) {
      svg << "<path d=\"M";
      for (std::size_t i = 0; i < c.x.size(); ++i)
        svg << ' ' << px(c.x[i]) << ' ' << py(c.y[i] + c.band[i]);
      for (std::size_t i = c.x.size(); i-- > 0;)
        svg << " L " << px(c.x[i]) << ' ' << py(c.y[i] - c.band[i]);
      svg << " Z\" fill=\"" << color << "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
    }

    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < c.x.size(); ++i) svg << px(c.x[i]) << ',' << py(c.y[i]) << ' ';
    svg << "\"/>\n";

    const double lx = kLeft + plotW - 170.0;
    const double ly = kTop + 14.0 + 18.0 * static_cast<double>(ci);
    svg << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 24 << "\" y2=\""
        << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << lx + 30 << "\" y=\"" << ly
        << "\" font-size=\"12\" font-family=\"sans-serif\">" << c.label << "</text>\n";
  }
  svg << "</svg>\n";

  std::ofstream out(outPath);
  if (!out) throw ConfigError("emitPlot: cannot write " + outPath.string());
  out << svg.str();
}

}  // namespace sapdrl::harness
