#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace sapdrl::harness {

struct Curve {
  std::string label;
  std::vector<double> x, y;
  std::vector<double> band;  // per-point half-width (std); empty = no band
};

/// Standalone SVG line chart: axes with ticks, one polyline per curve,
/// shaded +-band regions, and a legend. Rejects empty input.
void emitPlot(const std::vector<Curve>& curves, const std::string& title,
              const std::string& xLabel, const std::string& yLabel,
              const std::filesystem::path& outPath);

}  // namespace sapdrl::harness
