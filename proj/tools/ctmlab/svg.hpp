#pragma once

#include <string>
#include <vector>

namespace lab {

struct PlotSeries {
  std::string label;
  std::vector<double> x, y;
};

struct PlotSpec {
  std::string title, xlabel, ylabel;
  bool log_y = false;
  std::vector<PlotSeries> series;
};

// Self-contained SVG line plot. Plotting nothing is a usage error: an empty
// series list, mismatched x/y lengths, or (on a log axis) no positive points.
std::string render_plot(const PlotSpec& spec);

}  // namespace lab
