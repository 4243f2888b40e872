#pragma once

#include <string>
#include <utility>
#include <vector>

namespace wqcopt {

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (x, y)
  bool dashed = false;                            // bound overlays are dashed
};

// Dependency-free SVG polyline chart. log_y plots log10(y) and drops
// non-positive values; series with no plottable points are skipped.
void write_line_plot_svg(const std::string& path, const std::string& title,
                         const std::string& x_label, const std::string& y_label,
                         const std::vector<PlotSeries>& series, bool log_y);

}  // namespace wqcopt
