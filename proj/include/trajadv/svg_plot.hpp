#pragma once

#include <string>
#include <vector>

namespace trajadv {

struct PlotSeries {
  std::string name;
  std::vector<double> y;
};

struct PlotOptions {
  std::string title;
  std::string x_label = "t [s]";
  int width = 800;
  int height = 420;
};

// Standalone SVG line chart: one polyline per series against `x`, axes with
// tick labels, and a legend. Non-finite points break the polyline. Output is
// a pure function of the inputs.
std::string render_svg(const std::vector<double>& x, const std::vector<PlotSeries>& series,
                       const PlotOptions& opts = {});

}  // namespace trajadv
