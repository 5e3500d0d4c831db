#pragma once

#include <string>
#include <vector>

namespace genbounds {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::vector<Series> series;
};

/// Line plot, one <polyline> per series with at least one drawable point.
/// Points that are non-finite (or non-positive on a log axis) are skipped.
std::string render_svg(const PlotSpec& plot);

}  // namespace genbounds
