#pragma once

#include <cstddef>
#include <vector>

#include "genbounds/vec.hpp"

namespace genbounds {

/// N_delta on a decreasing geometric delta schedule.
struct CoveringCurve {
  std::vector<double> deltas;
  std::vector<std::size_t> counts;
  /// Number of points the curve was computed from.
  std::size_t point_count = 0;
};

struct DimensionEstimate {
  double gamma_hat = 0.0;
  /// Inclusive level range [first, last] used by the fit.
  std::size_t window_first = 0;
  std::size_t window_last = 0;
  double r_squared = 1.0;
  CoveringCurve curve;
};

/// Lower corner of the bounding box; the grid anchor for every count.
Vec min_corner(const PointSet& points);
/// Largest side of the bounding box.
double bounding_extent(const PointSet& points);

/// Occupied cells of the axis-aligned grid of side `delta` anchored at the
/// point-cloud minimum corner.
std::size_t covering_number(const PointSet& points, double delta);

/// Counts on delta_i = delta_max r^i, i < levels, r = (delta_min / delta_max)^{1/(levels-1)}.
/// Each count is the fewest grid cells over all grids of side <= delta_i in the
/// schedule, so counts never increase with delta.
CoveringCurve covering_curve(const PointSet& points, double delta_max, double delta_min, std::size_t levels);

/// Dyadic schedule from the bounding extent down by 2^{-(levels-1)}.
CoveringCurve default_covering_curve(const PointSet& points, std::size_t levels = 14);

/// Least-squares slope of log N against log(1/delta) after dropping the
/// coarsest level and every level with N > point_count / 2.
/// Throws std::runtime_error("insufficient resolution") when fewer than two levels remain.
DimensionEstimate estimate_box_dimension(const CoveringCurve& curve);

}  // namespace genbounds
