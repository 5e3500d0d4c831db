#include "genbounds/fractal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "genbounds/kernels.hpp"

namespace genbounds {

Vec min_corner(const PointSet& points) {
  if (points.empty()) throw std::invalid_argument("min_corner: empty point set");
  Vec lo = points.front();
  for (const auto& p : points)
    for (std::size_t j = 0; j < lo.size(); ++j) lo[j] = std::min(lo[j], p[j]);
  return lo;
}

double bounding_extent(const PointSet& points) {
  const Vec lo = min_corner(points);
  double extent = 0.0;
  for (const auto& p : points)
    for (std::size_t j = 0; j < lo.size(); ++j) extent = std::max(extent, p[j] - lo[j]);
  return extent;
}

std::size_t covering_number(const PointSet& points, double delta) {
  if (points.empty()) throw std::invalid_argument("covering_number: empty point set");
  if (!(delta > 0.0)) throw std::invalid_argument("covering_number: delta must be positive");
  return kernels::parallel::occupied_cells(points, min_corner(points), delta);
}

CoveringCurve covering_curve(const PointSet& points, double delta_max, double delta_min, std::size_t levels) {
  if (points.empty()) throw std::invalid_argument("covering_curve: empty point set");
  if (levels < 4) throw std::invalid_argument("covering_curve: need at least 4 levels");
  if (!(delta_min > 0.0) || !(delta_min < delta_max) || !std::isfinite(delta_max))
    throw std::invalid_argument("covering_curve: need 0 < delta_min < delta_max");

  CoveringCurve curve;
  curve.point_count = points.size();
  curve.deltas.resize(levels);
  const double ratio = std::pow(delta_min / delta_max, 1.0 / static_cast<double>(levels - 1));
  for (std::size_t i = 0; i < levels; ++i) curve.deltas[i] = delta_max * std::pow(ratio, static_cast<double>(i));
  curve.deltas.back() = delta_min;
  for (std::size_t i = 1; i < levels; ++i)
    if (!(curve.deltas[i] < curve.deltas[i - 1])) throw std::invalid_argument("covering_curve: degenerate schedule");

  const Vec anchor = min_corner(points);
  curve.counts.resize(levels);
  for (std::size_t i = 0; i < levels; ++i)
    curve.counts[i] = kernels::parallel::occupied_cells(points, anchor, curve.deltas[i]);
  // a cover by finer cells also covers at every coarser scale
  for (std::size_t i = levels - 1; i-- > 0;) curve.counts[i] = std::min(curve.counts[i], curve.counts[i + 1]);
  return curve;
}

CoveringCurve default_covering_curve(const PointSet& points, std::size_t levels) {
  double extent = bounding_extent(points);
  if (!(extent > 0.0)) extent = 1.0;
  // slightly above the extent so the coarsest grid is a single cell
  const double delta_max = extent * (1.0 + 1e-9);
  return covering_curve(points, delta_max, delta_max * std::ldexp(1.0, -static_cast<int>(levels - 1)), levels);
}

DimensionEstimate estimate_box_dimension(const CoveringCurve& curve) {
  const std::size_t levels = curve.deltas.size();
  if (levels < 4 || curve.counts.size() != levels)
    throw std::invalid_argument("estimate_box_dimension: need at least 4 levels");

  DimensionEstimate est;
  est.curve = curve;
  if (std::all_of(curve.counts.begin(), curve.counts.end(), [](std::size_t c) { return c == 1; })) {
    est.gamma_hat = 0.0;
    est.window_first = 1;
    est.window_last = levels - 1;
    est.r_squared = 1.0;
    return est;
  }

  const double saturation = 0.5 * static_cast<double>(curve.point_count);
  std::vector<std::size_t> used;
  for (std::size_t i = 1; i < levels; ++i)
    if (static_cast<double>(curve.counts[i]) <= saturation) used.push_back(i);
  // counts are monotone, so the unsaturated levels form a prefix of [1, levels)
  if (used.size() < 2) throw std::runtime_error("estimate_box_dimension: insufficient resolution");

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i : used) {
    const double x = -std::log(curve.deltas[i]);
    const double y = std::log(static_cast<double>(curve.counts[i]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double m = static_cast<double>(used.size());
  const double vxx = sxx - sx * sx / m;
  const double vxy = sxy - sx * sy / m;
  const double vyy = syy - sy * sy / m;
  est.gamma_hat = std::max(0.0, vxy / vxx);
  est.r_squared = vyy > 0.0 ? std::clamp(vxy * vxy / (vxx * vyy), 0.0, 1.0) : 1.0;
  est.window_first = used.front();
  est.window_last = used.back();
  return est;
}

}  // namespace genbounds
