#pragma once

// Data-parallel kernels. Each has a serial reference in `serial::` and an
// OpenMP version in `parallel::`; both return bit-identical results for any
// thread count (reductions are exact or summed over fixed tiles in order).

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "genbounds/vec.hpp"

namespace genbounds::kernels {

/// One-sided Hausdorff distance sup_{a in A} min_{b in B} |a - b|.
namespace serial {
double directed_hausdorff(const PointSet& a, const PointSet& b);
/// Occupied cells of the grid of side `delta` anchored at `anchor`.
std::size_t occupied_cells(const PointSet& points, std::span<const double> anchor, double delta);
/// Sum of f over tiles [0, tiles), added in tile order.
double tiled_sum(std::size_t tiles, const std::function<double(std::size_t)>& tile_value);
/// tile_value(t) for every tile, in tile order.
std::vector<double> tiled_map(std::size_t tiles, const std::function<double(std::size_t)>& tile_value);
}  // namespace serial

namespace parallel {
/// `threads` <= 0 uses the OpenMP default.
double directed_hausdorff(const PointSet& a, const PointSet& b, int threads = 0);
std::size_t occupied_cells(const PointSet& points, std::span<const double> anchor, double delta, int threads = 0);
double tiled_sum(std::size_t tiles, const std::function<double(std::size_t)>& tile_value, int threads = 0);
/// `tile_value` must not throw.
std::vector<double> tiled_map(std::size_t tiles, const std::function<double(std::size_t)>& tile_value,
                              int threads = 0);
}  // namespace parallel

/// Number of worker threads available to OpenMP (1 when built without it).
int max_threads();

}  // namespace genbounds::kernels
