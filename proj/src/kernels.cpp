#include "genbounds/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace genbounds::kernels {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace {

double nearest_sq(std::span<const double> p, const PointSet& b) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& q : b) best = std::min(best, distance_sq(p, q));
  return best;
}

int resolve(int threads) { return threads > 0 ? threads : max_threads(); }

unsigned key_bits(std::size_t d) { return static_cast<unsigned>(64 / d); }

// Cell keys are packed into 64 bits; a cloud needing more than 2^(64/d)
// cells per axis at this delta is rejected before any key is built.
void validate_grid(const PointSet& points, std::span<const double> anchor, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("occupied_cells: delta must be positive");
  if (anchor.empty() || anchor.size() > 64) throw std::invalid_argument("occupied_cells: bad dimension");
  const unsigned bits = key_bits(anchor.size());
  const double limit = bits >= 63 ? 9.0e18 : std::ldexp(1.0, static_cast<int>(bits));
  for (const auto& p : points) {
    if (p.size() != anchor.size()) throw std::invalid_argument("occupied_cells: dimension mismatch");
    for (std::size_t j = 0; j < p.size(); ++j) {
      const double c = std::floor((p[j] - anchor[j]) / delta);
      if (!(c >= 0.0 && c < limit)) throw std::invalid_argument("occupied_cells: grid too fine for key packing");
    }
  }
}

std::vector<std::uint64_t> cell_keys(const PointSet& points, std::span<const double> anchor, double delta,
                                     std::size_t begin, std::size_t end) {
  const std::size_t d = anchor.size();
  const unsigned bits = key_bits(d);
  std::vector<std::uint64_t> keys;
  keys.reserve(end - begin);
  for (std::size_t i = begin; i < end; ++i) {
    std::uint64_t key = 0;
    for (std::size_t j = 0; j < d; ++j) {
      const double c = std::floor((points[i][j] - anchor[j]) / delta);
      key = bits >= 64 ? static_cast<std::uint64_t>(c) : (key << bits) | static_cast<std::uint64_t>(c);
    }
    keys.push_back(key);
  }
  return keys;
}

}  // namespace

namespace serial {

double directed_hausdorff(const PointSet& a, const PointSet& b) {
  double worst = 0.0;
  for (const auto& p : a) worst = std::max(worst, nearest_sq(p, b));
  return std::sqrt(worst);
}

std::size_t occupied_cells(const PointSet& points, std::span<const double> anchor, double delta) {
  validate_grid(points, anchor, delta);
  auto keys = cell_keys(points, anchor, delta, 0, points.size());
  std::sort(keys.begin(), keys.end());
  return static_cast<std::size_t>(std::unique(keys.begin(), keys.end()) - keys.begin());
}

std::vector<double> tiled_map(std::size_t tiles, const std::function<double(std::size_t)>& tile_value) {
  std::vector<double> values(tiles);
  for (std::size_t t = 0; t < tiles; ++t) values[t] = tile_value(t);
  return values;
}

double tiled_sum(std::size_t tiles, const std::function<double(std::size_t)>& tile_value) {
  double total = 0.0;
  for (std::size_t t = 0; t < tiles; ++t) total += tile_value(t);
  return total;
}

}  // namespace serial

namespace parallel {

double directed_hausdorff(const PointSet& a, const PointSet& b, int threads) {
  double worst = 0.0;
  const auto n = static_cast<std::ptrdiff_t>(a.size());
#pragma omp parallel for reduction(max : worst) num_threads(resolve(threads)) schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) worst = std::max(worst, nearest_sq(a[static_cast<std::size_t>(i)], b));
  return std::sqrt(worst);
}

std::size_t occupied_cells(const PointSet& points, std::span<const double> anchor, double delta, int threads) {
  validate_grid(points, anchor, delta);
  const int nt = resolve(threads);
  std::vector<std::vector<std::uint64_t>> parts(static_cast<std::size_t>(nt));
  const std::size_t n = points.size();
#pragma omp parallel for num_threads(nt) schedule(static)
  for (int t = 0; t < nt; ++t) {
    const std::size_t begin = n * static_cast<std::size_t>(t) / static_cast<std::size_t>(nt);
    const std::size_t end = n * static_cast<std::size_t>(t + 1) / static_cast<std::size_t>(nt);
    auto keys = cell_keys(points, anchor, delta, begin, end);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    parts[static_cast<std::size_t>(t)] = std::move(keys);
  }
  std::vector<std::uint64_t> merged;
  for (auto& p : parts) {
    const auto mid = static_cast<std::ptrdiff_t>(merged.size());
    merged.insert(merged.end(), p.begin(), p.end());
    std::inplace_merge(merged.begin(), merged.begin() + mid, merged.end());
  }
  return static_cast<std::size_t>(std::unique(merged.begin(), merged.end()) - merged.begin());
}

std::vector<double> tiled_map(std::size_t tiles, const std::function<double(std::size_t)>& tile_value, int threads) {
  std::vector<double> values(tiles, 0.0);
  const auto n = static_cast<std::ptrdiff_t>(tiles);
#pragma omp parallel for num_threads(resolve(threads)) schedule(dynamic)
  for (std::ptrdiff_t t = 0; t < n; ++t) values[static_cast<std::size_t>(t)] = tile_value(static_cast<std::size_t>(t));
  return values;
}

double tiled_sum(std::size_t tiles, const std::function<double(std::size_t)>& tile_value, int threads) {
  double total = 0.0;
  for (double v : tiled_map(tiles, tile_value, threads)) total += v;
  return total;
}

}  // namespace parallel

}  // namespace genbounds::kernels
