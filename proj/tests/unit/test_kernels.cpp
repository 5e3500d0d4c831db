#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <set>

#include "genbounds/kernels.hpp"
#include "genbounds/random.hpp"

using namespace genbounds;

namespace {

PointSet cloud(std::size_t n, std::size_t d, std::uint64_t seed, double spread = 1.0) {
  RandomStream rng(seed);
  PointSet pts(n, Vec(d));
  for (auto& p : pts)
    for (double& x : p) x = spread * rng.normal();
  return pts;
}

double naive_directed(const PointSet& a, const PointSet& b) {
  double worst = 0.0;
  for (const auto& p : a) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : b) {
      double s = 0.0;
      for (std::size_t j = 0; j < p.size(); ++j) s += (p[j] - q[j]) * (p[j] - q[j]);
      best = std::min(best, std::sqrt(s));
    }
    worst = std::max(worst, best);
  }
  return worst;
}

std::size_t naive_cells(const PointSet& pts, const Vec& anchor, double delta) {
  std::set<std::vector<long long>> cells;
  for (const auto& p : pts) {
    std::vector<long long> key;
    for (std::size_t j = 0; j < p.size(); ++j) key.push_back(static_cast<long long>(std::floor((p[j] - anchor[j]) / delta)));
    cells.insert(key);
  }
  return cells.size();
}

}  // namespace

TEST_CASE("directed Hausdorff matches the naive double loop") {
  for (std::size_t d : {1, 2, 5}) {
    const PointSet a = cloud(120, d, 1 + d), b = cloud(90, d, 50 + d);
    const double ref = naive_directed(a, b);
    CHECK(kernels::serial::directed_hausdorff(a, b) == ref);
    for (int threads : {1, 2, 4, 7}) CHECK(kernels::parallel::directed_hausdorff(a, b, threads) == ref);
  }
}

TEST_CASE("occupied cells match a set-of-keys oracle") {
  for (std::size_t d : {1, 2, 3}) {
    const PointSet pts = cloud(3000, d, 9 + d);
    Vec anchor(d, std::numeric_limits<double>::infinity());
    for (const auto& p : pts)
      for (std::size_t j = 0; j < d; ++j) anchor[j] = std::min(anchor[j], p[j]);
    for (double delta : {0.05, 0.3, 2.0}) {
      const std::size_t ref = naive_cells(pts, anchor, delta);
      CHECK(kernels::serial::occupied_cells(pts, anchor, delta) == ref);
      for (int threads : {1, 3, 8}) CHECK(kernels::parallel::occupied_cells(pts, anchor, delta, threads) == ref);
    }
  }
}

TEST_CASE("invalid grids are rejected before any parallel work") {
  const PointSet pts = cloud(10, 2, 3);
  const Vec anchor{-10.0, -10.0};
  CHECK_THROWS_AS(kernels::serial::occupied_cells(pts, anchor, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(kernels::parallel::occupied_cells(pts, anchor, -1.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(kernels::parallel::occupied_cells(pts, Vec{0.0}, 1.0, 4), std::invalid_argument);
}

TEST_CASE("tiled reductions are bit-identical to the serial order") {
  // terms spanning many magnitudes make the sum order-sensitive
  const auto tile = [](std::size_t t) { return std::pow(-1.0, static_cast<double>(t)) * std::exp(0.37 * t) / 3.0; };
  const double ref = kernels::serial::tiled_sum(97, tile);
  const auto map_ref = kernels::serial::tiled_map(97, tile);
  for (int threads : {1, 2, 5, 16}) {
    CHECK(kernels::parallel::tiled_sum(97, tile, threads) == ref);
    CHECK(kernels::parallel::tiled_map(97, tile, threads) == map_ref);
  }
  CHECK(kernels::serial::tiled_sum(0, tile) == 0.0);
  CHECK(kernels::max_threads() >= 1);
}
