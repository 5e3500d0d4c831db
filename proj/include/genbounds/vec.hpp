#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace genbounds {

using Vec = std::vector<double>;
using PointSet = std::vector<Vec>;

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline double distance_sq(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return s;
}

inline double distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(distance_sq(a, b));
}

inline Vec subtract(std::span<const double> a, std::span<const double> b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

inline bool all_finite(std::span<const double> a) {
  for (double x : a)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace genbounds
