#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "genbounds/random.hpp"
#include "genbounds/vec.hpp"

namespace genbounds {

/// Symmetric alpha-stable law on R^dim with characteristic function
/// exp(-scale^alpha |xi|^alpha). alpha = 2 is N(0, 2 scale^2 I).
class StableSpec {
 public:
  StableSpec(double alpha, double scale, std::size_t dim);

  double alpha() const noexcept { return alpha_; }
  double scale() const noexcept { return scale_; }
  std::size_t dim() const noexcept { return dim_; }
  bool gaussian() const noexcept { return alpha_ == 2.0; }

 private:
  double alpha_;
  double scale_;
  std::size_t dim_;
};

/// One scalar draw (Chambers-Mallows-Stuck, beta = 0).
double sample_stable_scalar(const StableSpec& spec, RandomStream& rng);

/// Positive (a)-stable draw with Laplace transform exp(-u^a), 0 < a < 1
/// (Kanter's representation).
double sample_positive_stable(double a, RandomStream& rng);

/// Rotationally invariant draw via Gaussian subordination.
Vec sample_isotropic_stable_vector(const StableSpec& spec, RandomStream& rng);

/// `count` i.i.d. increments h^{1/alpha} * X, X a unit-time isotropic draw.
std::vector<Vec> levy_path_increments(const StableSpec& spec, double step_h, std::size_t count,
                                      RandomStream& rng);

struct TailIndexEstimate {
  /// Bias-corrected estimate (intercept of the Hill curve over j <= k).
  double value = 0.0;
  /// Plain Hill estimate at k.
  double hill = 0.0;
  std::size_t k = 0;
  /// Estimate reached the stable family's upper limit 2 (no power tail seen).
  bool at_boundary = false;
};

/// Hill-type tail index of |samples| from the k = ceil(0.01 n) upper order
/// statistics. The plain Hill value is reported alongside.
/// Throws std::invalid_argument for fewer than 1000 samples.
TailIndexEstimate estimate_tail_index(std::span<const double> samples);

}  // namespace genbounds
