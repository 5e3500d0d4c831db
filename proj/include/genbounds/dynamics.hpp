#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "genbounds/problems.hpp"
#include "genbounds/stable_noise.hpp"
#include "genbounds/vec.hpp"

namespace genbounds {

struct InitSpec {
  enum class Kind { kZero, kGaussian };
  Kind kind = Kind::kZero;
  /// Per-coordinate standard deviation for kGaussian.
  double radius = 0.0;
};

struct SdeConfig {
  double step_h = 1e-3;
  double horizon_t = 1.0;
  double alpha = 1.5;
  double noise_scale = 1.0;
  InitSpec init;
  std::uint64_t noise_seed = 0;
  /// Skip the h <= 0.01 min(1, 1/M) sanity limit.
  bool allow_large_step = false;
};

/// Integer step count ceil(T / h) (tolerant to rounding noise in T / h).
std::size_t step_count(const SdeConfig& config);

/// Throws std::invalid_argument when config is inconsistent with `smoothness`.
void validate_sde_config(const SdeConfig& config, double smoothness);

struct TrajectoryMeta {
  std::uint64_t dataset_seed = 0;
  std::uint64_t noise_seed = 0;
  /// Horizon was rounded up to a whole number of steps.
  bool horizon_adjusted = false;
};

/// Coupled empirical (W) / expected (Y) paths on the grid t_k = k h.
struct CoupledTrajectory {
  double step_h = 0.0;
  std::vector<double> times;
  PointSet w;
  PointSet y;
  /// Shared Levy increments, one per step.
  PointSet increments;
  TrajectoryMeta meta;

  std::size_t steps() const noexcept { return increments.size(); }
  double horizon() const noexcept { return times.empty() ? 0.0 : times.back(); }
  std::size_t dim() const noexcept { return w.empty() ? 0 : w.front().size(); }
};

class NonFiniteState : public std::runtime_error {
 public:
  NonFiniteState(std::size_t step, const std::string& what) : std::runtime_error(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// Initial point Z0 and the noise increments drawn from config.noise_seed.
Vec initial_point(const SdeConfig& config, std::size_t dim);
PointSet draw_increments(const SdeConfig& config, std::size_t dim);

/// Euler-Maruyama for both SDEs with shared noise and shared Z0.
CoupledTrajectory integrate_coupled(const LearningProblem& problem, const Dataset& dataset, const SdeConfig& config);

/// Same recursion with caller-supplied start point and increments.
CoupledTrajectory integrate_coupled(const LearningProblem& problem, const Dataset& dataset, double step_h,
                                    const Vec& z0, PointSet increments);

/// Sums consecutive pairs: increments of step 2h from increments of step h.
PointSet coarsen_increments(const PointSet& fine);

/// max_k |W_k - Y_k|
double geometric_gap(const CoupledTrajectory& traj);
/// (1/T) sum_k h |W_k - Y_k|^2, left endpoints.
double integral_gap(const CoupledTrajectory& traj);
double hausdorff_distance(const PointSet& a, const PointSet& b);
/// max_k R(W_k) - R_S(W_k)
double worst_case_gap(const CoupledTrajectory& traj, const LearningProblem& problem, const Dataset& dataset);
/// max_k |grad R_S(Y_k) - grad R(Y_k)|
double g_nabla(const CoupledTrajectory& traj, const LearningProblem& problem, const Dataset& dataset);
/// Same maximum taken over the grid points of both paths.
double g_nabla_both(const CoupledTrajectory& traj, const LearningProblem& problem, const Dataset& dataset);

/// Median step displacement median_k |W_{k+1} - W_k|.
double median_step_displacement(const CoupledTrajectory& traj);

}  // namespace genbounds
