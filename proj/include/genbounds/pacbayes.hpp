#pragma once

#include <cstddef>

#include "genbounds/bounds.hpp"
#include "genbounds/dynamics.hpp"
#include "genbounds/problems.hpp"
#include "genbounds/random.hpp"
#include "genbounds/vec.hpp"

namespace genbounds {

/// Equal-weight Gaussian mixture with means at the support points and
/// covariance s^2 I: the occupation measure of a grid path convolved with N(0, s^2).
class SmoothedOccupation {
 public:
  SmoothedOccupation(PointSet support, double smoothing);

  const PointSet& support() const noexcept { return support_; }
  double smoothing() const noexcept { return smoothing_; }
  std::size_t dim() const noexcept { return support_.front().size(); }

  /// log density at x (log-sum-exp over components).
  double log_density(std::span<const double> x) const;

 private:
  PointSet support_;
  double smoothing_;
};

/// Posterior on W's grid points (k < K, left endpoints) and prior on Y's.
SmoothedOccupation posterior_occupation(const CoupledTrajectory& traj, double smoothing);
SmoothedOccupation prior_occupation(const CoupledTrajectory& traj, double smoothing);

Vec sample_smoothed(const SmoothedOccupation& occ, RandomStream& rng);

/// integral_gap / (2 s^2)
double kl_upper_bound(const CoupledTrajectory& traj, double smoothing);
/// beta geometric_gap^2 / (2 s^2)
double renyi_upper_bound(const CoupledTrajectory& traj, double smoothing, double beta);

struct QuadratureOptions {
  /// Panels per unit s along each axis.
  double panels_per_s = 4.0;
  /// Box margin in units of s.
  double margin = 8.0;
  /// <= 0 uses the OpenMP default; 1 runs the serial reference.
  int threads = 0;
};

/// KL(post || prior) by tensor Gauss-Legendre quadrature; d <= 2, supports <= 200 points.
double kl_oracle(const SmoothedOccupation& post, const SmoothedOccupation& prior, const QuadratureOptions& opt = {});
/// Renyi divergence of order beta > 1.
double renyi_oracle(const SmoothedOccupation& post, const SmoothedOccupation& prior, double beta,
                    const QuadratureOptions& opt = {});

/// Theorem-5 report: lhs = lambda * mean of R(w) - R_S(w) over `mc_draws` posterior draws.
/// Terms "mc_standard_error" in the constants carry the lhs standard error.
BoundReport eval_thm5(const CoupledTrajectory& traj, const LearningProblem& problem, const Dataset& dataset,
                      const BoundInputs& in, std::size_t mc_draws, RandomStream& rng);

/// Theorem-6 report for one posterior draw.
BoundReport eval_thm6(const CoupledTrajectory& traj, const LearningProblem& problem, const Dataset& dataset,
                      const BoundInputs& in, RandomStream& rng);

}  // namespace genbounds
