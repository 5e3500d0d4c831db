#include "genbounds/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "genbounds/kernels.hpp"

namespace genbounds {

std::size_t step_count(const SdeConfig& config) {
  const double ratio = config.horizon_t / config.step_h;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) <= 1e-9 * std::max(1.0, ratio)) return static_cast<std::size_t>(rounded);
  return static_cast<std::size_t>(std::ceil(ratio));
}

void validate_sde_config(const SdeConfig& config, double smoothness) {
  if (!(config.step_h > 0.0) || !std::isfinite(config.step_h))
    throw std::invalid_argument("SdeConfig: step must be positive");
  if (!(config.horizon_t > 0.0) || !std::isfinite(config.horizon_t))
    throw std::invalid_argument("SdeConfig: horizon must be positive");
  StableSpec(config.alpha, config.noise_scale, 1);
  if (config.init.kind == InitSpec::Kind::kGaussian && !(config.init.radius >= 0.0))
    throw std::invalid_argument("SdeConfig: gaussian init radius must be >= 0");
  if (!config.allow_large_step) {
    const double limit = 0.01 * (smoothness > 0.0 ? std::min(1.0, 1.0 / smoothness) : 1.0);
    if (config.step_h > limit * (1.0 + 1e-12))
      throw std::invalid_argument("SdeConfig: step " + std::to_string(config.step_h) + " exceeds 0.01 min(1, 1/M) = " +
                                  std::to_string(limit));
  }
}

Vec initial_point(const SdeConfig& config, std::size_t dim) {
  Vec z0(dim, 0.0);
  if (config.init.kind == InitSpec::Kind::kGaussian) {
    RandomStream rng = RandomStream(config.noise_seed).split(0);
    for (double& z : z0) z = config.init.radius * rng.normal();
  }
  return z0;
}

PointSet draw_increments(const SdeConfig& config, std::size_t dim) {
  RandomStream rng = RandomStream(config.noise_seed).split(1);
  return levy_path_increments(StableSpec(config.alpha, config.noise_scale, dim), config.step_h, step_count(config),
                              rng);
}

CoupledTrajectory integrate_coupled(const LearningProblem& problem, const Dataset& dataset, const SdeConfig& config) {
  validate_sde_config(config, problem.constants().smoothness);
  const std::size_t d = problem.dim();
  CoupledTrajectory traj = integrate_coupled(problem, dataset, config.step_h, initial_point(config, d),
                                             draw_increments(config, d));
  traj.meta.noise_seed = config.noise_seed;
  traj.meta.horizon_adjusted = std::abs(traj.horizon() - config.horizon_t) > 1e-12 * config.horizon_t;
  return traj;
}

CoupledTrajectory integrate_coupled(const LearningProblem& problem, const Dataset& dataset, double step_h,
                                    const Vec& z0, PointSet increments) {
  const std::size_t d = problem.dim();
  if (z0.size() != d) throw std::invalid_argument("integrate_coupled: Z0 dimension mismatch");
  if (dataset.counts().size() != problem.atom_count())
    throw std::invalid_argument("integrate_coupled: dataset does not belong to the problem");
  const std::size_t steps = increments.size();

  CoupledTrajectory traj;
  traj.step_h = step_h;
  traj.meta.dataset_seed = dataset.seed();
  traj.times.resize(steps + 1);
  traj.w.assign(steps + 1, Vec(d));
  traj.y.assign(steps + 1, Vec(d));
  traj.w[0] = z0;
  traj.y[0] = z0;
  traj.times[0] = 0.0;

  Vec grad_emp(d);
  Vec grad_pop(d);
  for (std::size_t k = 0; k < steps; ++k) {
    const Vec& dl = increments[k];
    if (dl.size() != d) throw std::invalid_argument("integrate_coupled: increment dimension mismatch");
    problem.weighted_gradient(traj.w[k], dataset.weights(), grad_emp);
    problem.weighted_gradient(traj.y[k], problem.probs(), grad_pop);
    Vec& w_next = traj.w[k + 1];
    Vec& y_next = traj.y[k + 1];
    for (std::size_t j = 0; j < d; ++j) {
      w_next[j] = traj.w[k][j] - step_h * grad_emp[j] + dl[j];
      y_next[j] = traj.y[k][j] - step_h * grad_pop[j] + dl[j];
    }
    if (!all_finite(w_next) || !all_finite(y_next))
      throw NonFiniteState(k + 1, "integrate_coupled: non-finite state at step " + std::to_string(k + 1));
    traj.times[k + 1] = static_cast<double>(k + 1) * step_h;
  }
  traj.increments = std::move(increments);
  return traj;
}

PointSet coarsen_increments(const PointSet& fine) {
  if (fine.size() % 2 != 0) throw std::invalid_argument("coarsen_increments: need an even number of increments");
  PointSet out;
  out.reserve(fine.size() / 2);
  for (std::size_t k = 0; k + 1 < fine.size(); k += 2) {
    Vec v(fine[k].size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = fine[k][j] + fine[k + 1][j];
    out.push_back(std::move(v));
  }
  return out;
}

double geometric_gap(const CoupledTrajectory& traj) {
  double worst = 0.0;
  for (std::size_t k = 0; k < traj.w.size(); ++k) worst = std::max(worst, distance_sq(traj.w[k], traj.y[k]));
  return std::sqrt(worst);
}

double integral_gap(const CoupledTrajectory& traj) {
  const std::size_t steps = traj.steps();
  if (steps == 0) return 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < steps; ++k) total += traj.step_h * distance_sq(traj.w[k], traj.y[k]);
  return total / (traj.step_h * static_cast<double>(steps));
}

double hausdorff_distance(const PointSet& a, const PointSet& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("hausdorff_distance: point sets must be non-empty");
  return std::max(kernels::parallel::directed_hausdorff(a, b), kernels::parallel::directed_hausdorff(b, a));
}

double worst_case_gap(const CoupledTrajectory& traj, const LearningProblem& problem, const Dataset& dataset) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& w : traj.w)
    worst = std::max(worst, problem.weighted_risk(w, problem.probs()) - problem.weighted_risk(w, dataset.weights()));
  return worst;
}

namespace {

double gradient_deviation(const Vec& w, const LearningProblem& problem, const Dataset& dataset, Vec& ge, Vec& gp) {
  problem.weighted_gradient(w, dataset.weights(), ge);
  problem.weighted_gradient(w, problem.probs(), gp);
  return distance(ge, gp);
}

}  // namespace

double g_nabla(const CoupledTrajectory& traj, const LearningProblem& problem, const Dataset& dataset) {
  Vec ge(problem.dim()), gp(problem.dim());
  double worst = 0.0;
  for (const auto& y : traj.y) worst = std::max(worst, gradient_deviation(y, problem, dataset, ge, gp));
  return worst;
}

double g_nabla_both(const CoupledTrajectory& traj, const LearningProblem& problem, const Dataset& dataset) {
  Vec ge(problem.dim()), gp(problem.dim());
  double worst = g_nabla(traj, problem, dataset);
  for (const auto& w : traj.w) worst = std::max(worst, gradient_deviation(w, problem, dataset, ge, gp));
  return worst;
}

double median_step_displacement(const CoupledTrajectory& traj) {
  if (traj.w.size() < 2) throw std::invalid_argument("median_step_displacement: need at least one step");
  std::vector<double> steps(traj.w.size() - 1);
  for (std::size_t k = 0; k + 1 < traj.w.size(); ++k) steps[k] = distance(traj.w[k + 1], traj.w[k]);
  const auto mid = steps.begin() + static_cast<std::ptrdiff_t>(steps.size() / 2);
  std::nth_element(steps.begin(), mid, steps.end());
  if (steps.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(steps.begin(), mid);
  return 0.5 * (lower + upper);
}

}  // namespace genbounds
