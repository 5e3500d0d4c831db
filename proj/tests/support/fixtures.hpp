#pragma once

#include "genbounds/dynamics.hpp"
#include "genbounds/problems.hpp"
#include "genbounds/random.hpp"

namespace fixtures {

inline genbounds::LearningProblem problem(std::uint64_t seed = 7, std::size_t dim = 2, std::size_t atoms = 16,
                                          double l2 = 0.0, bool uniform = true) {
  genbounds::ProblemConfig pc;
  pc.dim = dim;
  pc.atom_count = atoms;
  pc.l2 = l2;
  pc.uniform_weights = uniform;
  genbounds::RandomStream rng(seed);
  return genbounds::make_problem(pc, rng);
}

inline genbounds::SdeConfig sde(double alpha, std::uint64_t noise_seed, double horizon = 1.0, double h = 1e-3) {
  genbounds::SdeConfig c;
  c.alpha = alpha;
  c.noise_seed = noise_seed;
  c.horizon_t = horizon;
  c.step_h = h;
  return c;
}

inline genbounds::CoupledTrajectory run(const genbounds::LearningProblem& p, std::size_t n, std::uint64_t seed,
                                        double alpha = 1.5, double horizon = 1.0, double h = 1e-3) {
  genbounds::RandomStream rng(seed);
  const genbounds::Dataset data = genbounds::sample_dataset(p, n, rng);
  return genbounds::integrate_coupled(p, data, sde(alpha, seed + 1, horizon, h));
}

}  // namespace fixtures
