#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "genbounds/config.hpp"
#include "genbounds/dynamics.hpp"
#include "genbounds/harness.hpp"
#include "genbounds/problems.hpp"

namespace genbounds {

/// Columns k, t, W_1..W_d, Y_1..Y_d; values printed with 17 significant digits.
void write_trajectory_csv(const CoupledTrajectory& traj, const std::string& path);
/// Restores times, W and Y exactly. Increments are not stored and come back empty.
CoupledTrajectory read_trajectory_csv(const std::string& path);

/// A persisted run directory: trajectory.csv plus run.json (config, seeds,
/// problem atoms and dataset).
struct SavedRun {
  ExperimentConfig config;
  LearningProblem problem;
  Dataset dataset;
  CoupledTrajectory trajectory;
  double alpha = 0.0;
  std::size_t replicate = 0;
  std::uint64_t draw_seed = 0;
};

/// Simulates replicate `r` of `exp` and writes it under `dir`.
SavedRun simulate_and_save(const Experiment& exp, std::size_t n, double alpha, std::size_t r, const std::string& dir);

/// Reloads a run; the noise increments are regenerated from the stored seed
/// and checked against the stored path.
SavedRun load_run(const std::string& dir);

}  // namespace genbounds
