#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "genbounds/bounds.hpp"
#include "genbounds/config.hpp"
#include "genbounds/dynamics.hpp"
#include "genbounds/problems.hpp"
#include "genbounds/random.hpp"
#include "genbounds/stats.hpp"

namespace genbounds {

/// Per-run quantities recorded next to the bound reports.
struct RunDiagnostics {
  double geometric_gap = 0.0;
  double worst_case_gap = 0.0;
  double integral_gap = 0.0;
  double g_nabla = 0.0;
  /// Box dimension of the Y path; NaN when the path is too short to resolve.
  double gamma_hat = 0.0;
  /// gamma fed to the bounds.
  double gamma = 0.0;
  double smoothing = 0.0;
};

struct RunEvaluation {
  RunDiagnostics diag;
  /// One report per enabled theorem, except theorem 6 which has one per draw.
  std::vector<BoundReport> reports;
  /// Theorems that could not be evaluated on this run, with the reason
  /// (n below the covering threshold, no dissipativity certificate).
  std::vector<std::pair<std::string, std::string>> skipped;
};

/// Evaluates every theorem in `bounds.theorems` on one coupled run.
/// `draws` feeds the posterior samples of theorems 5 and 6.
RunEvaluation evaluate_run(const LearningProblem& problem, const std::optional<DissipativityCertificate>& certificate,
                           const BoundsConfig& bounds, const Dataset& dataset, const CoupledTrajectory& traj,
                           double alpha, RandomStream& draws);

/// Probability level 1 - k zeta claimed by `theorem`.
double target_rate(const std::string& theorem, double zeta);

struct ReplicateResult {
  std::size_t index = 0;
  bool ok = false;
  std::string error;
  RunEvaluation eval;
};

/// Fixed problem plus the seed tree of one configuration:
///   master.split(0)        problem
///   master.split(2)        dissipativity probes
///   master.split(1).split(r)  replicate r: split(0) dataset, split(1) noise, split(2) posterior draws
/// Replicate streams do not depend on n or alpha, so sweeps use common random numbers.
class Experiment {
 public:
  explicit Experiment(ExperimentConfig cfg);

  const ExperimentConfig& config() const noexcept { return cfg_; }
  const LearningProblem& problem() const noexcept { return problem_; }
  const std::optional<DissipativityCertificate>& certificate() const noexcept { return certificate_; }

  RandomStream replicate_stream(std::size_t r) const;
  Dataset dataset(std::size_t n, std::size_t r) const;
  SdeConfig dynamics(double alpha, std::size_t r) const;

  /// Never throws; failures are returned with ok = false.
  ReplicateResult run_replicate(std::size_t n, double alpha, std::size_t r) const;
  /// All replicates 0..R-1, ordered by index. workers == 1 is the serial reference.
  std::vector<ReplicateResult> run_replicates(std::size_t n, double alpha, int workers) const;

 private:
  ExperimentConfig cfg_;
  LearningProblem problem_;
  std::optional<DissipativityCertificate> certificate_;
};

struct TheoremCoverage {
  std::string theorem;
  double target = 0.0;
  std::size_t trials = 0;
  std::size_t holds = 0;
  std::size_t skipped = 0;
  double hold_rate = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
  /// One-sided exact binomial p-value of "rate >= target".
  double p_value = 1.0;
  /// p_value > 0.01
  bool passes = true;
  double mean_lhs = 0.0;
  double mean_rhs = 0.0;
  /// Largest lhs / rhs over trials with rhs > 0.
  double max_ratio = 0.0;
  Terms mean_terms;
};

struct ReplicateError {
  std::size_t index = 0;
  std::string message;
};

struct CoverageReport {
  std::size_t n = 0;
  double alpha = 0.0;
  double zeta = 0.0;
  std::size_t replicates = 0;
  std::size_t completed = 0;
  std::size_t failed = 0;
  std::vector<ReplicateError> errors;
  /// e.g. "no replicates"
  std::vector<std::string> flags;
  double median_geometric_gap = 0.0;
  double median_gamma_hat = 0.0;
  std::vector<TheoremCoverage> theorems;
};

/// Aggregates replicate results (in index order) into one report.
CoverageReport aggregate_coverage(const std::vector<ReplicateResult>& results, std::size_t n, double alpha,
                                  const BoundsConfig& bounds);

struct CoverageRun {
  /// One cell per (n, alpha) pair, n-major.
  std::vector<CoverageReport> cells;
  std::uint64_t master_seed = 0;
  std::size_t requested = 0;
  std::size_t failed = 0;
};

CoverageRun run_coverage(const ExperimentConfig& cfg);

enum class SweepParam { kN, kAlpha, kHorizon, kSmoothing };
SweepParam sweep_param_from_string(const std::string& s);
std::string to_string(SweepParam p);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

struct SweepResult {
  SweepParam param = SweepParam::kN;
  Table table;
  /// log median geometric_gap against log n (n sweeps only).
  std::optional<stats::LinearFit> slope;
  std::size_t requested = 0;
  std::size_t failed = 0;
  std::vector<ReplicateError> errors;
};

/// Needs at least three values. Other axes come from the first n / alpha of the config.
SweepResult run_sweep(const ExperimentConfig& cfg, SweepParam param, const std::vector<double>& values);

/// One row per lemma-validation comparison (KL rows carry beta = 1).
struct LemmaCase {
  std::size_t case_id = 0;
  std::string divergence;  // "kl" or "renyi"
  double smoothing = 0.0;
  double beta = 1.0;
  double oracle_value = 0.0;
  double upper_bound = 0.0;
  double margin() const noexcept { return upper_bound - oracle_value; }
  /// Oracle within the bound up to quadrature rounding (1e-12 relative to 1 + bound).
  bool dominated() const noexcept { return margin() >= -1e-12 * (1.0 + upper_bound); }
};

/// Random d = 1 coupled runs with at most 100 grid points; KL and Renyi(beta)
/// oracle values against their trajectory upper bounds.
std::vector<LemmaCase> validate_lemmas(std::size_t cases, std::uint64_t seed, double beta = 2.0, int threads = 0);

}  // namespace genbounds
