#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "genbounds/random.hpp"
#include "genbounds/vec.hpp"

namespace genbounds {

enum class LossFamily {
  /// l(w, z) = s(-y <w, x>) + (l2 / 2) |w|^2, s the logistic sigmoid.
  kSigmoid,
  /// l(w, z) = 1/2; zero gradient field.
  kConstant,
};

std::string to_string(LossFamily f);
LossFamily loss_family_from_string(const std::string& s);

struct ProblemConfig {
  std::size_t dim = 2;
  std::size_t atom_count = 16;
  double data_bound = 1.0;
  LossFamily loss = LossFamily::kSigmoid;
  /// Probability of flipping the planted label.
  double label_noise = 0.1;
  /// Equal atom probabilities when true, otherwise normalized Exp(1) weights.
  bool uniform_weights = true;
  /// Atoms come in pairs (x, y), (-x, y).
  bool symmetric = false;
  double l2 = 0.0;
};

struct Atom {
  Vec x;
  double y = 1.0;
};

/// Constants consumed by the bounds. `lipschitz` bounds the data-dependent
/// gradient part (the ridge term cancels in every generalization quantity).
struct ProblemConstants {
  double lipschitz = 0.0;       // L
  double smoothness = 0.0;      // M
  double sigma = 0.0;           // loss sub-Gaussian constant
  double coord_sigma = 0.0;     // Sigma
};

/// Finite-support learning problem. Immutable after construction.
class LearningProblem {
 public:
  LearningProblem(std::vector<Atom> atoms, std::vector<double> probs, ProblemConfig config);

  std::size_t dim() const noexcept { return config_.dim; }
  std::size_t atom_count() const noexcept { return atoms_.size(); }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  const std::vector<double>& probs() const noexcept { return probs_; }
  const ProblemConfig& config() const noexcept { return config_; }
  const ProblemConstants& constants() const noexcept { return constants_; }

  double loss(std::span<const double> w, std::size_t atom) const;
  /// Adds weight * grad l(w, atom) into `out`.
  void add_loss_gradient(std::span<const double> w, std::size_t atom, double weight, std::span<double> out) const;
  Vec loss_gradient(std::span<const double> w, std::size_t atom) const;

  /// sum_a weights[a] l(w, a)
  double weighted_risk(std::span<const double> w, std::span<const double> weights) const;
  /// sum_a weights[a] grad l(w, a), written into `out`.
  void weighted_gradient(std::span<const double> w, std::span<const double> weights, std::span<double> out) const;

 private:
  std::vector<Atom> atoms_;
  std::vector<double> probs_;
  ProblemConfig config_;
  ProblemConstants constants_;
};

/// n i.i.d. atom draws, stored as atom indices plus per-atom counts.
class Dataset {
 public:
  Dataset(std::vector<std::size_t> entries, std::size_t atom_count, std::uint64_t seed);

  std::size_t size() const noexcept { return entries_.size(); }
  const std::vector<std::size_t>& entries() const noexcept { return entries_; }
  const std::vector<std::size_t>& counts() const noexcept { return counts_; }
  /// counts / n, the empirical measure on atoms.
  const std::vector<double>& weights() const noexcept { return weights_; }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::vector<std::size_t> entries_;
  std::vector<std::size_t> counts_;
  std::vector<double> weights_;
  std::uint64_t seed_;
};

LearningProblem make_problem(const ProblemConfig& config, RandomStream& rng);

Dataset sample_dataset(const LearningProblem& problem, std::size_t n, RandomStream& rng);

/// Every atom `copies` times; its empirical measure equals mu_z exactly when
/// the problem has uniform weights.
Dataset full_support_dataset(const LearningProblem& problem, std::size_t copies);

/// Population risk R(w), or the empirical risk when `dataset` is given.
double risk(std::span<const double> w, const LearningProblem& problem, const Dataset* dataset = nullptr);
Vec risk_gradient(std::span<const double> w, const LearningProblem& problem, const Dataset* dataset = nullptr);

/// sup |s'| and sup |s''| of the logistic sigmoid.
inline constexpr double kSigmoidSlopeMax = 0.25;
double sigmoid_curvature_max();

struct DissipativityConfig {
  std::size_t probes = 4000;
  /// Probe points w, w' drawn uniformly from the ball of this radius.
  double probe_radius = 5.0;
  double k_max = 1.0;
};

struct DissipativityCertificate {
  double m = 0.0;
  double k = 0.0;
  std::size_t probes = 0;
  /// Largest observed <g(w') - g(w), w - w'> + m |w - w'|^2 - K (<= 0).
  double worst_residual = 0.0;
};

/// Empirical (m, K) for <grad l(w',z) - grad l(w,z), w - w'> <= K - m|w - w'|^2.
/// Returns nullopt when no m > 0 fits with K <= k_max (not dissipative at the probed scale).
std::optional<DissipativityCertificate> estimate_dissipativity(const LearningProblem& problem,
                                                                RandomStream& rng,
                                                                const DissipativityConfig& config = {});

}  // namespace genbounds
