#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "genbounds/dynamics.hpp"
#include "genbounds/problems.hpp"

namespace genbounds {

enum class Variant {
  /// Lipschitz-only constants.
  kLipschitz,
  /// Per-coordinate sub-Gaussian gradients (Sigma).
  kCoordinates,
};

std::string to_string(Variant v);
Variant variant_from_string(const std::string& s);

struct BoundInputs {
  std::size_t n = 0;
  double zeta = 0.05;
  double gamma = 0.0;
  std::string gamma_source = "alpha";
  double lipschitz = 0.0;    // L
  double smoothness = 0.0;   // M
  double sigma = 0.0;
  double coord_sigma = 0.0;  // Sigma
  double horizon = 1.0;      // T
  std::size_t dim = 1;
  double smoothing = 1.0;    // s
  double lambda = 1.0;
  double beta = 2.0;
  std::optional<double> dissipativity_m;
  std::optional<double> dissipativity_k;
};

/// Range and positivity checks; throws std::invalid_argument.
void validate(const BoundInputs& in);

BoundInputs inputs_from_problem(const LearningProblem& problem, std::size_t n, double horizon);

using Terms = std::vector<std::pair<std::string, double>>;

struct BoundReport {
  std::string theorem;
  double lhs = 0.0;
  double rhs = 0.0;
  Terms terms;
  /// Named constants that scale the terms (not summed).
  Terms constants;
  bool holds = false;
  std::vector<std::string> caveats;
  BoundInputs inputs;
};

/// Builds a report whose rhs is the in-order sum of `terms`.
BoundReport make_report(std::string theorem, double lhs, Terms terms, const BoundInputs& in,
                        std::vector<std::string> caveats, Terms constants = {});

/// (e^{MT} - 1) / M, with the M = 0 limit T.
double expm1_factor(double m, double t);

Terms thm2_terms(double geom_gap, const BoundInputs& in);
BoundReport rhs_thm2(double geom_gap, const BoundInputs& in, double lhs = 0.0);

Terms lemma16_terms(const BoundInputs& in, Variant variant);
double rhs_lemma16(const BoundInputs& in, Variant variant);

double rhs_thm3(const BoundInputs& in, Variant variant);

BoundReport rhs_thm4(const BoundInputs& in, Variant variant, double lhs = 0.0);

/// Bounds the squared sup gap. Requires a dissipativity pair with m > 0.
double rhs_thm13(const BoundInputs& in);
Terms thm13_terms(const BoundInputs& in);

/// PAC-Bayes right-hand sides from the trajectory terms.
Terms thm5_terms(double integral_gap_value, const BoundInputs& in);
Terms thm6_terms(double geom_gap, const BoundInputs& in);

/// Minimizer of a / lambda + b lambda over lambda > 0.
double optimal_lambda(double a, double b);

struct GronwallReport {
  /// max over both paths' grid points of |grad R_S - grad R|
  double g = 0.0;
  double tolerance_c = 1.0;
  /// max_k |V_k| - envelope_k (<= 0 when the continuous envelope already holds)
  double max_excess = 0.0;
  /// max_k |V_k| / (envelope_k + tol_k) over k with a positive denominator
  double max_ratio = 0.0;
  /// max_k (G/M)[(e^{M t_k} - 1) - ((1 + hM)^k - 1)]
  double discretization_slack = 0.0;
  double max_tolerance = 0.0;
  bool holds = true;
  std::optional<std::size_t> offending_step;
};

/// |W_k - Y_k| <= G (e^{M t_k} - 1)/M + tol_k, tol_k = 2 c h L (e^{M t_k} - 1), at every k.
GronwallReport gronwall_pathwise_check(const CoupledTrajectory& traj, const LearningProblem& problem,
                                       const Dataset& dataset, double tolerance_c = 1.0);

}  // namespace genbounds
