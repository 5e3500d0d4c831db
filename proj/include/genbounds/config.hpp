#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "genbounds/bounds.hpp"
#include "genbounds/dynamics.hpp"
#include "genbounds/problems.hpp"

namespace genbounds {

/// Raised for malformed or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class LambdaRule { kSqrtN, kFixed, kOptimize };
enum class GammaSource { kAlpha, kEstimated, kOverride };

std::string to_string(LambdaRule r);
std::string to_string(GammaSource g);

struct BoundsConfig {
  double zeta = 0.05;
  /// nullopt: median step displacement of the empirical path.
  std::optional<double> smoothing;
  LambdaRule lambda_rule = LambdaRule::kSqrtN;
  double lambda_value = 1.0;
  double beta = 2.0;
  GammaSource gamma_source = GammaSource::kAlpha;
  double gamma_override = 1.0;
  Variant variant = Variant::kLipschitz;
  std::size_t mc_draws = 1000;
  std::size_t thm6_draws = 1;
  std::vector<int> theorems = {2, 3, 4, 5, 6};
  DissipativityConfig dissipativity;
};

struct ExperimentSection {
  std::size_t replicates = 20;
  std::vector<std::size_t> n_values = {1024};
  std::vector<double> alpha_values = {1.5};
  std::uint64_t master_seed = 0;
  int workers = 1;
  /// Fraction of failed replicates tolerated before the CLI exits with code 3.
  double failure_threshold = 0.0;
  /// Use full-support datasets (n must be a multiple of the atom count).
  bool full_support = false;
};

/// `dynamics.alpha` and `dynamics.noise_seed` are filled per replicate from
/// the experiment section and the seed tree.
struct ExperimentConfig {
  ProblemConfig problem;
  SdeConfig dynamics;
  BoundsConfig bounds;
  ExperimentSection experiment;
};

/// Parses and validates; unknown keys and missing master_seed are errors.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);
nlohmann::json to_json(const ExperimentConfig& cfg);

/// Applies GENBOUNDS_SEED when set.
void apply_seed_override(ExperimentConfig& cfg);

}  // namespace genbounds
