#include "genbounds/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>

namespace genbounds {

using nlohmann::json;

std::string to_string(LambdaRule r) {
  switch (r) {
    case LambdaRule::kSqrtN: return "sqrt_n";
    case LambdaRule::kFixed: return "fixed";
    case LambdaRule::kOptimize: return "optimize";
  }
  return "?";
}

std::string to_string(GammaSource g) {
  switch (g) {
    case GammaSource::kAlpha: return "alpha";
    case GammaSource::kEstimated: return "estimated";
    case GammaSource::kOverride: return "override";
  }
  return "?";
}

namespace {

// Reads keys of one object section, rejecting anything not consumed.
class Section {
 public:
  Section(const json& doc, std::string name) : name_(std::move(name)) {
    if (doc.is_null()) return;
    if (!doc.is_object()) throw ConfigError("section '" + name_ + "' must be an object");
    doc_ = &doc;
  }

  template <typename T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    if (!doc_ || !doc_->contains(key)) return;
    try {
      out = doc_->at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(name_ + "." + key + ": " + e.what());
    }
  }

  bool has(const char* key) const { return doc_ && doc_->contains(key); }

  void finish() const {
    if (!doc_) return;
    for (const auto& [key, value] : doc_->items())
      if (!seen_.count(key)) throw ConfigError("unknown key '" + name_ + "." + key + "'");
  }

 private:
  const json* doc_ = nullptr;
  std::string name_;
  std::set<std::string> seen_;
};

const json& child(const json& doc, const char* key) {
  static const json null_value;
  return doc.contains(key) ? doc.at(key) : null_value;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config root must be an object");
  for (const auto& [key, value] : doc.items())
    if (key != "problem" && key != "dynamics" && key != "bounds" && key != "experiment")
      throw ConfigError("unknown section '" + key + "'");

  ExperimentConfig cfg;

  Section p(child(doc, "problem"), "problem");
  std::string loss = to_string(cfg.problem.loss);
  p.read("dim", cfg.problem.dim);
  p.read("atom_count", cfg.problem.atom_count);
  p.read("data_bound", cfg.problem.data_bound);
  p.read("loss", loss);
  p.read("label_noise", cfg.problem.label_noise);
  p.read("uniform_weights", cfg.problem.uniform_weights);
  p.read("symmetric", cfg.problem.symmetric);
  p.read("l2", cfg.problem.l2);
  p.finish();
  try {
    cfg.problem.loss = loss_family_from_string(loss);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  Section d(child(doc, "dynamics"), "dynamics");
  std::string init = cfg.dynamics.init.kind == InitSpec::Kind::kZero ? "zero" : "gaussian";
  d.read("step", cfg.dynamics.step_h);
  d.read("horizon", cfg.dynamics.horizon_t);
  d.read("noise_scale", cfg.dynamics.noise_scale);
  d.read("init", init);
  d.read("init_radius", cfg.dynamics.init.radius);
  d.read("allow_large_step", cfg.dynamics.allow_large_step);
  d.finish();
  if (init == "zero")
    cfg.dynamics.init.kind = InitSpec::Kind::kZero;
  else if (init == "gaussian")
    cfg.dynamics.init.kind = InitSpec::Kind::kGaussian;
  else
    throw ConfigError("dynamics.init must be 'zero' or 'gaussian'");

  Section b(child(doc, "bounds"), "bounds");
  std::string lambda_rule = to_string(cfg.bounds.lambda_rule);
  std::string gamma_source = to_string(cfg.bounds.gamma_source);
  std::string variant = to_string(cfg.bounds.variant);
  b.read("zeta", cfg.bounds.zeta);
  if (b.has("smoothing")) {
    const json& s = child(child(doc, "bounds"), "smoothing");
    if (s.is_number())
      cfg.bounds.smoothing = s.get<double>();
    else if (!(s.is_string() && s.get<std::string>() == "median_step"))
      throw ConfigError("bounds.smoothing must be a number or 'median_step'");
  }
  json ignored;
  b.read("smoothing", ignored);
  b.read("lambda_rule", lambda_rule);
  b.read("lambda", cfg.bounds.lambda_value);
  b.read("beta", cfg.bounds.beta);
  b.read("gamma_source", gamma_source);
  b.read("gamma", cfg.bounds.gamma_override);
  b.read("variant", variant);
  b.read("mc_draws", cfg.bounds.mc_draws);
  b.read("thm6_draws", cfg.bounds.thm6_draws);
  b.read("theorems", cfg.bounds.theorems);
  b.read("dissipativity_probes", cfg.bounds.dissipativity.probes);
  b.read("dissipativity_radius", cfg.bounds.dissipativity.probe_radius);
  b.read("dissipativity_k_max", cfg.bounds.dissipativity.k_max);
  b.finish();
  if (lambda_rule == "sqrt_n")
    cfg.bounds.lambda_rule = LambdaRule::kSqrtN;
  else if (lambda_rule == "fixed")
    cfg.bounds.lambda_rule = LambdaRule::kFixed;
  else if (lambda_rule == "optimize")
    cfg.bounds.lambda_rule = LambdaRule::kOptimize;
  else
    throw ConfigError("bounds.lambda_rule must be sqrt_n, fixed or optimize");
  if (gamma_source == "alpha")
    cfg.bounds.gamma_source = GammaSource::kAlpha;
  else if (gamma_source == "estimated")
    cfg.bounds.gamma_source = GammaSource::kEstimated;
  else if (gamma_source == "override")
    cfg.bounds.gamma_source = GammaSource::kOverride;
  else
    throw ConfigError("bounds.gamma_source must be alpha, estimated or override");
  try {
    cfg.bounds.variant = variant_from_string(variant);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  Section e(child(doc, "experiment"), "experiment");
  require(e.has("master_seed"), "experiment.master_seed is required");
  e.read("replicates", cfg.experiment.replicates);
  e.read("n", cfg.experiment.n_values);
  e.read("alpha", cfg.experiment.alpha_values);
  e.read("master_seed", cfg.experiment.master_seed);
  e.read("workers", cfg.experiment.workers);
  e.read("failure_threshold", cfg.experiment.failure_threshold);
  e.read("full_support", cfg.experiment.full_support);
  e.finish();

  require(cfg.problem.dim >= 1, "problem.dim must be >= 1");
  require(cfg.problem.atom_count >= 1, "problem.atom_count must be >= 1");
  require(cfg.problem.data_bound > 0.0, "problem.data_bound must be positive");
  require(cfg.problem.label_noise >= 0.0 && cfg.problem.label_noise <= 1.0, "problem.label_noise must lie in [0, 1]");
  require(cfg.problem.l2 >= 0.0, "problem.l2 must be >= 0");
  require(!cfg.problem.symmetric || cfg.problem.atom_count % 2 == 0,
          "problem.symmetric needs an even atom_count");
  require(cfg.dynamics.step_h > 0.0, "dynamics.step must be positive");
  require(cfg.dynamics.horizon_t > 0.0, "dynamics.horizon must be positive");
  require(cfg.dynamics.noise_scale > 0.0, "dynamics.noise_scale must be positive");
  require(cfg.dynamics.init.radius >= 0.0, "dynamics.init_radius must be >= 0");
  require(cfg.bounds.zeta > 0.0 && cfg.bounds.zeta < 0.25, "bounds.zeta must lie in (0, 0.25)");
  require(!cfg.bounds.smoothing || *cfg.bounds.smoothing > 0.0, "bounds.smoothing must be positive");
  require(cfg.bounds.lambda_value > 0.0, "bounds.lambda must be positive");
  require(cfg.bounds.beta > 1.0, "bounds.beta must exceed 1");
  require(cfg.bounds.gamma_override >= 0.0, "bounds.gamma must be >= 0");
  require(cfg.bounds.mc_draws >= 1000, "bounds.mc_draws must be >= 1000");
  require(cfg.bounds.thm6_draws >= 1, "bounds.thm6_draws must be >= 1");
  for (int t : cfg.bounds.theorems)
    require(t == 2 || t == 3 || t == 4 || t == 5 || t == 6 || t == 13 || t == 16,
            "bounds.theorems entries must be among 2, 3, 4, 5, 6, 13, 16");
  require(!cfg.experiment.n_values.empty(), "experiment.n must be non-empty");
  for (std::size_t n : cfg.experiment.n_values) require(n >= 1, "experiment.n entries must be >= 1");
  require(!cfg.experiment.alpha_values.empty(), "experiment.alpha must be non-empty");
  for (double a : cfg.experiment.alpha_values)
    require(a > 0.0 && a <= 2.0, "experiment.alpha entries must lie in (0, 2]");
  require(cfg.experiment.workers >= 1, "experiment.workers must be >= 1");
  require(cfg.experiment.failure_threshold >= 0.0 && cfg.experiment.failure_threshold <= 1.0,
          "experiment.failure_threshold must lie in [0, 1]");
  if (cfg.experiment.full_support)
    for (std::size_t n : cfg.experiment.n_values)
      require(n % cfg.problem.atom_count == 0, "experiment.full_support needs n divisible by atom_count");

  cfg.dynamics.alpha = cfg.experiment.alpha_values.front();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
  return parse_config(doc);
}

json to_json(const ExperimentConfig& cfg) {
  json doc;
  doc["problem"] = {
      {"dim", cfg.problem.dim},
      {"atom_count", cfg.problem.atom_count},
      {"data_bound", cfg.problem.data_bound},
      {"loss", to_string(cfg.problem.loss)},
      {"label_noise", cfg.problem.label_noise},
      {"uniform_weights", cfg.problem.uniform_weights},
      {"symmetric", cfg.problem.symmetric},
      {"l2", cfg.problem.l2},
  };
  doc["dynamics"] = {
      {"step", cfg.dynamics.step_h},
      {"horizon", cfg.dynamics.horizon_t},
      {"noise_scale", cfg.dynamics.noise_scale},
      {"init", cfg.dynamics.init.kind == InitSpec::Kind::kZero ? "zero" : "gaussian"},
      {"init_radius", cfg.dynamics.init.radius},
      {"allow_large_step", cfg.dynamics.allow_large_step},
  };
  json b = {
      {"zeta", cfg.bounds.zeta},
      {"lambda_rule", to_string(cfg.bounds.lambda_rule)},
      {"lambda", cfg.bounds.lambda_value},
      {"beta", cfg.bounds.beta},
      {"gamma_source", to_string(cfg.bounds.gamma_source)},
      {"gamma", cfg.bounds.gamma_override},
      {"variant", to_string(cfg.bounds.variant)},
      {"mc_draws", cfg.bounds.mc_draws},
      {"thm6_draws", cfg.bounds.thm6_draws},
      {"theorems", cfg.bounds.theorems},
      {"dissipativity_probes", cfg.bounds.dissipativity.probes},
      {"dissipativity_radius", cfg.bounds.dissipativity.probe_radius},
      {"dissipativity_k_max", cfg.bounds.dissipativity.k_max},
  };
  if (cfg.bounds.smoothing)
    b["smoothing"] = *cfg.bounds.smoothing;
  else
    b["smoothing"] = "median_step";
  doc["bounds"] = b;
  doc["experiment"] = {
      {"replicates", cfg.experiment.replicates},
      {"n", cfg.experiment.n_values},
      {"alpha", cfg.experiment.alpha_values},
      {"master_seed", cfg.experiment.master_seed},
      {"workers", cfg.experiment.workers},
      {"failure_threshold", cfg.experiment.failure_threshold},
      {"full_support", cfg.experiment.full_support},
  };
  return doc;
}

void apply_seed_override(ExperimentConfig& cfg) {
  const char* env = std::getenv("GENBOUNDS_SEED");
  if (!env || !*env) return;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (!end || *end != '\0') throw ConfigError("GENBOUNDS_SEED must be an unsigned integer");
  cfg.experiment.master_seed = v;
}

}  // namespace genbounds
