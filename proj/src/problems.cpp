#include "genbounds/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace genbounds {

std::string to_string(LossFamily f) {
  switch (f) {
    case LossFamily::kSigmoid: return "sigmoid";
    case LossFamily::kConstant: return "constant";
  }
  return "unknown";
}

LossFamily loss_family_from_string(const std::string& s) {
  if (s == "sigmoid") return LossFamily::kSigmoid;
  if (s == "constant") return LossFamily::kConstant;
  throw std::invalid_argument("unknown loss family '" + s + "'");
}

double sigmoid_curvature_max() {
  // |s''| = s(1-s)|1-2s| peaks at s = (3 +- sqrt 3)/6 with value sqrt(3)/18
  return std::sqrt(3.0) / 18.0;
}

namespace {

double sigmoid(double u) {
  if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}

ProblemConstants derive_constants(const std::vector<Atom>& atoms, const ProblemConfig& cfg) {
  ProblemConstants c;
  if (cfg.loss == LossFamily::kConstant) return c;
  const double b = cfg.data_bound;
  c.lipschitz = b * kSigmoidSlopeMax;
  c.smoothness = b * b * sigmoid_curvature_max() + cfg.l2;
  c.sigma = 0.5;
  double coord_max = 0.0;
  for (const auto& a : atoms)
    for (double xj : a.x) coord_max = std::max(coord_max, std::abs(xj));
  // d_j l ranges over [-|x_j|/4, |x_j|/4]; Hoeffding: range / 2
  const double coord_range = 2.0 * coord_max * kSigmoidSlopeMax;
  c.coord_sigma = std::sqrt(static_cast<double>(cfg.dim)) * coord_range / 2.0;
  return c;
}

}  // namespace

LearningProblem::LearningProblem(std::vector<Atom> atoms, std::vector<double> probs, ProblemConfig config)
    : atoms_(std::move(atoms)), probs_(std::move(probs)), config_(config) {
  if (config_.dim < 1) throw std::invalid_argument("LearningProblem: dim must be >= 1");
  if (!(config_.data_bound > 0.0)) throw std::invalid_argument("LearningProblem: data bound must be positive");
  if (atoms_.empty() || atoms_.size() != probs_.size())
    throw std::invalid_argument("LearningProblem: atoms and probabilities must be non-empty and aligned");
  if (config_.l2 < 0.0) throw std::invalid_argument("LearningProblem: l2 must be >= 0");
  double total = 0.0;
  double comp = 0.0;  // Kahan
  for (double p : probs_) {
    if (!(p >= 0.0)) throw std::invalid_argument("LearningProblem: probabilities must be >= 0");
    const double y = p - comp;
    const double t = total + y;
    comp = (t - total) - y;
    total = t;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("LearningProblem: probabilities must sum to 1");
  for (const auto& a : atoms_) {
    if (a.x.size() != config_.dim) throw std::invalid_argument("LearningProblem: atom dimension mismatch");
    if (norm(a.x) > config_.data_bound * (1.0 + 1e-12))
      throw std::invalid_argument("LearningProblem: atom exceeds data bound");
    if (a.y != 1.0 && a.y != -1.0) throw std::invalid_argument("LearningProblem: labels must be +-1");
  }
  constants_ = derive_constants(atoms_, config_);
}

double LearningProblem::loss(std::span<const double> w, std::size_t atom) const {
  if (config_.loss == LossFamily::kConstant) return 0.5;
  const Atom& a = atoms_[atom];
  double out = sigmoid(-a.y * dot(w, a.x));
  if (config_.l2 > 0.0) out += 0.5 * config_.l2 * dot(w, w);
  return out;
}

void LearningProblem::add_loss_gradient(std::span<const double> w, std::size_t atom, double weight,
                                        std::span<double> out) const {
  if (config_.loss == LossFamily::kConstant) return;
  const Atom& a = atoms_[atom];
  const double s = sigmoid(-a.y * dot(w, a.x));
  const double coef = -weight * a.y * s * (1.0 - s);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] += coef * a.x[j];
  if (config_.l2 > 0.0)
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += weight * config_.l2 * w[j];
}

Vec LearningProblem::loss_gradient(std::span<const double> w, std::size_t atom) const {
  Vec g(config_.dim, 0.0);
  add_loss_gradient(w, atom, 1.0, g);
  return g;
}

double LearningProblem::weighted_risk(std::span<const double> w, std::span<const double> weights) const {
  if (config_.loss == LossFamily::kConstant) return 0.5;
  double total = 0.0;
  for (std::size_t a = 0; a < atoms_.size(); ++a)
    if (weights[a] != 0.0) total += weights[a] * sigmoid(-atoms_[a].y * dot(w, atoms_[a].x));
  if (config_.l2 > 0.0) total += 0.5 * config_.l2 * dot(w, w);
  return total;
}

void LearningProblem::weighted_gradient(std::span<const double> w, std::span<const double> weights,
                                        std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  if (config_.loss == LossFamily::kConstant) return;
  for (std::size_t a = 0; a < atoms_.size(); ++a) {
    if (weights[a] == 0.0) continue;
    const Atom& atom = atoms_[a];
    const double s = sigmoid(-atom.y * dot(w, atom.x));
    const double coef = -weights[a] * atom.y * s * (1.0 - s);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += coef * atom.x[j];
  }
  if (config_.l2 > 0.0)
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += config_.l2 * w[j];
}

Dataset::Dataset(std::vector<std::size_t> entries, std::size_t atom_count, std::uint64_t seed)
    : entries_(std::move(entries)), counts_(atom_count, 0), weights_(atom_count, 0.0), seed_(seed) {
  if (entries_.empty()) throw std::invalid_argument("Dataset: n must be >= 1");
  for (std::size_t e : entries_) {
    if (e >= atom_count) throw std::invalid_argument("Dataset: entry is not an atom of the problem");
    ++counts_[e];
  }
  const auto n = static_cast<double>(entries_.size());
  for (std::size_t a = 0; a < atom_count; ++a) weights_[a] = static_cast<double>(counts_[a]) / n;
}

LearningProblem make_problem(const ProblemConfig& config, RandomStream& rng) {
  if (config.dim < 1) throw std::invalid_argument("make_problem: dim must be >= 1");
  if (config.atom_count < 2) throw std::invalid_argument("make_problem: need at least 2 atoms");
  if (!(config.data_bound > 0.0)) throw std::invalid_argument("make_problem: data bound must be positive");
  if (config.symmetric && config.atom_count % 2 != 0)
    throw std::invalid_argument("make_problem: symmetric problems need an even atom count");
  if (!(config.label_noise >= 0.0 && config.label_noise <= 1.0))
    throw std::invalid_argument("make_problem: label noise must lie in [0, 1]");

  const auto unit_direction = [&] {
    Vec v(config.dim);
    double r = 0.0;
    do {
      for (double& vi : v) vi = rng.normal();
      r = norm(v);
    } while (r == 0.0);
    for (double& vi : v) vi /= r;
    return v;
  };

  const Vec planted = unit_direction();
  const std::size_t base = config.symmetric ? config.atom_count / 2 : config.atom_count;
  std::vector<Atom> atoms;
  atoms.reserve(config.atom_count);
  for (std::size_t i = 0; i < base; ++i) {
    Atom a;
    a.x = unit_direction();
    for (double& xi : a.x) xi *= config.data_bound;
    a.y = dot(planted, a.x) >= 0.0 ? 1.0 : -1.0;
    if (rng.uniform() < config.label_noise) a.y = -a.y;
    atoms.push_back(std::move(a));
  }
  if (config.symmetric) {
    for (std::size_t i = 0; i < base; ++i) {
      Atom mirror = atoms[i];
      for (double& xi : mirror.x) xi = -xi;
      atoms.push_back(std::move(mirror));
    }
  }

  std::vector<double> probs(config.atom_count, 1.0 / static_cast<double>(config.atom_count));
  if (!config.uniform_weights) {
    for (double& p : probs) p = rng.exponential();
    const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
    for (double& p : probs) p /= total;
    // put the rounding residue on the largest weight
    const double residue = 1.0 - std::accumulate(probs.begin(), probs.end(), 0.0);
    *std::max_element(probs.begin(), probs.end()) += residue;
  }
  return LearningProblem(std::move(atoms), std::move(probs), config);
}

Dataset sample_dataset(const LearningProblem& problem, std::size_t n, RandomStream& rng) {
  if (n == 0) throw std::invalid_argument("sample_dataset: n must be >= 1");
  const auto& probs = problem.probs();
  std::vector<double> cdf(probs.size());
  std::partial_sum(probs.begin(), probs.end(), cdf.begin());
  std::vector<std::size_t> entries(n);
  for (auto& e : entries) {
    const double u = rng.uniform() * cdf.back();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    e = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), probs.size() - 1);
  }
  return Dataset(std::move(entries), problem.atom_count(), rng.seed());
}

Dataset full_support_dataset(const LearningProblem& problem, std::size_t copies) {
  if (copies == 0) throw std::invalid_argument("full_support_dataset: copies must be >= 1");
  std::vector<std::size_t> entries;
  entries.reserve(copies * problem.atom_count());
  for (std::size_t c = 0; c < copies; ++c)
    for (std::size_t a = 0; a < problem.atom_count(); ++a) entries.push_back(a);
  return Dataset(std::move(entries), problem.atom_count(), 0);
}

namespace {

void require_finite(std::span<const double> w, std::size_t dim) {
  if (w.size() != dim) throw std::invalid_argument("risk: weight dimension mismatch");
  if (!all_finite(w)) throw std::invalid_argument("risk: non-finite weight vector");
}

}  // namespace

double risk(std::span<const double> w, const LearningProblem& problem, const Dataset* dataset) {
  require_finite(w, problem.dim());
  return problem.weighted_risk(w, dataset ? std::span<const double>(dataset->weights()) : problem.probs());
}

Vec risk_gradient(std::span<const double> w, const LearningProblem& problem, const Dataset* dataset) {
  require_finite(w, problem.dim());
  Vec g(problem.dim());
  problem.weighted_gradient(w, dataset ? std::span<const double>(dataset->weights()) : problem.probs(), g);
  return g;
}

std::optional<DissipativityCertificate> estimate_dissipativity(const LearningProblem& problem,
                                                                RandomStream& rng,
                                                                const DissipativityConfig& config) {
  if (config.probes < 1000) throw std::invalid_argument("estimate_dissipativity: need at least 1000 probes");
  const std::size_t d = problem.dim();

  const auto ball_point = [&] {
    Vec v(d);
    double r;
    do {
      for (double& vi : v) vi = rng.normal();
      r = norm(v);
    } while (r == 0.0);
    const double radius = config.probe_radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
    for (double& vi : v) vi *= radius / r;
    return v;
  };

  std::vector<double> inner(config.probes);
  std::vector<double> sep_sq(config.probes);
  for (std::size_t i = 0; i < config.probes; ++i) {
    const Vec w = ball_point();
    const Vec w2 = ball_point();
    const std::size_t z = rng.index(problem.atom_count());
    const Vec diff_g = subtract(problem.loss_gradient(w2, z), problem.loss_gradient(w, z));
    const Vec diff_w = subtract(w, w2);
    inner[i] = dot(diff_g, diff_w);
    sep_sq[i] = dot(diff_w, diff_w);
  }

  const auto k_of = [&](double m) {
    double k = 0.0;
    for (std::size_t i = 0; i < inner.size(); ++i) k = std::max(k, inner[i] + m * sep_sq[i]);
    return k;
  };

  double lo = 1e-12;
  if (k_of(lo) > config.k_max) return std::nullopt;
  double hi = 1.0;
  while (k_of(hi) <= config.k_max && hi < 1e12) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (k_of(mid) <= config.k_max ? lo : hi) = mid;
  }

  DissipativityCertificate cert;
  cert.m = lo;
  cert.k = k_of(lo);
  cert.probes = config.probes;
  cert.worst_residual = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < inner.size(); ++i)
    cert.worst_residual = std::max(cert.worst_residual, inner[i] + cert.m * sep_sq[i] - cert.k);
  return cert;
}

}  // namespace genbounds
