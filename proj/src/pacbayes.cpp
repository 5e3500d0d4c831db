#include "genbounds/pacbayes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

#include "genbounds/kernels.hpp"

namespace genbounds {

SmoothedOccupation::SmoothedOccupation(PointSet support, double smoothing)
    : support_(std::move(support)), smoothing_(smoothing) {
  if (support_.empty()) throw std::invalid_argument("SmoothedOccupation: empty support");
  if (!(smoothing_ > 0.0) || !std::isfinite(smoothing_))
    throw std::invalid_argument("SmoothedOccupation: smoothing must be positive");
  for (const auto& p : support_)
    if (p.size() != support_.front().size()) throw std::invalid_argument("SmoothedOccupation: ragged support");
}

double SmoothedOccupation::log_density(std::span<const double> x) const {
  const double s2 = smoothing_ * smoothing_;
  const auto d = static_cast<double>(dim());
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& p : support_) top = std::max(top, -distance_sq(x, p) / (2.0 * s2));
  double acc = 0.0;
  for (const auto& p : support_) acc += std::exp(-distance_sq(x, p) / (2.0 * s2) - top);
  const double log_norm = -0.5 * d * std::log(2.0 * std::numbers::pi * s2);
  return top + std::log(acc) + log_norm - std::log(static_cast<double>(support_.size()));
}

namespace {

PointSet left_endpoints(const PointSet& path) {
  if (path.size() <= 1) return path;
  return PointSet(path.begin(), path.end() - 1);
}

}  // namespace

SmoothedOccupation posterior_occupation(const CoupledTrajectory& traj, double smoothing) {
  return SmoothedOccupation(left_endpoints(traj.w), smoothing);
}

SmoothedOccupation prior_occupation(const CoupledTrajectory& traj, double smoothing) {
  return SmoothedOccupation(left_endpoints(traj.y), smoothing);
}

Vec sample_smoothed(const SmoothedOccupation& occ, RandomStream& rng) {
  Vec x = occ.support()[rng.index(occ.support().size())];
  for (double& xi : x) xi += occ.smoothing() * rng.normal();
  return x;
}

double kl_upper_bound(const CoupledTrajectory& traj, double smoothing) {
  if (!(smoothing > 0.0)) throw std::invalid_argument("kl_upper_bound: s must be positive");
  return integral_gap(traj) / (2.0 * smoothing * smoothing);
}

double renyi_upper_bound(const CoupledTrajectory& traj, double smoothing, double beta) {
  if (!(beta > 1.0)) throw std::invalid_argument("renyi_upper_bound: beta must exceed 1");
  if (!(smoothing > 0.0)) throw std::invalid_argument("renyi_upper_bound: s must be positive");
  const double g = geometric_gap(traj);
  return beta * g * g / (2.0 * smoothing * smoothing);
}

namespace {

using GaussRule = boost::math::quadrature::gauss<double, 8>;

struct Rule1d {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

const Rule1d& gauss_rule() {
  static const Rule1d rule = [] {
    Rule1d r;
    const auto& x = GaussRule::abscissa();
    const auto& w = GaussRule::weights();
    for (std::size_t i = x.size(); i-- > 0;) {
      if (x[i] == 0.0) continue;
      r.nodes.push_back(-x[i]);
      r.weights.push_back(w[i]);
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
      r.nodes.push_back(x[i]);
      r.weights.push_back(w[i]);
    }
    return r;
  }();
  return rule;
}

// Composite Gauss-Legendre grid over the box covering both supports. A tilt
// beta > 1 also covers beta a_i - (beta - 1) b_j, where p^beta q^{1-beta} peaks.
struct Grid {
  std::size_t dim = 1;
  Vec lo;
  double panel = 1.0;
  std::vector<std::size_t> panels;  // per axis
};

Grid make_grid(const SmoothedOccupation& a, const SmoothedOccupation& b, const QuadratureOptions& opt,
               double tilt = 1.0) {
  if (a.dim() != b.dim()) throw std::invalid_argument("divergence oracle: dimension mismatch");
  if (a.dim() > 2) throw std::invalid_argument("divergence oracle: quadrature supports d <= 2 only");
  if (a.support().size() > 200 || b.support().size() > 200)
    throw std::invalid_argument("divergence oracle: supports must have <= 200 points");
  const double s = std::min(a.smoothing(), b.smoothing());
  const double margin = opt.margin * std::max(a.smoothing(), b.smoothing());
  Grid g;
  g.dim = a.dim();
  g.panel = s / opt.panels_per_s;
  g.lo.assign(g.dim, std::numeric_limits<double>::infinity());
  Vec hi(g.dim, -std::numeric_limits<double>::infinity());
  for (const auto* occ : {&a, &b})
    for (const auto& p : occ->support())
      for (std::size_t j = 0; j < g.dim; ++j) {
        g.lo[j] = std::min(g.lo[j], p[j] - margin);
        hi[j] = std::max(hi[j], p[j] + margin);
      }
  if (tilt > 1.0) {
    Vec alo(g.dim, std::numeric_limits<double>::infinity()), ahi(g.dim, -std::numeric_limits<double>::infinity());
    Vec blo = alo, bhi = ahi;
    for (std::size_t j = 0; j < g.dim; ++j) {
      for (const auto& p : a.support()) alo[j] = std::min(alo[j], p[j]), ahi[j] = std::max(ahi[j], p[j]);
      for (const auto& p : b.support()) blo[j] = std::min(blo[j], p[j]), bhi[j] = std::max(bhi[j], p[j]);
      g.lo[j] = std::min(g.lo[j], tilt * alo[j] - (tilt - 1.0) * bhi[j] - margin);
      hi[j] = std::max(hi[j], tilt * ahi[j] - (tilt - 1.0) * blo[j] + margin);
    }
  }
  for (std::size_t j = 0; j < g.dim; ++j)
    g.panels.push_back(static_cast<std::size_t>(std::ceil((hi[j] - g.lo[j]) / g.panel)));
  return g;
}

// Visits every quadrature node of tile `t` (one panel column) with its weight.
template <typename F>
void for_each_node(const Grid& g, std::size_t t, F&& f) {
  const Rule1d& rule = gauss_rule();
  const double half = 0.5 * g.panel;
  Vec x(g.dim);
  const double cx = g.lo[0] + (static_cast<double>(t) + 0.5) * g.panel;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    x[0] = cx + half * rule.nodes[i];
    const double wx = half * rule.weights[i];
    if (g.dim == 1) {
      f(x, wx);
      continue;
    }
    for (std::size_t py = 0; py < g.panels[1]; ++py) {
      const double cy = g.lo[1] + (static_cast<double>(py) + 0.5) * g.panel;
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        x[1] = cy + half * rule.nodes[k];
        f(x, wx * half * rule.weights[k]);
      }
    }
  }
}

std::vector<double> map_tiles(std::size_t tiles, const std::function<double(std::size_t)>& fn, int threads) {
  return threads == 1 ? kernels::serial::tiled_map(tiles, fn) : kernels::parallel::tiled_map(tiles, fn, threads);
}

constexpr double kNegligibleLog = -700.0;

}  // namespace

double kl_oracle(const SmoothedOccupation& post, const SmoothedOccupation& prior, const QuadratureOptions& opt) {
  const Grid g = make_grid(post, prior, opt);
  const auto tile = [&](std::size_t t) {
    double acc = 0.0;
    for_each_node(g, t, [&](const Vec& x, double w) {
      const double lp = post.log_density(x);
      if (lp < kNegligibleLog) return;
      acc += w * std::exp(lp) * (lp - prior.log_density(x));
    });
    return acc;
  };
  double total = 0.0;
  for (double v : map_tiles(g.panels[0], tile, opt.threads)) total += v;
  return std::max(total, 0.0);
}

double renyi_oracle(const SmoothedOccupation& post, const SmoothedOccupation& prior, double beta,
                    const QuadratureOptions& opt) {
  if (!(beta > 1.0)) throw std::invalid_argument("renyi_oracle: beta must exceed 1");
  const Grid g = make_grid(post, prior, opt, beta);
  // log of int p^beta q^{1-beta}, accumulated per tile as log-sum-exp; no
  // cutoff on p, the integrand can peak where p itself is negligible
  const auto tile = [&](std::size_t t) {
    double top = -std::numeric_limits<double>::infinity();
    double acc = 0.0;
    for_each_node(g, t, [&](const Vec& x, double w) {
      const double v = std::log(w) + beta * post.log_density(x) + (1.0 - beta) * prior.log_density(x);
      if (v > top) {
        acc = acc * std::exp(top - v) + 1.0;
        top = v;
      } else {
        acc += std::exp(v - top);
      }
    });
    return acc > 0.0 ? top + std::log(acc) : -std::numeric_limits<double>::infinity();
  };
  const std::vector<double> logs = map_tiles(g.panels[0], tile, opt.threads);
  const double top = *std::max_element(logs.begin(), logs.end());
  double acc = 0.0;
  for (double v : logs) acc += std::exp(v - top);
  return std::max((top + std::log(acc)) / (beta - 1.0), 0.0);
}

BoundReport eval_thm5(const CoupledTrajectory& traj, const LearningProblem& problem, const Dataset& dataset,
                      const BoundInputs& in, std::size_t mc_draws, RandomStream& rng) {
  if (mc_draws < 1000) throw std::invalid_argument("eval_thm5: need at least 1000 posterior draws");
  validate(in);
  const SmoothedOccupation post = posterior_occupation(traj, in.smoothing);
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < mc_draws; ++i) {
    const Vec w = sample_smoothed(post, rng);
    const double gap = problem.weighted_risk(w, problem.probs()) - problem.weighted_risk(w, dataset.weights());
    const double delta = gap - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (gap - mean);
  }
  const double sd = std::sqrt(m2 / static_cast<double>(mc_draws - 1));
  const double lhs = in.lambda * mean;
  Terms constants = {{"C", 0.5 * in.sigma * in.sigma},
                     {"mc_standard_error", in.lambda * sd / std::sqrt(static_cast<double>(mc_draws))}};
  return make_report("5", lhs, thm5_terms(integral_gap(traj), in), in,
                     {"C=sigma^2/2", "riemann-occupation", "grid-sup"}, std::move(constants));
}

BoundReport eval_thm6(const CoupledTrajectory& traj, const LearningProblem& problem, const Dataset& dataset,
                      const BoundInputs& in, RandomStream& rng) {
  validate(in);
  const SmoothedOccupation post = posterior_occupation(traj, in.smoothing);
  const Vec w = sample_smoothed(post, rng);
  const double gap = problem.weighted_risk(w, problem.probs()) - problem.weighted_risk(w, dataset.weights());
  const double lhs = in.lambda * in.beta / (in.beta - 1.0) * gap;
  return make_report("6", lhs, thm6_terms(geometric_gap(traj), in), in, {"riemann-occupation", "grid-sup"});
}

}  // namespace genbounds
