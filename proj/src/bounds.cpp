#include "genbounds/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace genbounds {

std::string to_string(Variant v) { return v == Variant::kLipschitz ? "lipschitz" : "coordinates"; }

Variant variant_from_string(const std::string& s) {
  if (s == "lipschitz") return Variant::kLipschitz;
  if (s == "coordinates") return Variant::kCoordinates;
  throw std::invalid_argument("unknown bound variant '" + s + "'");
}

void validate(const BoundInputs& in) {
  const auto check = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("BoundInputs: ") + what);
  };
  check(in.n >= 1, "n must be >= 1");
  check(in.zeta > 0.0 && in.zeta < 1.0, "zeta must lie in (0, 1)");
  check(in.gamma >= 0.0 && std::isfinite(in.gamma), "gamma must be >= 0");
  check(in.gamma <= static_cast<double>(in.dim) + 0.5, "gamma must be <= d + 0.5");
  check(in.lipschitz >= 0.0 && in.smoothness >= 0.0, "L and M must be >= 0");
  check(in.sigma >= 0.0 && in.coord_sigma >= 0.0, "sigma and Sigma must be >= 0");
  check(in.horizon > 0.0, "T must be positive");
  check(in.dim >= 1, "d must be >= 1");
  check(in.smoothing > 0.0, "s must be positive");
  check(in.lambda > 0.0, "lambda must be positive");
  check(in.beta > 1.0, "beta must exceed 1");
  if (in.dissipativity_k) check(*in.dissipativity_k >= 0.0, "K must be >= 0");
}

BoundInputs inputs_from_problem(const LearningProblem& problem, std::size_t n, double horizon) {
  BoundInputs in;
  const auto& c = problem.constants();
  in.n = n;
  in.lipschitz = c.lipschitz;
  in.smoothness = c.smoothness;
  in.sigma = c.sigma;
  in.coord_sigma = c.coord_sigma;
  in.horizon = horizon;
  in.dim = problem.dim();
  return in;
}

BoundReport make_report(std::string theorem, double lhs, Terms terms, const BoundInputs& in,
                        std::vector<std::string> caveats, Terms constants) {
  BoundReport r;
  r.theorem = std::move(theorem);
  r.lhs = lhs;
  r.terms = std::move(terms);
  r.constants = std::move(constants);
  r.rhs = 0.0;
  for (const auto& [name, value] : r.terms) r.rhs += value;
  r.holds = lhs <= r.rhs;
  r.caveats = std::move(caveats);
  r.inputs = in;
  return r;
}

double expm1_factor(double m, double t) {
  if (m < 0.0) throw std::invalid_argument("expm1_factor: M must be >= 0");
  if (!(t > 0.0)) throw std::invalid_argument("expm1_factor: T must be positive");
  if (m == 0.0) return t;
  return std::expm1(m * t) / m;
}

namespace {

double sqrt_n(const BoundInputs& in) { return std::sqrt(static_cast<double>(in.n)); }

// log(c sqrt n), rejected unless positive: the covering scale is 1 / (c sqrt n).
double covering_log(double c, const BoundInputs& in, const char* symbol) {
  const double v = std::log(c * sqrt_n(in));
  if (!(v > 0.0))
    throw std::domain_error(std::string("n too small for covering schedule delta_n = 1/(") + symbol + " sqrt n)");
  return v;
}

// sqrt((2 gamma log(c sqrt n) + log(b)) / (2n))
double deviation(double log_cover, double gamma, double log_conf, std::size_t n) {
  return std::sqrt((2.0 * gamma * log_cover + log_conf) / (2.0 * static_cast<double>(n)));
}

}  // namespace

Terms thm2_terms(double geom_gap, const BoundInputs& in) {
  validate(in);
  if (in.n < 2) throw std::invalid_argument("rhs_thm2: n must be >= 2");
  const double lg = covering_log(in.lipschitz, in, "L");
  return {
      {"geometric", 2.0 * in.lipschitz * geom_gap},
      {"sampling", 2.0 / sqrt_n(in)},
      {"covering", 2.0 * in.sigma * deviation(lg, in.gamma, std::log(1.0 / in.zeta), in.n)},
  };
}

BoundReport rhs_thm2(double geom_gap, const BoundInputs& in, double lhs) {
  return make_report("2", lhs, thm2_terms(geom_gap, in), in, {"asymptotic-N", "grid-sup"});
}

Terms lemma16_terms(const BoundInputs& in, Variant variant) {
  validate(in);
  const double lm = covering_log(in.smoothness, in, "M");
  const double sn = sqrt_n(in);
  if (variant == Variant::kLipschitz) {
    return {
        {"sampling", 2.0 / sn},
        {"mean_deviation", in.lipschitz * std::sqrt(2.0 / static_cast<double>(in.n))},
        {"covering", 2.0 * in.lipschitz * deviation(lm, in.gamma, std::log(1.0 / in.zeta), in.n)},
    };
  }
  const double conf = std::log(2.0 * static_cast<double>(in.dim) / in.zeta);
  return {
      {"sampling", 2.0 / sn},
      {"covering", 2.0 * in.coord_sigma * deviation(lm, in.gamma, conf, in.n)},
  };
}

double rhs_lemma16(const BoundInputs& in, Variant variant) {
  double total = 0.0;
  for (const auto& [name, v] : lemma16_terms(in, variant)) total += v;
  return total;
}

double rhs_thm3(const BoundInputs& in, Variant variant) {
  return expm1_factor(in.smoothness, in.horizon) * rhs_lemma16(in, variant);
}

BoundReport rhs_thm4(const BoundInputs& in, Variant variant, double lhs) {
  validate(in);
  const double growth = expm1_factor(in.smoothness, in.horizon);
  const double c0 = std::max(in.smoothness, in.lipschitz);
  double c1, c2, c3;
  if (variant == Variant::kLipschitz) {
    c1 = 2.0 + std::sqrt(2.0) * in.lipschitz;
    c2 = 4.0 * in.lipschitz * in.lipschitz * growth + 2.0 * in.sigma;
    c3 = 1.0;
  } else {
    c1 = 2.0;
    c2 = 4.0 * in.coord_sigma * in.lipschitz * growth + 2.0 * in.sigma;
    c3 = 2.0 * static_cast<double>(in.dim);
  }
  const double lc = covering_log(c0, in, "C0");
  const double sn = sqrt_n(in);
  Terms terms = {
      {"sampling", 2.0 / sn},
      {"drift", 2.0 * in.lipschitz / sn * c1 * growth},
      {"covering", c2 * deviation(lc, in.gamma, std::log(c3 / in.zeta), in.n)},
  };
  Terms constants = {{"C0", c0}, {"C1", c1}, {"C2", c2}, {"C3", c3}};
  return make_report("4", lhs, std::move(terms), in, {"asymptotic-N", "grid-sup"}, std::move(constants));
}

Terms thm13_terms(const BoundInputs& in) {
  validate(in);
  if (!in.dissipativity_m || !(*in.dissipativity_m > 0.0))
    throw std::invalid_argument("rhs_thm13: co-dissipativity certificate required (m > 0)");
  const double m = *in.dissipativity_m;
  const double k = in.dissipativity_k.value_or(0.0);
  const double lm = covering_log(in.smoothness, in, "M");
  const double n = static_cast<double>(in.n);
  const double conf = std::log(2.0 * static_cast<double>(in.dim) / in.zeta);
  return {
      {"dissipative", 2.0 * k / m},
      {"sampling", 4.0 / (m * m) * (2.0 / n)},
      {"covering", 4.0 / (m * m) * (in.coord_sigma * in.coord_sigma / n) * (2.0 * in.gamma * lm + conf)},
  };
}

double rhs_thm13(const BoundInputs& in) {
  double total = 0.0;
  for (const auto& [name, v] : thm13_terms(in)) total += v;
  return total;
}

Terms thm5_terms(double integral_gap_value, const BoundInputs& in) {
  validate(in);
  const double s2 = in.smoothing * in.smoothing;
  const double c = 0.5 * in.sigma * in.sigma;
  return {
      {"divergence", integral_gap_value / s2},
      {"confidence", std::log(1.0 / in.zeta)},
      {"sub_gaussian", c * in.lambda * in.lambda / static_cast<double>(in.n)},
  };
}

Terms thm6_terms(double geom_gap, const BoundInputs& in) {
  validate(in);
  const double b = in.beta;
  const double ratio = b / (b - 1.0);
  return {
      {"confidence", (2.0 * b - 1.0) / (b - 1.0) * std::log(2.0 / in.zeta)},
      {"divergence", b / (2.0 * in.smoothing * in.smoothing) * geom_gap * geom_gap},
      {"sub_gaussian", ratio * ratio * in.lambda * in.lambda * in.sigma * in.sigma / (2.0 * static_cast<double>(in.n))},
  };
}

double optimal_lambda(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("optimal_lambda: a and b must be positive");
  return std::sqrt(a / b);
}

GronwallReport gronwall_pathwise_check(const CoupledTrajectory& traj, const LearningProblem& problem,
                                       const Dataset& dataset, double tolerance_c) {
  GronwallReport rep;
  rep.tolerance_c = tolerance_c;
  rep.g = g_nabla_both(traj, problem, dataset);
  const double m = problem.constants().smoothness;
  const double l = problem.constants().lipschitz;
  const double h = traj.step_h;
  rep.max_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < traj.w.size(); ++k) {
    const double t = traj.times[k];
    const double gap = distance(traj.w[k], traj.y[k]);
    // (e^{Mt} - 1)/M and ((1 + hM)^k - 1)/M, both -> t as M -> 0
    const double cont = t > 0.0 ? expm1_factor(m, t) : 0.0;
    const double disc = m > 0.0 ? std::expm1(static_cast<double>(k) * std::log1p(h * m)) / m : t;
    const double envelope = rep.g * cont;
    const double tol = 2.0 * tolerance_c * h * l * m * cont;
    rep.max_tolerance = std::max(rep.max_tolerance, tol);
    rep.discretization_slack = std::max(rep.discretization_slack, rep.g * (cont - disc));
    rep.max_excess = std::max(rep.max_excess, gap - envelope);
    const double denom = envelope + tol;
    if (denom > 0.0) rep.max_ratio = std::max(rep.max_ratio, gap / denom);
    if (gap > denom + 1e-12 * (1.0 + denom) && !rep.offending_step) {
      rep.holds = false;
      rep.offending_step = k;
    }
  }
  return rep;
}

}  // namespace genbounds
