#include "genbounds/stable_noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace genbounds {

StableSpec::StableSpec(double alpha, double scale, std::size_t dim)
    : alpha_(alpha), scale_(scale), dim_(dim) {
  if (!(alpha > 0.0 && alpha <= 2.0))
    throw std::invalid_argument("StableSpec: alpha must lie in (0, 2], got " + std::to_string(alpha));
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw std::invalid_argument("StableSpec: scale must be positive and finite");
  if (dim < 1) throw std::invalid_argument("StableSpec: dim must be >= 1");
}

namespace {

// Unit-scale symmetric CMS transform of (V, W), V ~ U(-pi/2, pi/2), W ~ Exp(1).
double cms_unit(double alpha, double v, double w) {
  if (alpha == 1.0) return std::tan(v);
  if (alpha == 2.0) return 2.0 * std::sin(v) * std::sqrt(w);
  const double a = std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha);
  const double b = std::pow(std::cos((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
  return a * b;
}

}  // namespace

double sample_stable_scalar(const StableSpec& spec, RandomStream& rng) {
  constexpr double half_pi = std::numbers::pi / 2.0;
  const double v = rng.uniform_open(-half_pi, half_pi);
  const double w = rng.exponential();
  return spec.scale() * cms_unit(spec.alpha(), v, w);
}

double sample_positive_stable(double a, RandomStream& rng) {
  if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("sample_positive_stable: a must lie in (0, 1)");
  const double v = rng.uniform_open(0.0, std::numbers::pi);
  const double w = rng.exponential();
  const double num = std::sin(a * v) * std::pow(std::sin((1.0 - a) * v) / w, (1.0 - a) / a);
  return num / std::pow(std::sin(v), 1.0 / a);
}

Vec sample_isotropic_stable_vector(const StableSpec& spec, RandomStream& rng) {
  // X = sqrt(2 scale^2 A) G, E exp(-u A) = exp(-u^{alpha/2}) so that
  // E exp(i<xi, X>) = exp(-(scale^2 |xi|^2)^{alpha/2}).
  double mix = 2.0;
  if (!spec.gaussian()) mix *= sample_positive_stable(spec.alpha() / 2.0, rng);
  const double r = spec.scale() * std::sqrt(mix);
  Vec x(spec.dim());
  for (double& xi : x) xi = r * rng.normal();
  return x;
}

std::vector<Vec> levy_path_increments(const StableSpec& spec, double step_h, std::size_t count,
                                      RandomStream& rng) {
  if (!(step_h > 0.0)) throw std::invalid_argument("levy_path_increments: step_h must be positive");
  const double factor = std::pow(step_h, 1.0 / spec.alpha());
  std::vector<Vec> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    Vec x = sample_isotropic_stable_vector(spec, rng);
    for (double& xi : x) xi *= factor;
    out.push_back(std::move(x));
  }
  return out;
}

TailIndexEstimate estimate_tail_index(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 1000)
    throw std::invalid_argument("estimate_tail_index: need at least 1000 samples, got " + std::to_string(n));
  const auto k = static_cast<std::size_t>(std::ceil(0.01 * static_cast<double>(n)));

  std::vector<double> mag(n);
  std::transform(samples.begin(), samples.end(), mag.begin(), [](double x) { return std::abs(x); });
  std::partial_sort(mag.begin(), mag.begin() + static_cast<std::ptrdiff_t>(k + 1), mag.end(), std::greater<>());
  if (!(mag[k] > 0.0)) throw std::invalid_argument("estimate_tail_index: degenerate sample (zero threshold)");

  // prefix[j] = sum of log of the j largest magnitudes
  std::vector<double> prefix(k + 1, 0.0);
  for (std::size_t i = 0; i < k; ++i) prefix[i + 1] = prefix[i] + std::log(mag[i]);
  const auto hill_xi = [&](std::size_t j) { return prefix[j] / static_cast<double>(j) - std::log(mag[j]); };

  TailIndexEstimate est;
  est.k = k;
  est.hill = 1.0 / hill_xi(k);

  // Hill's reciprocal index drifts linearly in j/n for stable tails (second-order
  // term x^{-alpha}); the intercept of an OLS fit over j in [k/10, k] removes it.
  const std::size_t j_lo = std::max<std::size_t>(2, k / 10);
  const std::size_t stride = std::max<std::size_t>(1, (k - j_lo) / 90);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t m = 0;
  for (std::size_t j = j_lo; j <= k; j += stride) {
    const double x = static_cast<double>(j);
    const double y = hill_xi(j);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  const double mm = static_cast<double>(m);
  const double den = mm * sxx - sx * sx;
  double xi = hill_xi(k);
  if (m >= 3 && den > 0.0) {
    const double slope = (mm * sxy - sx * sy) / den;
    xi = (sy - slope * sx) / mm;
  }
  // a negative or vanishing intercept means no power tail is visible
  est.value = xi > 0.0 ? 1.0 / xi : std::numeric_limits<double>::infinity();
  est.at_boundary = est.value >= 2.0;
  return est;
}

}  // namespace genbounds
