#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace genbounds::stats {

double median(std::vector<double> values);
/// Linear-interpolated quantile, q in [0, 1].
double quantile(std::vector<double> values, double q);
double interquartile_range(const std::vector<double>& values);
double mean(std::span<const double> values);
double variance(std::span<const double> values);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

/// Exact (Clopper-Pearson) two-sided interval for a binomial rate.
std::pair<double, double> clopper_pearson(std::size_t successes, std::size_t trials, double confidence = 0.95);

/// P(X <= successes) for X ~ Binomial(trials, p0): the one-sided p-value of
/// H0 "rate >= p0" against "rate < p0".
double binomial_lower_tail(std::size_t successes, std::size_t trials, double p0);

/// Kolmogorov limiting survival P(K > lambda).
double kolmogorov_survival(double lambda);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// One-sample test of `samples` against a continuous cdf.
KsResult ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf);
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace genbounds::stats
