#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "genbounds/stable_noise.hpp"
#include "genbounds/stats.hpp"

using namespace genbounds;

namespace {

double normal_cdf(double x, double sd) { return 0.5 * std::erfc(-x / (sd * std::numbers::sqrt2)); }

}  // namespace

TEST_CASE("stable spec validates its parameters") {
  CHECK_THROWS_AS(StableSpec(0.0, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(StableSpec(2.1, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(StableSpec(1.5, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(StableSpec(1.5, 1.0, 0), std::invalid_argument);
  CHECK(StableSpec(2.0, 1.0, 3).gaussian());
}

TEST_CASE("alpha = 2 scalar draws are N(0, 2 scale^2)") {
  RandomStream rng(11);
  for (double scale : {1.0, 0.3}) {
    const StableSpec spec(2.0, scale, 1);
    std::vector<double> xs(20000);
    for (double& x : xs) x = sample_stable_scalar(spec, rng);
    const auto ks = stats::ks_one_sample(xs, [&](double x) { return normal_cdf(x, std::sqrt(2.0) * scale); });
    CHECK(ks.p_value > 0.01);
  }
}

TEST_CASE("alpha = 1 scalar draws are Cauchy(scale)") {
  RandomStream rng(12);
  const StableSpec spec(1.0, 2.0, 1);
  std::vector<double> xs(20000);
  for (double& x : xs) x = sample_stable_scalar(spec, rng);
  const auto ks = stats::ks_one_sample(xs, [](double x) { return 0.5 + std::atan(x / 2.0) / std::numbers::pi; });
  CHECK(ks.p_value > 0.01);
}

TEST_CASE("isotropic alpha = 2 vectors have independent N(0, 2) coordinates") {
  RandomStream rng(13);
  const StableSpec spec(2.0, 1.0, 3);
  std::vector<double> c0, c2;
  for (int i = 0; i < 20000; ++i) {
    const Vec v = sample_isotropic_stable_vector(spec, rng);
    REQUIRE(v.size() == 3);
    c0.push_back(v[0]);
    c2.push_back(v[2]);
  }
  const auto cdf = [](double x) { return normal_cdf(x, std::sqrt(2.0)); };
  CHECK(stats::ks_one_sample(c0, cdf).p_value > 0.01);
  CHECK(stats::ks_one_sample(c2, cdf).p_value > 0.01);
}

TEST_CASE("isotropic projections match the scalar law in every direction") {
  // <X, u> of a rotation-invariant stable vector is scalar SaS with the same scale
  RandomStream rng(14);
  for (double alpha : {1.2, 1.7}) {
    const StableSpec vec_spec(alpha, 1.0, 2);
    const StableSpec scalar_spec(alpha, 1.0, 1);
    std::vector<double> axis, diag, scalar;
    for (int i = 0; i < 20000; ++i) {
      const Vec v = sample_isotropic_stable_vector(vec_spec, rng);
      axis.push_back(v[0]);
      diag.push_back((v[0] + v[1]) / std::numbers::sqrt2);
      scalar.push_back(sample_stable_scalar(scalar_spec, rng));
    }
    CHECK(stats::ks_two_sample(axis, scalar).p_value > 0.01);
    CHECK(stats::ks_two_sample(diag, scalar).p_value > 0.01);
  }
}

TEST_CASE("positive stable draws have Laplace transform exp(-u^a)") {
  RandomStream rng(15);
  const double a = 0.75;
  const int draws = 100000;
  std::vector<double> xs(draws);
  for (double& x : xs) {
    x = sample_positive_stable(a, rng);
    REQUIRE(x > 0.0);
  }
  for (double u : {0.3, 1.0, 2.5}) {
    double m = 0.0;
    for (double x : xs) m += std::exp(-u * x);
    m /= draws;
    // E exp(-uA) is in (0, 1]; the MC standard error is below 0.5 / sqrt(draws)
    CHECK(std::abs(m - std::exp(-std::pow(u, a))) < 4.0 * 0.5 / std::sqrt(draws));
  }
}

TEST_CASE("path increments are h^(1/alpha) times unit-time draws") {
  const StableSpec spec(1.5, 0.7, 2);
  RandomStream a(99), b(99);
  const auto inc = levy_path_increments(spec, 1e-3, 5, a);
  const double f = std::pow(1e-3, 1.0 / 1.5);
  for (const auto& dl : inc) {
    const Vec x = sample_isotropic_stable_vector(spec, b);
    CHECK(dl[0] == f * x[0]);
    CHECK(dl[1] == f * x[1]);
  }
}

TEST_CASE("draws are a pure function of the seed") {
  const StableSpec spec(1.3, 1.0, 2);
  RandomStream a(5), b(5);
  for (int i = 0; i < 100; ++i) CHECK(sample_isotropic_stable_vector(spec, a) == sample_isotropic_stable_vector(spec, b));
}

TEST_CASE("tail index estimator") {
  std::vector<double> few(999, 1.0);
  CHECK_THROWS_AS(estimate_tail_index(few), std::invalid_argument);

  RandomStream rng(21);
  const StableSpec spec(1.5, 1.0, 1);
  std::vector<double> xs(300000);
  for (double& x : xs) x = sample_stable_scalar(spec, rng);
  const auto est = estimate_tail_index(xs);
  CHECK(est.k == 3000);
  CHECK(std::abs(est.value - 1.5) < 0.1);
  CHECK_FALSE(est.at_boundary);

  std::vector<double> gauss(100000);
  for (double& x : gauss) x = rng.normal();
  CHECK(estimate_tail_index(gauss).at_boundary);
}
