#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "genbounds/pacbayes.hpp"
#include "genbounds/stats.hpp"

using namespace genbounds;

namespace {

CoupledTrajectory short_run(std::uint64_t seed, double horizon = 0.03) {
  return fixtures::run(fixtures::problem(seed), 64, seed, 1.5, horizon);
}

}  // namespace

TEST_CASE("mixture log density") {
  const double s = 0.7;
  const SmoothedOccupation one({{0.0, 0.0}}, s);
  const Vec x{0.3, -0.4};
  const double ref = -0.25 / (2 * s * s) - 2.0 * std::log(s * std::sqrt(2.0 * std::numbers::pi));
  CHECK(one.log_density(x) == Catch::Approx(ref).epsilon(1e-14));

  const SmoothedOccupation two({{0.0, 0.0}, {1.0, 0.0}}, s);
  const double p1 = std::exp(ref);
  const double p2 = std::exp(-(0.49 + 0.16) / (2 * s * s)) / (2.0 * std::numbers::pi * s * s);
  CHECK(two.log_density(x) == Catch::Approx(std::log(0.5 * (p1 + p2))).epsilon(1e-13));
  // far in the tail the log-sum-exp must stay finite
  CHECK(std::isfinite(two.log_density(Vec{1e3, 1e3})));

  CHECK_THROWS_AS(SmoothedOccupation({}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(SmoothedOccupation({{0.0}}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(SmoothedOccupation({{0.0}, {0.0, 1.0}}, 1.0), std::invalid_argument);
}

TEST_CASE("sampling from the smoothed occupation") {
  RandomStream rng(3);
  const SmoothedOccupation tight({{2.0, -1.0}}, 1e-9);
  for (int i = 0; i < 100; ++i) {
    const Vec v = sample_smoothed(tight, rng);
    CHECK(std::abs(v[0] - 2.0) < 1e-7);
    CHECK(std::abs(v[1] + 1.0) < 1e-7);
  }

  const SmoothedOccupation unit({{0.0}}, 1.0);
  std::vector<double> xs;
  for (int i = 0; i < 100000; ++i) xs.push_back(sample_smoothed(unit, rng)[0]);
  CHECK(stats::variance(xs) == Catch::Approx(1.0).epsilon(0.05));

  const SmoothedOccupation pair({{-10.0}, {10.0}}, 0.1);
  int right = 0;
  for (int i = 0; i < 100000; ++i) right += sample_smoothed(pair, rng)[0] > 0.0;
  CHECK(std::abs(right / 100000.0 - 0.5) < 0.01);
}

TEST_CASE("closed-form upper bounds") {
  const auto t = short_run(4);
  const double s = 0.05;
  CHECK(kl_upper_bound(t, s) == Catch::Approx(integral_gap(t) / (2 * s * s)).epsilon(1e-14));
  CHECK(renyi_upper_bound(t, s, 3.0) == Catch::Approx(3.0 * std::pow(geometric_gap(t), 2) / (2 * s * s)).epsilon(1e-14));
  CHECK_THROWS(kl_upper_bound(t, 0.0));
  CHECK_THROWS(renyi_upper_bound(t, s, 1.0));
}

TEST_CASE("quadrature oracle on identical and single-point mixtures") {
  const auto t = short_run(5);
  const double s = 0.05;
  const auto post = posterior_occupation(t, s);
  CHECK(std::abs(kl_oracle(post, post)) < 1e-9);
  CHECK(std::abs(renyi_oracle(post, post, 2.0)) < 1e-9);

  for (double delta : {0.01, 0.2, 0.5})
    for (double sm : {0.1, 0.3}) {
      const SmoothedOccupation p({{delta, 0.0}}, sm), q({{0.0, 0.0}}, sm);
      CHECK(std::abs(kl_oracle(p, q) - delta * delta / (2 * sm * sm)) < 1e-6);
      for (double beta : {1.5, 2.0, 4.0})
        CHECK(std::abs(renyi_oracle(p, q, beta) - beta * delta * delta / (2 * sm * sm)) < 1e-6);
    }
}

TEST_CASE("Renyi divergence approaches KL as beta decreases to one") {
  const SmoothedOccupation p({{0.0, 0.0}, {0.2, 0.1}, {0.4, -0.1}}, 0.15);
  const SmoothedOccupation q({{0.05, 0.0}, {0.1, 0.1}, {0.3, 0.05}}, 0.15);
  CHECK(std::abs(renyi_oracle(p, q, 1.0001) - kl_oracle(p, q)) < 1e-3);
}

TEST_CASE("quadrature KL agrees with a Monte Carlo estimate") {
  const SmoothedOccupation p({{0.0, 0.0}, {0.3, 0.1}, {0.5, -0.2}, {0.2, 0.4}}, 0.25);
  const SmoothedOccupation q({{0.05, 0.05}, {0.25, 0.0}, {0.6, -0.1}, {0.1, 0.3}}, 0.25);
  RandomStream rng(11);
  const int n = 2000000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec x = sample_smoothed(p, rng);
    const double r = p.log_density(x) - q.log_density(x);
    sum += r;
    sq += r * r;
  }
  const double est = sum / n;
  const double se = std::sqrt((sq / n - est * est) / n);
  const double quad = kl_oracle(p, q);
  CHECK(std::abs(est - quad) < std::max(1e-3, 4.0 * se));
}

TEST_CASE("oracle limits") {
  const SmoothedOccupation d3({{0.0, 0.0, 0.0}}, 1.0);
  CHECK_THROWS_AS(kl_oracle(d3, d3), std::invalid_argument);
  PointSet big(201, Vec{0.0});
  const SmoothedOccupation many(big, 1.0), few({{0.0}}, 1.0);
  CHECK_THROWS_AS(kl_oracle(many, few), std::invalid_argument);
  CHECK_THROWS_AS(kl_oracle(few, SmoothedOccupation({{0.0, 0.0}}, 1.0)), std::invalid_argument);
}

TEST_CASE("serial and parallel quadrature agree exactly") {
  const auto t = short_run(6);
  const auto post = posterior_occupation(t, 0.05), prior = prior_occupation(t, 0.05);
  QuadratureOptions serial;
  serial.threads = 1;
  for (int threads : {2, 4, 8}) {
    QuadratureOptions par;
    par.threads = threads;
    CHECK(kl_oracle(post, prior, par) == kl_oracle(post, prior, serial));
    CHECK(renyi_oracle(post, prior, 2.0, par) == renyi_oracle(post, prior, 2.0, serial));
  }
}

TEST_CASE("oracle stays below the closed-form bound and falls with s") {
  for (std::uint64_t seed : {7u, 8u, 9u}) {
    const auto t = short_run(seed);
    double prev = std::numeric_limits<double>::infinity();
    for (double s : {0.02, 0.05, 0.1, 0.2}) {
      const double kl = kl_oracle(posterior_occupation(t, s), prior_occupation(t, s));
      CHECK(kl <= kl_upper_bound(t, s) * (1.0 + 1e-6) + 1e-9);
      CHECK(renyi_oracle(posterior_occupation(t, s), prior_occupation(t, s), 2.0) <=
            renyi_upper_bound(t, s, 2.0) * (1.0 + 1e-6) + 1e-9);
      CHECK(kl <= prev);
      prev = kl;
    }
  }
}

TEST_CASE("PAC-Bayes reports on a coupled run") {
  const LearningProblem p = fixtures::problem(10);
  const Dataset full = full_support_dataset(p, 4);
  const auto t = integrate_coupled(p, full, fixtures::sde(1.5, 3));
  BoundInputs in = inputs_from_problem(p, full.size(), 1.0);
  in.smoothing = 0.05;
  in.lambda = std::sqrt(static_cast<double>(full.size()));
  RandomStream rng(1);
  const BoundReport r5 = eval_thm5(t, p, full, in, 1000, rng);
  CHECK(r5.lhs == 0.0);
  CHECK(r5.holds);
  CHECK(r5.terms[0].second == 0.0);
  const BoundReport r6 = eval_thm6(t, p, full, in, rng);
  CHECK(r6.lhs == 0.0);
  CHECK(r6.holds);
  CHECK_THROWS_AS(eval_thm5(t, p, full, in, 999, rng), std::invalid_argument);
}
