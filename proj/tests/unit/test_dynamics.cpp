#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "fixtures.hpp"
#include "genbounds/bounds.hpp"
#include "genbounds/dynamics.hpp"

using namespace genbounds;

namespace {

CoupledTrajectory synthetic(const std::vector<double>& gaps, double h = 0.1) {
  CoupledTrajectory t;
  t.step_h = h;
  for (std::size_t k = 0; k < gaps.size(); ++k) {
    t.times.push_back(static_cast<double>(k) * h);
    t.w.push_back({gaps[k], 0.0});
    t.y.push_back({0.0, 0.0});
    if (k + 1 < gaps.size()) t.increments.push_back({0.0, 0.0});
  }
  return t;
}

}  // namespace

TEST_CASE("step counts round T / h") {
  CHECK(step_count(fixtures::sde(1.5, 1, 1.0, 1e-3)) == 1000);
  CHECK(step_count(fixtures::sde(1.5, 1, 0.3, 0.1)) == 3);
  CHECK(step_count(fixtures::sde(1.5, 1, 0.0015, 1e-3)) == 2);
}

TEST_CASE("step size sanity limit") {
  const LearningProblem p = fixtures::problem();
  RandomStream rng(1);
  const Dataset d = sample_dataset(p, 64, rng);
  SdeConfig c = fixtures::sde(1.5, 3, 1.0, 0.05);
  CHECK_THROWS_AS(integrate_coupled(p, d, c), std::invalid_argument);
  c.allow_large_step = true;
  CHECK_NOTHROW(integrate_coupled(p, d, c));
  c.step_h = -1.0;
  CHECK_THROWS_AS(integrate_coupled(p, d, c), std::invalid_argument);
}

TEST_CASE("a short horizon is rounded up and flagged") {
  const LearningProblem p = fixtures::problem();
  RandomStream rng(1);
  const Dataset d = sample_dataset(p, 64, rng);
  const auto t = integrate_coupled(p, d, fixtures::sde(1.5, 3, 0.0015, 1e-3));
  CHECK(t.steps() == 2);
  CHECK(t.meta.horizon_adjusted);
}

TEST_CASE("full-support datasets make the coupled paths identical") {
  const LearningProblem p = fixtures::problem(5);
  const Dataset d = full_support_dataset(p, 4);
  for (double alpha : {1.1, 1.6, 2.0})
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      SdeConfig c = fixtures::sde(alpha, seed, 2.0);
      c.init.kind = InitSpec::Kind::kGaussian;
      c.init.radius = 1.0;
      const auto t = integrate_coupled(p, d, c);
      CHECK(t.w == t.y);
      CHECK(geometric_gap(t) == 0.0);
    }
}

TEST_CASE("runs are reproducible and share their increments") {
  const LearningProblem p = fixtures::problem(6);
  const auto a = fixtures::run(p, 100, 9);
  const auto b = fixtures::run(p, 100, 9);
  CHECK(a.w == b.w);
  CHECK(a.y == b.y);
  CHECK(a.increments.size() + 1 == a.w.size());

  // undo the drift: both paths must have moved by the same increment
  RandomStream rng(9);
  const Dataset d = sample_dataset(p, 100, rng);
  Vec ge(2), gp(2);
  for (std::size_t k = 0; k < a.steps(); k += 97) {
    p.weighted_gradient(a.w[k], d.weights(), ge);
    p.weighted_gradient(a.y[k], p.probs(), gp);
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(a.w[k + 1][j] - (a.w[k][j] - a.step_h * ge[j]) == Catch::Approx(a.increments[k][j]).margin(1e-12));
      CHECK(a.y[k + 1][j] - (a.y[k][j] - a.step_h * gp[j]) == Catch::Approx(a.increments[k][j]).margin(1e-12));
    }
  }
}

TEST_CASE("non-finite states abort with the offending step") {
  const LearningProblem p = fixtures::problem();
  const Dataset d = full_support_dataset(p, 1);
  PointSet inc = {{0.1, 0.1}, {std::numeric_limits<double>::infinity(), 0.0}, {0.0, 0.0}};
  try {
    integrate_coupled(p, d, 1e-3, Vec{0.0, 0.0}, inc);
    FAIL("expected NonFiniteState");
  } catch (const NonFiniteState& e) {
    CHECK(e.step() == 2);
  }
}

TEST_CASE("coarsened increments sum consecutive pairs") {
  const PointSet fine = {{1.0}, {2.0}, {3.0}, {4.5}};
  CHECK(coarsen_increments(fine) == PointSet{{3.0}, {7.5}});
  CHECK_THROWS_AS(coarsen_increments(PointSet{{1.0}}), std::invalid_argument);
}

TEST_CASE("gap functionals on synthetic paths") {
  CHECK(geometric_gap(synthetic({0.0, 0.0, 0.0})) == 0.0);
  CHECK(integral_gap(synthetic({0.0, 0.0, 0.0})) == 0.0);
  const auto constant = synthetic({0.7, 0.7, 0.7, 0.7});
  CHECK(integral_gap(constant) == Catch::Approx(0.49));
  CHECK(geometric_gap(constant) == Catch::Approx(0.7));
  // the last grid point enters the sup but not the left-endpoint average
  const auto tail = synthetic({0.0, 0.0, 2.0});
  CHECK(geometric_gap(tail) == 2.0);
  CHECK(integral_gap(tail) == 0.0);
}

TEST_CASE("integral gap never exceeds the squared geometric gap") {
  const LearningProblem p = fixtures::problem(14);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto t = fixtures::run(p, 64, 100 + s, 1.3, 0.5);
    CHECK(integral_gap(t) <= std::pow(geometric_gap(t), 2) * (1.0 + 1e-12));
  }
}

TEST_CASE("Hausdorff distance") {
  const PointSet a = {{0.0, 0.0}};
  CHECK(hausdorff_distance(a, a) == 0.0);
  CHECK(hausdorff_distance(a, PointSet{{1.0, 0.0}}) == 1.0);
  CHECK(hausdorff_distance(PointSet{{0.0}, {5.0}}, PointSet{{0.0}}) == 5.0);
  CHECK_THROWS_AS(hausdorff_distance(a, PointSet{}), std::invalid_argument);
}

TEST_CASE("worst-case gap and gradient deviation") {
  const LearningProblem p = fixtures::problem(15);
  const Dataset full = full_support_dataset(p, 2);
  const auto t0 = integrate_coupled(p, full, fixtures::sde(1.5, 4));
  CHECK(worst_case_gap(t0, p, full) == 0.0);
  CHECK(g_nabla(t0, p, full) == 0.0);

  RandomStream rng(8);
  const Dataset d = sample_dataset(p, 50, rng);
  const auto t = integrate_coupled(p, d, fixtures::sde(1.5, 4));
  double brute = -std::numeric_limits<double>::infinity();
  for (const auto& w : t.w) brute = std::max(brute, risk(w, p) - risk(w, p, &d));
  CHECK(worst_case_gap(t, p, d) == brute);
  CHECK(g_nabla(t, p, d) <= 2.0 * p.constants().lipschitz);
  CHECK(g_nabla_both(t, p, d) >= g_nabla(t, p, d));
}

TEST_CASE("geometric gap is non-decreasing in T on a fixed noise path") {
  const LearningProblem p = fixtures::problem(16);
  RandomStream rng(3);
  const Dataset d = sample_dataset(p, 40, rng);
  double prev = 0.0;
  std::size_t prev_steps = 0;
  PointSet prev_inc;
  for (double T : {0.25, 0.5, 1.0, 2.0}) {
    const auto t = integrate_coupled(p, d, fixtures::sde(1.4, 77, T));
    // longer horizons extend the same increment sequence
    REQUIRE(t.steps() > prev_steps);
    for (std::size_t k = 0; k < prev_steps; ++k) REQUIRE(t.increments[k] == prev_inc[k]);
    CHECK(geometric_gap(t) >= prev);
    prev = geometric_gap(t);
    prev_steps = t.steps();
    prev_inc = t.increments;
  }
}

TEST_CASE("median step displacement") {
  CoupledTrajectory t;
  t.w = {{0.0}, {1.0}, {3.0}, {6.0}};
  CHECK(median_step_displacement(t) == 2.0);
  t.w.push_back({7.0});
  CHECK(median_step_displacement(t) == 1.5);
  t.w = {{0.0}};
  CHECK_THROWS(median_step_displacement(t));
}

TEST_CASE("pathwise Gronwall envelope") {
  const LearningProblem p = fixtures::problem(17);
  const Dataset full = full_support_dataset(p, 4);
  const auto trivial = integrate_coupled(p, full, fixtures::sde(1.5, 2));
  const auto r0 = gronwall_pathwise_check(trivial, p, full);
  CHECK(r0.holds);
  CHECK(r0.g == 0.0);
  CHECK(r0.max_excess <= 0.0);

  for (std::uint64_t s = 0; s < 10; ++s) {
    RandomStream rng(200 + s);
    const Dataset d = sample_dataset(p, 256, rng);
    const auto t = integrate_coupled(p, d, fixtures::sde(s % 2 ? 2.0 : 1.5, 300 + s));
    const auto r = gronwall_pathwise_check(t, p, d);
    CHECK(r.holds);
    CHECK(r.max_excess <= 1e-12);
  }
}

TEST_CASE("Gronwall slack shrinks with the step size") {
  const LearningProblem p = fixtures::problem(18);
  RandomStream rng(5);
  const Dataset d = sample_dataset(p, 256, rng);
  SdeConfig fine = fixtures::sde(1.5, 9, 1.0, 5e-4);
  const PointSet inc = draw_increments(fine, 2);
  const Vec z0(2, 0.0);
  const auto tf = integrate_coupled(p, d, 5e-4, z0, inc);
  const auto tc = integrate_coupled(p, d, 1e-3, z0, coarsen_increments(inc));
  const double sf = gronwall_pathwise_check(tf, p, d).discretization_slack;
  const double sc = gronwall_pathwise_check(tc, p, d).discretization_slack;
  CHECK(sc / sf >= 1.5);
}
