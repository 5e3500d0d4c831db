#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "genbounds/bounds.hpp"
#include "genbounds/random.hpp"
#include "bound_cases.hpp"
#include "hp_oracle.hpp"

using namespace genbounds;

namespace {

BoundInputs base_inputs() {
  BoundInputs in;
  in.n = 10000;
  in.zeta = 0.05;
  in.gamma = 1.5;
  in.lipschitz = 0.25;
  in.smoothness = 0.0962;
  in.sigma = 0.5;
  in.coord_sigma = 0.35;
  in.horizon = 1.0;
  in.dim = 2;
  in.smoothing = 0.05;
  in.lambda = 100.0;
  in.beta = 2.0;
  in.dissipativity_m = 0.4;
  in.dissipativity_k = 0.2;
  return in;
}

double sum(const Terms& t) {
  double s = 0.0;
  for (const auto& [n, v] : t) s += v;
  return s;
}

double term(const Terms& t, const std::string& name) {
  for (const auto& [n, v] : t)
    if (n == name) return v;
  FAIL("missing term " << name);
  return 0.0;
}

}  // namespace

TEST_CASE("expm1 factor") {
  CHECK(expm1_factor(0.0, 3.0) == 3.0);
  CHECK(expm1_factor(1.0, 1.0) == Catch::Approx(std::numbers::e - 1.0).epsilon(1e-15));
  CHECK(oracle::rel_err(expm1_factor(1e-12, 1.0), oracle::expm1_factor(oracle::hp("1e-12"), 1)) < 1e-10);
  CHECK(oracle::rel_err(expm1_factor(1e-12, 7.5), oracle::expm1_factor(oracle::H(1e-12), oracle::H(7.5))) < 1e-14);
  CHECK_THROWS(expm1_factor(-1.0, 1.0));
  CHECK_THROWS(expm1_factor(1.0, 0.0));
}

TEST_CASE("rhs_thm2") {
  BoundInputs in = base_inputs();
  const BoundReport r = rhs_thm2(0.1, in);
  CHECK(oracle::rel_err(r.rhs, oracle::thm2(0.1, in)) < 1e-12);
  CHECK(r.theorem == "2");

  // sigma scales only the covering term
  BoundInputs in2 = in;
  in2.sigma *= 2.0;
  const Terms t1 = thm2_terms(0.1, in), t2 = thm2_terms(0.1, in2);
  CHECK(term(t2, "covering") == Catch::Approx(2.0 * term(t1, "covering")));
  CHECK(term(t2, "geometric") == term(t1, "geometric"));
  CHECK(term(t2, "sampling") == term(t1, "sampling"));

  // no gap, no dimension, zeta -> 1: only the sampling term survives
  BoundInputs lim = in;
  lim.gamma = 0.0;
  lim.zeta = 1.0 - 1e-15;
  CHECK(rhs_thm2(0.0, lim).rhs == Catch::Approx(2.0 / 100.0).epsilon(1e-6));

  BoundInputs small = in;
  small.n = 16;  // L sqrt(n) = 1
  CHECK_THROWS_WITH(rhs_thm2(0.0, small), Catch::Matchers::ContainsSubstring("n too small for covering schedule"));
  small.n = 1;
  CHECK_THROWS(rhs_thm2(0.0, small));
}

TEST_CASE("rhs_lemma16 variants") {
  const BoundInputs in = base_inputs();
  for (Variant v : {Variant::kLipschitz, Variant::kCoordinates})
    CHECK(oracle::rel_err(rhs_lemma16(in, v), oracle::lemma16(in, v)) < 1e-12);

  BoundInputs lim = in;
  lim.gamma = 0.0;
  lim.zeta = 1.0 - 1e-15;
  const double n = static_cast<double>(lim.n);
  CHECK(rhs_lemma16(lim, Variant::kLipschitz) ==
        Catch::Approx(2.0 / std::sqrt(n) + lim.lipschitz * std::sqrt(2.0 / n)).epsilon(1e-6));

  // the coordinate variant sees d only through log(2d / zeta)
  BoundInputs d1 = in, d4 = in;
  d1.dim = 1;
  d4.dim = 4;
  const auto inner = [&](const BoundInputs& x) {
    const double c = term(lemma16_terms(x, Variant::kCoordinates), "covering") / (2.0 * x.coord_sigma);
    return c * c * 2.0 * n;
  };
  CHECK(inner(d4) - inner(d1) == Catch::Approx(std::log(4.0)).epsilon(1e-10));
}

TEST_CASE("rhs_thm3") {
  BoundInputs in = base_inputs();
  for (Variant v : {Variant::kLipschitz, Variant::kCoordinates}) {
    CHECK(oracle::rel_err(rhs_thm3(in, v), oracle::thm3(in, v)) < 1e-12);
    CHECK(rhs_thm3(in, v) == Catch::Approx(expm1_factor(in.smoothness, in.horizon) * rhs_lemma16(in, v)));
  }
  BoundInputs tiny = in;
  tiny.horizon = 1e-12;
  CHECK(rhs_thm3(tiny, Variant::kLipschitz) < 1e-11);
  // M = 0 has no admissible covering scale 1/(M sqrt n)
  BoundInputs flat = in;
  flat.smoothness = 0.0;
  CHECK_THROWS_AS(rhs_thm3(flat, Variant::kLipschitz), std::domain_error);
}

TEST_CASE("rhs_thm4 constants") {
  BoundInputs in = base_inputs();
  in.lipschitz = 1.0;
  const BoundReport r1 = rhs_thm4(in, Variant::kLipschitz);
  CHECK(term(r1.constants, "C1") == Catch::Approx(2.0 + std::numbers::sqrt2));
  CHECK(term(r1.constants, "C0") == 1.0);
  CHECK(term(r1.constants, "C3") == 1.0);
  CHECK(oracle::rel_err(r1.rhs, oracle::thm4(in, Variant::kLipschitz)) < 1e-12);

  BoundInputs z = in;
  z.coord_sigma = 0.0;
  z.sigma = 0.0;
  const BoundReport r2 = rhs_thm4(z, Variant::kCoordinates);
  CHECK(term(r2.constants, "C2") == 0.0);
  CHECK(term(r2.constants, "C3") == 2.0 * static_cast<double>(z.dim));
  const double sn = std::sqrt(static_cast<double>(z.n));
  CHECK(r2.rhs == Catch::Approx(2.0 / sn + 2.0 * z.lipschitz / sn * 2.0 * expm1_factor(z.smoothness, z.horizon)));
}

TEST_CASE("rhs_thm13") {
  BoundInputs in = base_inputs();
  CHECK(oracle::rel_err(rhs_thm13(in), oracle::thm13(in)) < 1e-12);

  BoundInputs lim = in;
  lim.dissipativity_k = 0.0;
  lim.n = 1000000000;
  CHECK(rhs_thm13(lim) < 1e-6);

  BoundInputs half = in;
  half.dissipativity_m = *in.dissipativity_m / 2.0;
  const Terms a = thm13_terms(in), b = thm13_terms(half);
  CHECK(term(b, "dissipative") == Catch::Approx(2.0 * term(a, "dissipative")));
  CHECK(term(b, "sampling") + term(b, "covering") == Catch::Approx(4.0 * (term(a, "sampling") + term(a, "covering"))));

  BoundInputs none = in;
  none.dissipativity_m.reset();
  CHECK_THROWS_WITH(rhs_thm13(none), Catch::Matchers::ContainsSubstring("co-dissipativity certificate required"));
  none.dissipativity_m = 0.0;
  CHECK_THROWS(rhs_thm13(none));
}

TEST_CASE("PAC-Bayes right-hand sides") {
  BoundInputs in = base_inputs();
  CHECK(oracle::rel_err(sum(thm5_terms(0.01, in)), oracle::thm5(0.01, in)) < 1e-12);
  CHECK(oracle::rel_err(sum(thm6_terms(0.07, in)), oracle::thm6(0.07, in)) < 1e-12);

  // lambda = sqrt(n) turns the sub-Gaussian term into sigma^2 / 2
  in.lambda = std::sqrt(static_cast<double>(in.n));
  CHECK(term(thm5_terms(0.0, in), "sub_gaussian") == Catch::Approx(in.sigma * in.sigma / 2.0));

  // beta -> infinity: confidence prefactor -> 2, (beta/(beta-1))^2 -> 1
  BoundInputs big = in;
  big.beta = 1e9;
  CHECK(term(thm6_terms(0.0, big), "confidence") == Catch::Approx(2.0 * std::log(2.0 / big.zeta)).epsilon(1e-8));
  CHECK(term(thm6_terms(0.0, big), "sub_gaussian") ==
        Catch::Approx(big.lambda * big.lambda * big.sigma * big.sigma / (2.0 * static_cast<double>(big.n))).epsilon(1e-8));
}

TEST_CASE("optimal lambda minimizes a / lambda + b lambda") {
  RandomStream rng(4);
  for (int i = 0; i < 50; ++i) {
    const double a = rng.uniform_open(0.01, 50.0), b = rng.uniform_open(1e-5, 1.0);
    // bisection on the derivative b - a / lambda^2
    double lo = 1e-8, hi = 1e8;
    for (int it = 0; it < 400; ++it) {
      const double mid = std::sqrt(lo * hi);
      (b - a / (mid * mid) < 0.0 ? lo : hi) = mid;
    }
    CHECK(std::abs(optimal_lambda(a, b) - lo) <= 1e-8 * lo);
  }
  CHECK_THROWS(optimal_lambda(0.0, 1.0));
}

TEST_CASE("reports sum their terms and flag violations") {
  const BoundInputs in = base_inputs();
  const BoundReport low = rhs_thm4(in, Variant::kLipschitz, 0.0);
  CHECK(std::abs(low.rhs - sum(low.terms)) <= 1e-12 * low.rhs);
  CHECK(low.holds);
  const BoundReport high = rhs_thm4(in, Variant::kLipschitz, low.rhs * 1.01);
  CHECK_FALSE(high.holds);
  CHECK(rhs_thm4(in, Variant::kLipschitz, low.rhs).holds);
  bool has_caveat = false;
  for (const auto& c : low.caveats) has_caveat |= c == "asymptotic-N";
  CHECK(has_caveat);
}

TEST_CASE("all evaluators agree with the 50-digit oracle on random inputs") {
  RandomStream rng(2024);
  for (int i = 0; i < 100; ++i) {
    const BoundInputs in = fixtures::random_bound_inputs(rng);
    const double gap = rng.uniform_open(0.0, 1.0);
    CHECK(oracle::rel_err(rhs_thm2(gap, in).rhs, oracle::thm2(gap, in)) < 1e-10);
    for (Variant v : {Variant::kLipschitz, Variant::kCoordinates}) {
      CHECK(oracle::rel_err(rhs_lemma16(in, v), oracle::lemma16(in, v)) < 1e-10);
      CHECK(oracle::rel_err(rhs_thm3(in, v), oracle::thm3(in, v)) < 1e-10);
      CHECK(oracle::rel_err(rhs_thm4(in, v).rhs, oracle::thm4(in, v)) < 1e-10);
    }
    CHECK(oracle::rel_err(rhs_thm13(in), oracle::thm13(in)) < 1e-10);
    CHECK(oracle::rel_err(sum(thm5_terms(gap * gap, in)), oracle::thm5(gap * gap, in)) < 1e-10);
    CHECK(oracle::rel_err(sum(thm6_terms(gap, in)), oracle::thm6(gap, in)) < 1e-10);
  }
}

TEST_CASE("right-hand sides move in the documented directions") {
  RandomStream rng(77);
  for (int i = 0; i < 100; ++i) {
    BoundInputs in = fixtures::random_bound_inputs(rng);
    in.gamma = std::max(in.gamma, 0.1);
    in.sigma = std::max(in.sigma, 0.1);
    in.coord_sigma = std::max(in.coord_sigma, 0.1);
    const auto all = [](const BoundInputs& x) {
      return std::vector<double>{rhs_thm2(0.05, x).rhs, rhs_thm3(x, Variant::kLipschitz), rhs_thm3(x, Variant::kCoordinates),
                                 rhs_thm4(x, Variant::kLipschitz).rhs, rhs_thm4(x, Variant::kCoordinates).rhs,
                                 rhs_thm13(x)};
    };
    const auto base = all(in);
    BoundInputs more_n = in, more_gamma = in, less_zeta = in, more_t = in;
    more_n.n += 1 + in.n / 10;
    more_gamma.gamma += 0.01;
    less_zeta.zeta *= 0.9;
    more_t.horizon *= 1.1;
    const auto vn = all(more_n), vg = all(more_gamma), vz = all(less_zeta), vt = all(more_t);
    for (std::size_t k = 0; k < base.size(); ++k) {
      CHECK(vn[k] < base[k]);
      CHECK(vg[k] > base[k]);
      CHECK(vz[k] > base[k]);
    }
    // the horizon enters theorems 3 and 4 only
    for (std::size_t k : {1u, 2u, 3u, 4u}) CHECK(vt[k] > base[k]);
  }
}

TEST_CASE("input validation") {
  BoundInputs in = base_inputs();
  in.zeta = 1.5;
  CHECK_THROWS_AS(validate(in), std::invalid_argument);
  in = base_inputs();
  in.gamma = 2.6;
  CHECK_THROWS_AS(validate(in), std::invalid_argument);
  in = base_inputs();
  in.beta = 1.0;
  CHECK_THROWS_AS(validate(in), std::invalid_argument);
  CHECK(variant_from_string(to_string(Variant::kCoordinates)) == Variant::kCoordinates);
}
