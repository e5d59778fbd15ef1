#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include <regkit/finitediff.hpp>

#include "oracle_helpers.hpp"

using namespace regkit;

namespace {

constexpr double kHalfPi = 1.5707963267948966;

Orbit exp_orbit() {
  return scalar_orbit([](double t) { return std::exp(t); },
                      [](int, double t) { return std::exp(t); });
}

Orbit sin_orbit() {
  return scalar_orbit([](double t) { return std::sin(t); },
                      [](int k, double t) { return std::sin(t + k * kHalfPi); });
}

}  // namespace

TEST_CASE("difference quotient basics") {
  auto constant = scalar_orbit([](double) { return 3.25; });
  for (int k : {1, 2, 3, 5}) {
    std::vector<double> h;
    for (int j = 0; j < k; ++j) h.push_back(0.09 - 0.013 * j);
    const auto box = make_step_box(constant, k, 0.1, 2.0, h);
    REQUIRE(diff_quotient(constant, box, DiffStrategy::SubsetSum).norm() <
            1e-9);
  }

  // Monomial of matching order: the quotient is identically k!.
  for (int k : {1, 2, 3, 4}) {
    auto mono = scalar_orbit(
        [k](double t) { return std::pow(t, k); },
        [k](int order, double t) {
          double c = 1.0;
          for (int q = 0; q < order; ++q) c *= (k - q);
          return order > k ? 0.0 : c * std::pow(t, k - order);
        });
    std::vector<double> h;
    for (int j = 0; j < k; ++j) h.push_back((j % 2 ? -1 : 1) * (0.11 + 0.02 * j));
    const auto box = make_step_box(mono, k, 0.2, 3.0, h);
    const double expect = oracle::factorial(k);
    for (auto strat :
         {DiffStrategy::SubsetSum, DiffStrategy::Nested, DiffStrategy::Integral}) {
      const Vector d = diff_quotient(mono, box, strat);
      REQUIRE(d[0].real() == Catch::Approx(expect).epsilon(1e-9));
    }
  }

  auto fexp = exp_orbit();
  const auto box = make_step_box(fexp, 2, 0.1, 1.0, {0.1, -0.1});
  const double expect =
      (std::exp(1.1) + std::exp(0.9) - 2.0 * std::exp(1.0)) / 0.01;
  const Vector d = diff_quotient(fexp, box, DiffStrategy::SubsetSum);
  REQUIRE(d[0].real() == Catch::Approx(expect).epsilon(1e-12));
}

TEST_CASE("quotient equals the brute-force subset enumeration") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> hdist(-0.2, 0.2);
  auto f = exp_orbit();
  for (int k = 1; k <= 8; ++k) {
    std::vector<double> h(static_cast<std::size_t>(k));
    for (auto& x : h)
      do { x = hdist(rng); } while (std::abs(x) < 0.02);
    const auto box = make_step_box(f, k, 0.2, 3.0, h);
    const Complex brute = oracle::brute_subset_quotient(
        [](double t) { return std::exp(t); }, box.t, box.h);
    const Vector d = diff_quotient(f, box, DiffStrategy::SubsetSum);
    REQUIRE(std::abs(d[0] - brute) <= 1e-12 * std::abs(brute));
  }
}

TEST_CASE("strategy equivalence on random smooth inputs") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> hdist(-0.15, 0.15);
  std::uniform_real_distribution<double> tdist(2.0, 5.0);
  auto fexp = exp_orbit();
  auto fsin = sin_orbit();
  for (const Orbit* f : {&fexp, &fsin}) {
    for (int k = 1; k <= 10; ++k) {
      std::vector<double> h(static_cast<std::size_t>(k));
      for (auto& x : h)
        do { x = hdist(rng); } while (std::abs(x) < 0.01);
      const auto box = make_step_box(*f, k, 0.15, tdist(rng) + k * 0.2, h);
      const Vector a = diff_quotient(*f, box, DiffStrategy::SubsetSum);
      const Vector b = diff_quotient(*f, box, DiffStrategy::Nested);
      REQUIRE((a - b).norm() <= 1e-12 * std::max(a.norm(), 1e-6));
      if (k <= 3) {
        const Vector c = diff_quotient(*f, box, DiffStrategy::Integral, 32);
        REQUIRE((a - c).norm() <= 1e-8 * std::max(a.norm(), 1.0));
      }
    }
  }
}

TEST_CASE("quotient is invariant under permutations of the increments") {
  auto f = sin_orbit();
  const std::vector<double> h{0.11, -0.07, 0.05};
  const std::vector<double> perm{-0.07, 0.05, 0.11};
  const auto b1 = make_step_box(f, 3, 0.15, 2.0, h);
  const auto b2 = make_step_box(f, 3, 0.15, 2.0, perm);
  const Vector d1 = diff_quotient(f, b1, DiffStrategy::SubsetSum);
  const Vector d2 = diff_quotient(f, b2, DiffStrategy::SubsetSum);
  REQUIRE(d1[0] == d2[0]);  // canonical increment order makes this bit-exact
}

TEST_CASE("polynomial annihilation below the quotient order") {
  auto poly = scalar_orbit([](double t) { return 2.0 + t - 3.0 * t * t; });
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> hdist(-0.2, 0.2);
  for (int k = 3; k <= 6; ++k) {
    std::vector<double> h(static_cast<std::size_t>(k));
    for (auto& x : h)
      do { x = hdist(rng); } while (std::abs(x) < 5e-3);
    const auto box = make_step_box(poly, k, 0.2, 4.0, h);
    const Vector d = diff_quotient(poly, box, DiffStrategy::SubsetSum);
    REQUIRE(d.norm() <= 1e-9 * 40.0);  // scale ~ sup |f| near t
  }
}

TEST_CASE("equal-step weights are the alternating binomials") {
  REQUIRE(equal_step_weights(1) == std::vector<double>{-1, 1});
  REQUIRE(equal_step_weights(2) == std::vector<double>{1, -2, 1});
  REQUIRE(equal_step_weights(4) == std::vector<double>{1, -4, 6, -4, 1});

  // Subset sum at equal steps collapses onto the stencil.
  auto f = exp_orbit();
  for (int k = 1; k <= 6; ++k) {
    const double h = 0.08;
    std::vector<double> hs(static_cast<std::size_t>(k), h);
    const auto box = make_step_box(f, k, 0.1, 2.0, hs);
    const Vector a = diff_quotient(f, box, DiffStrategy::SubsetSum);
    const Vector b = forward_stencil(f, 2.0, k, h);
    REQUIRE((a - b).norm() <= 1e-12 * std::max(1.0, a.norm()));
  }
}

TEST_CASE("step box validation") {
  auto root = scalar_orbit([](double t) { return std::sqrt(t); });
  REQUIRE_THROWS_AS(make_step_box(root, 1, 0.5, 0.5, {0.25}), ConfigError);
  auto f = exp_orbit();
  REQUIRE_THROWS_AS(make_step_box(f, 1, 0.1, 1.0, {0.0}), ConfigError);
  REQUIRE_THROWS_AS(make_step_box(f, 1, 0.1, 1.0, {0.2}), ConfigError);
  REQUIRE_THROWS_AS(make_step_box(f, 2, 0.1, 1.0, {0.05}), ConfigError);
  REQUIRE_THROWS_AS(make_step_box(f, 25, 0.1, 30.0,
                                  std::vector<double>(25, 0.05)),
                    ConfigError);
}

TEST_CASE("derivative estimation with error control") {
  auto fsin = sin_orbit();
  const auto third = derivative_estimate(fsin, 0.0, 3, 0.4, 6);
  REQUIRE_FALSE(third.inconclusive);
  REQUIRE(third.value[0].real() == Catch::Approx(-1.0).margin(1e-6));

  auto quadratic = scalar_orbit([](double t) { return t * t; });
  const auto second = derivative_estimate(quadratic, 5.0, 2, 0.5, 4);
  REQUIRE_FALSE(second.inconclusive);
  REQUIRE(second.value[0].real() == Catch::Approx(2.0).epsilon(1e-10));

  auto kink = scalar_orbit([](double t) { return std::abs(t - 1.0); });
  const auto bad = derivative_estimate(kink, 1.0, 1, 0.25, 4);
  REQUIRE(bad.inconclusive);

  REQUIRE_THROWS_AS(derivative_estimate(fsin, 1.0, 1, 0.25, 1), ConfigError);
}

TEST_CASE("estimates agree with oracles within their own error bars") {
  // The reported error is the last-two-level discrepancy; once extrapolation
  // reaches the rounding floor the true residual can exceed it by a small
  // factor, so the bound is validated at 3x.
  auto fexp = exp_orbit();
  auto fsin = sin_orbit();
  for (const Orbit* f : {&fexp, &fsin}) {
    for (int k = 1; k <= 4; ++k) {
      for (double t : {1.7, 3.0, 4.2}) {
        const auto est = derivative_estimate(*f, t, k, 0.3, 6);
        REQUIRE_FALSE(est.inconclusive);
        const Vector exact = f->deriv(k, t);
        REQUIRE((est.value - exact).norm() <=
                3.0 * est.error + 1e-10 * std::max(1.0, exact.norm()));
      }
    }
  }
}

TEST_CASE("difference-quotient seminorm") {
  auto quadratic = scalar_orbit([](double t) { return t * t; });
  const auto flat = diff_seminorm(quadratic, 2.0, 2, 0.3, 64);
  REQUIRE(flat.is_finite());
  // Near-axis samples divide double-precision function values by tiny
  // products of increments, so the sup carries a small upward noise bias.
  REQUIRE(flat.value == Catch::Approx(2.0).margin(1e-6));

  auto fexp = exp_orbit();
  const auto edge = diff_seminorm(fexp, 1.0, 1, 0.5, 128);
  REQUIRE(edge.is_finite());
  REQUIRE(edge.value ==
          Catch::Approx((std::exp(1.5) - std::exp(1.0)) / 0.5).epsilon(1e-9));

  auto root = scalar_orbit([](double t) { return std::sqrt(t); });
  REQUIRE_THROWS_AS(diff_seminorm(root, 0.25, 1, 0.25, 32), ConfigError);
}
