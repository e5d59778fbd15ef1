#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include <regkit/finitediff.hpp>
#include <regkit/gallery.hpp>
#include <regkit/kernel.hpp>

#include "oracle_helpers.hpp"

using namespace regkit;

TEST_CASE("verdict trace is non-decreasing under refinement") {
  // Synthetic sup values that wobble; the driver's running max must still
  // produce a monotone trace.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RefinementPolicy pol;
  pol.max_levels = 8;
  const auto v = refine_to_verdict(pol, 16.0, [&](int level, double) {
    return 2.0 + 0.3 * u(rng) - 0.05 * level;
  });
  for (std::size_t i = 1; i < v.refinement_trace.size(); ++i)
    REQUIRE(v.refinement_trace[i].second >= v.refinement_trace[i - 1].second);
}

TEST_CASE("verdict policy: stable sups finish finite, growth diverges") {
  RefinementPolicy pol;
  const auto fin = refine_to_verdict(pol, 8.0, [](int, double) { return 3.5; });
  REQUIRE(fin.is_finite());
  REQUIRE(fin.value == Catch::Approx(3.5));

  const auto div =
      refine_to_verdict(pol, 8.0, [](int, double res) { return res; });
  REQUIRE(div.is_diverging());
  REQUIRE(div.growth_exponent == Catch::Approx(1.0).margin(0.05));

  RefinementPolicy tight;
  tight.max_levels = 6;
  const auto inc = refine_to_verdict(
      tight, 8.0, [](int, double res) { return 1.0 + 0.01 * std::log(res); });
  REQUIRE(inc.is_inconclusive());
}

TEST_CASE("eval_orbit on the example matrix") {
  const auto F = make_example(MatrixPolyParams{});
  Vector x(2);
  x << Complex(0.0), Complex(1.0);
  const Vector y = eval_orbit(F, x, 2.0);  // [[4,2],[0,0]] . (0,1)
  REQUIRE(y[0].real() == Catch::Approx(2.0));
  REQUIRE(std::abs(y[1]) < 1e-15);
}

TEST_CASE("eval_orbit trivial cases") {
  OperatorFunction id;
  id.dim = 3;
  id.eval = [](double) { return Operator::identity(3); };
  Vector x(3);
  x << Complex(1.0, 2.0), Complex(-0.5), Complex(0.0, 1.0);
  REQUIRE((eval_orbit(id, x, 17.0) - x).norm() == 0.0);

  DiagonalAnalyticParams p;
  p.lambdas = {Complex(-1.0, 0.0)};
  const auto F = make_example(p);
  Vector one(1);
  one << Complex(1.0);
  REQUIRE((eval_orbit(F, one, 0.0) - one).norm() < 1e-15);

  Vector bad(2);
  bad << Complex(1.0), Complex(1.0);
  REQUIRE_THROWS_AS(eval_orbit(F, bad, 1.0), ConfigError);
}

TEST_CASE("eval_orbit is linear in the vector") {
  DiagonalAnalyticParams p;
  p.lambdas = {Complex(-1.0, 0.5), Complex(-2.0, -1.0), Complex(-0.5, 3.0)};
  const auto F = make_example(p);
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Vector x(3), y(3);
    for (int i = 0; i < 3; ++i) {
      x[i] = Complex(g(rng), g(rng));
      y[i] = Complex(g(rng), g(rng));
    }
    const Complex a(g(rng), g(rng)), b(g(rng), g(rng));
    const double t = std::abs(g(rng));
    const Vector lhs = eval_orbit(F, a * x + b * y, t);
    const Vector rhs = a * eval_orbit(F, x, t) + b * eval_orbit(F, y, t);
    REQUIRE((lhs - rhs).norm() <= 1e-12 * (lhs.norm() + 1.0));
  }
}

TEST_CASE("assemble_derivative_operator from oracles") {
  DiagonalAnalyticParams p;
  p.lambdas = {Complex(-1.0), Complex(-2.0)};
  const auto F = make_example(p);
  const Operator gen = assemble_derivative_operator(F, 1, 0.0);
  REQUIRE(std::abs(gen.diagonal_entries()[0] - Complex(-1.0)) < 1e-14);
  REQUIRE(std::abs(gen.diagonal_entries()[1] - Complex(-2.0)) < 1e-14);

  const auto M = make_example(MatrixPolyParams{});
  const Matrix d2 = assemble_derivative_operator(M, 2, 1.7).to_matrix();
  Matrix expect(2, 2);
  expect << 2.0, 0.0, 0.0, 0.0;
  REQUIRE((d2 - expect).norm() < 1e-14);
}

TEST_CASE("assembled derivatives match the oracle columnwise") {
  DiagonalAnalyticParams p;
  p.lambdas = {Complex(-1.0, 1.0), Complex(-2.0, -0.5)};
  auto F = make_example(p);
  const auto oracle = F.deriv;
  F.deriv = nullptr;  // force the numerical route
  const Operator est =
      assemble_derivative_operator(F, 2, 1.0, make_derivative_estimator(0.2, 6));
  const Matrix expect = oracle(2, 1.0).to_matrix();
  REQUIRE((est.to_matrix() - expect).norm() <= 1e-6 * expect.norm());

  F.deriv = oracle;
  const Matrix exact = assemble_derivative_operator(F, 2, 1.0).to_matrix();
  REQUIRE((exact - expect).norm() == 0.0);
}

TEST_CASE("operator norm agrees with direct SVD") {
  Matrix m(2, 2);
  m << 3.0, 1.0, 0.0, 0.0;
  REQUIRE(Operator::dense(m).norm() ==
          Catch::Approx(oracle::svd_norm(m)).epsilon(1e-12));
  REQUIRE(Operator::dense(m).norm() == Catch::Approx(std::sqrt(10.0)));

  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix r(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) r(i, j) = Complex(g(rng), g(rng));
    REQUIRE(Operator::dense(r).norm() ==
            Catch::Approx(oracle::svd_norm(r)).epsilon(1e-9));
  }

  Vector d(3);
  d << Complex(0.0, 2.0), Complex(-1.5), Complex(0.5, 0.5);
  REQUIRE(Operator::diagonal(d).norm() == Catch::Approx(2.0));
}

TEST_CASE("time window validation") {
  REQUIRE_THROWS_AS(TimeWindow(2.0, 2.0), ConfigError);
  REQUIRE_THROWS_AS(TimeWindow(-1.0, 2.0), ConfigError);
  REQUIRE(TimeWindow::after(3.0).bounded() == false);
}
