#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <regkit/classify.hpp>
#include <regkit/gallery.hpp>

using namespace regkit;

namespace {

ClassifyOptions fast_options() {
  ClassifyOptions opts;
  opts.probes = 4;
  opts.max_basis = 16;
  return opts;
}

}  // namespace

TEST_CASE("orbit thresholds on elementary orbits") {
  PropertySpec bounded;
  bounded.kind = PropertySpec::Kind::Bounded;
  const std::vector<int> scan{0, 1, 2, 4};

  auto decay = scalar_orbit([](double t) { return std::exp(-t); });
  const auto low = orbit_threshold(decay, bounded, scan);
  REQUIRE(low.attained);
  REQUIRE(low.threshold == 0.0);

  auto line = scalar_orbit([](double t) { return t; });
  const auto never = orbit_threshold(line, bounded, scan);
  REQUIRE_FALSE(never.attained);

  REQUIRE_THROWS_AS(orbit_threshold(decay, bounded, std::vector<int>{1, 2}),
                    ConfigError);
}

TEST_CASE("shift orbit threshold follows the support arithmetic") {
  NilpotentShiftParams p;
  p.dt = 0.01;
  const auto F = make_example(p);
  Vector x = Vector::Zero(100);
  for (int j = 50; j < 100; ++j) x[j] = 1.0;

  PropertySpec zero;
  zero.kind = PropertySpec::Kind::Zero;
  const std::vector<int> scan{0, 1};
  const auto est = orbit_threshold(F.orbit(x), zero, scan, fast_options());
  REQUIRE(est.attained);
  REQUIRE(std::abs(est.threshold - 0.5) <= 1.0 / 64);
}

TEST_CASE("uniform threshold over the shift basis is the full lifetime") {
  NilpotentShiftParams p;
  p.dt = 1.0 / 64;
  const auto F = make_example(p);

  PropertySpec zero;
  zero.kind = PropertySpec::Kind::Zero;
  const std::vector<int> scan{0, 1};
  ClassifyOptions opts = fast_options();
  opts.max_basis = 64;
  const auto report = uniform_threshold(F, zero, scan, opts);

  REQUIRE(report.uniform_attained);
  REQUIRE(std::abs(report.uniform_threshold - 1.0) <= 1.0 / 64);

  // Per-orbit thresholds sit exactly on the lattice for basis orbits.
  for (const auto& row : report.per_orbit) {
    if (row.orbit_id.empty() || row.orbit_id[0] != 'e') continue;
    const int j = std::stoi(row.orbit_id.substr(1));
    const double expect = (64 - j) / 64.0;
    REQUIRE(row.attained);
    REQUIRE(row.threshold == Catch::Approx(expect).margin(1e-12));
  }

  // Uniform threshold equals the per-orbit maximum by construction.
  double max_per_orbit = 0.0;
  for (const auto& row : report.per_orbit)
    max_per_orbit = std::max(max_per_orbit, row.threshold);
  REQUIRE(report.uniform_threshold == max_per_orbit);
}

TEST_CASE("analytic and differentiable classifications start at zero") {
  DiagonalAnalyticParams dp;
  dp.lambdas = {Complex(-1.0, 0.0), Complex(-0.5, 2.0)};
  const auto D = make_example(dp);
  const std::vector<int> scan{0, 1};

  PropertySpec analytic;
  analytic.kind = PropertySpec::Kind::Analytic;
  const auto rep = uniform_threshold(D, analytic, scan, fast_options());
  REQUIRE(rep.uniform_attained);
  REQUIRE(rep.uniform_threshold == 0.0);

  const auto M = make_example(MatrixPolyParams{});
  PropertySpec diff;
  diff.kind = PropertySpec::Kind::Differentiable;
  diff.order = 1;
  const auto drep = uniform_threshold(M, diff, scan, fast_options());
  REQUIRE(drep.uniform_attained);
  REQUIRE(drep.uniform_threshold == 0.0);
}

TEST_CASE("diverging orbit marks the whole report") {
  const auto M = make_example(MatrixPolyParams{});
  PropertySpec bounded;
  bounded.kind = PropertySpec::Kind::Bounded;
  const std::vector<int> scan{0, 1};
  const auto rep = uniform_threshold(M, bounded, scan, fast_options());
  REQUIRE_FALSE(rep.uniform_attained);
  REQUIRE_FALSE(rep.witness_orbit.empty());
}

TEST_CASE("thresholds are invariant under orbit scaling") {
  NilpotentShiftParams p;
  p.dt = 0.125;
  const auto F = make_example(p);
  Vector x = Vector::Zero(8);
  x[2] = 1.0;

  PropertySpec zero;
  zero.kind = PropertySpec::Kind::Zero;
  const std::vector<int> scan{0, 1};
  const auto base = orbit_threshold(F.orbit(x), zero, scan, fast_options());
  const auto scaled = orbit_threshold(scaled_orbit(F.orbit(x), Complex(0.0, 37.0)),
                                      zero, scan, fast_options());
  REQUIRE(base.attained == scaled.attained);
  REQUIRE(base.threshold == scaled.threshold);
}

TEST_CASE("adding probes never lowers the uniform threshold") {
  NilpotentShiftParams p;
  p.dt = 1.0 / 16;
  const auto F = make_example(p);
  PropertySpec zero;
  zero.kind = PropertySpec::Kind::Zero;
  const std::vector<int> scan{0, 1};

  ClassifyOptions few = fast_options();
  few.probes = 2;
  ClassifyOptions more = fast_options();
  more.probes = 12;
  const auto small = uniform_threshold(F, zero, scan, few);
  const auto big = uniform_threshold(F, zero, scan, more);
  REQUIRE(big.uniform_threshold >= small.uniform_threshold - 1e-12);
}

TEST_CASE("every property predicate classifies a benign orbit from zero") {
  // Decaying smooth orbit: all properties hold on every tail window.
  auto f = scalar_orbit([](double t) { return std::exp(-t); },
                        [](int k, double t) {
                          return (k % 2 ? -1.0 : 1.0) * std::exp(-t);
                        });
  const std::vector<int> scan{0, 1};
  ClassifyOptions opts = fast_options();

  for (auto kind : {PropertySpec::Kind::Bounded, PropertySpec::Kind::LocalBounded,
                    PropertySpec::Kind::Holder, PropertySpec::Kind::LocalHolder,
                    PropertySpec::Kind::UniformContinuity,
                    PropertySpec::Kind::LocalBoundedVariation,
                    PropertySpec::Kind::AbsoluteContinuity,
                    PropertySpec::Kind::Differentiable,
                    PropertySpec::Kind::Analytic}) {
    PropertySpec prop;
    prop.kind = kind;
    prop.alpha = 0.5;
    prop.order = 2;
    const auto est = orbit_threshold(f, prop, scan, opts);
    INFO(to_string(kind));
    REQUIRE(est.attained);
    REQUIRE(est.threshold == 0.0);
  }
}

TEST_CASE("local boundedness rejects a singular orbit until it clears") {
  // Pole at t = 2.3. Exhaustion windows [n + 1/m, n + m] (m up to 16) clear
  // the pole once n exceeds 2.3 - 1/16.
  auto f = scalar_orbit([](double t) {
    return 1.0 / std::max(std::abs(t - 2.3), 1e-15);
  });
  PropertySpec prop;
  prop.kind = PropertySpec::Kind::LocalBounded;
  const std::vector<int> scan{0, 1, 2, 4};
  const auto est = orbit_threshold(f, prop, scan, fast_options());
  REQUIRE(est.attained);
  REQUIRE(est.threshold ==
          Catch::Approx(2.3 - 1.0 / 16).margin(1.0 / 64 + 1e-9));
}

TEST_CASE("smoothness classification certifies the exponential") {
  auto f = scalar_orbit([](double t) { return std::exp(-0.5 * t); });
  PropertySpec smooth;
  smooth.kind = PropertySpec::Kind::Smooth;
  smooth.order = 2;
  const std::vector<int> scan{0, 1};
  const auto est = orbit_threshold(f, smooth, scan, fast_options());
  REQUIRE(est.attained);
  REQUIRE(est.threshold == 0.0);
}

TEST_CASE("report emission round-trips") {
  NilpotentShiftParams p;
  p.dt = 0.25;
  const auto F = make_example(p);
  PropertySpec zero;
  zero.kind = PropertySpec::Kind::Zero;
  const std::vector<int> scan{0, 1};
  const auto rep = uniform_threshold(F, zero, scan, fast_options());

  const auto j = report_to_json(rep);
  REQUIRE(j.at("uniform").at("verdict") == "finite");
  // Emit -> parse -> emit is a fixed point.
  const std::string dumped = j.dump(2);
  REQUIRE(nlohmann::json::parse(dumped).dump(2) == dumped);

  const std::string csv = report_to_csv(rep);
  REQUIRE(csv.rfind("orbit_id,property,threshold,verdict,witness_n\n", 0) == 0);
  REQUIRE(csv.find("uniform,zero,1,finite,-1") != std::string::npos);
  REQUIRE(csv.find("\r") == std::string::npos);  // LF endings only
}
