#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "regkit/analytic.hpp"
#include "regkit/common.hpp"
#include "regkit/finitediff.hpp"
#include "regkit/kernel.hpp"
#include "regkit/mollifier.hpp"
#include "regkit/seminorm.hpp"

namespace regkit {

// ---------------------------------------------------------------------------
// Threshold language: the smallest window start from which an orbit has a
// property, per orbit (individual) and maximized over probes (uniform).
// ---------------------------------------------------------------------------

struct PropertySpec {
  enum class Kind {
    Zero,
    Bounded,
    LocalBounded,
    Holder,
    LocalHolder,
    UniformContinuity,
    LocalBoundedVariation,
    AbsoluteContinuity,
    Differentiable,
    Smooth,
    Analytic,
  };

  Kind kind = Kind::Bounded;
  double alpha = 1.0;      // Holder
  double delta_cap = 1.0;  // uniform continuity / absolute continuity
  int order = 1;           // Differentiable(k) / Smooth max order
};

inline const char* to_string(PropertySpec::Kind k) {
  switch (k) {
    case PropertySpec::Kind::Zero: return "zero";
    case PropertySpec::Kind::Bounded: return "bounded";
    case PropertySpec::Kind::LocalBounded: return "local-bounded";
    case PropertySpec::Kind::Holder: return "holder";
    case PropertySpec::Kind::LocalHolder: return "local-holder";
    case PropertySpec::Kind::UniformContinuity: return "uniform-continuity";
    case PropertySpec::Kind::LocalBoundedVariation: return "local-bv";
    case PropertySpec::Kind::AbsoluteContinuity: return "absolute-continuity";
    case PropertySpec::Kind::Differentiable: return "differentiable";
    case PropertySpec::Kind::Smooth: return "smooth";
    case PropertySpec::Kind::Analytic: return "analytic";
  }
  return "bounded";
}

struct ClassifyOptions {
  int res = 128;               // per-unit-time sample resolution
  double horizon = 4.0;        // probe span for pointwise properties
  int exhaustion_m = 16;       // local properties: windows [n+1/m', n+m']
  double zero_tol = 1e-9;
  double resolution = 1.0 / 64;  // threshold bisection resolution
  int probes = 32;
  std::uint64_t seed = 12345;
  int max_basis = 64;          // basis subsample cap for grid examples
  int analytic_kmax = 16;
  SeminormOptions sem{};
};

struct ThresholdEstimate {
  bool attained = false;
  double threshold = 0.0;
  int witness_n = -1;  // first integer scan entry that passed
  std::vector<std::pair<double, bool>> scan_trace;
};

namespace detail {

inline bool verdict_passes(const ExtRealVerdict& v) { return v.is_finite(); }

// Compact-window refinements certify divergence conclusively, while a sup
// attained at a window edge creeps toward its limit too slowly for the
// finite-stability test. Local properties therefore pass unless divergence
// is certified.
inline bool verdict_passes_local(const ExtRealVerdict& v) {
  return !v.is_diverging();
}

inline bool property_holds_from(const Orbit& orbit, const PropertySpec& prop,
                                double n, double orbit_scale,
                                const ClassifyOptions& opts) {
  const TimeWindow tail = TimeWindow::after(n);
  SeminormOptions sem = opts.sem;
  switch (prop.kind) {
    case PropertySpec::Kind::Zero: {
      const auto v = sup_seminorm(orbit, tail, opts.res, sem);
      return v.is_finite() && v.value <= opts.zero_tol * orbit_scale;
    }
    case PropertySpec::Kind::Bounded:
      return verdict_passes(sup_seminorm(orbit, tail, opts.res, sem));
    case PropertySpec::Kind::LocalBounded: {
      sem.bounded_levels = 6;
      for (int m = 2; m <= opts.exhaustion_m; m *= 2) {
        const TimeWindow k(n + 1.0 / m, n + m);
        if (!verdict_passes_local(sup_seminorm(orbit, k, opts.res, sem)))
          return false;
      }
      return true;
    }
    case PropertySpec::Kind::Holder:
      return verdict_passes(
          holder_seminorm(orbit, tail, prop.alpha, opts.res, sem));
    case PropertySpec::Kind::LocalHolder: {
      sem.bounded_levels = 6;
      sem.pair_cap = 1024;  // pass/fail scan; full pair budgets are wasted here
      for (int m = 2; m <= opts.exhaustion_m; m *= 2) {
        const TimeWindow k(n + 1.0 / m, n + m);
        if (!verdict_passes_local(
                holder_seminorm(orbit, k, prop.alpha, opts.res, sem)))
          return false;
      }
      return true;
    }
    case PropertySpec::Kind::UniformContinuity:
      return verdict_passes(
          uc_modulus_seminorm(orbit, tail, prop.delta_cap, opts.res, sem));
    case PropertySpec::Kind::LocalBoundedVariation: {
      for (int m = 2; m <= opts.exhaustion_m; m *= 2) {
        if (!verdict_passes_local(
                total_variation(orbit, n + 1.0 / m, n + m, opts.res, sem)))
          return false;
      }
      return true;
    }
    case PropertySpec::Kind::AbsoluteContinuity:
      return verdict_passes(
          ac_functional(orbit, tail, prop.delta_cap, opts.res, sem));
    case PropertySpec::Kind::Differentiable: {
      constexpr int kProbePoints = 4;
      for (int i = 0; i < kProbePoints; ++i) {
        const double tau = n + opts.horizon * (i + 0.5) / kProbePoints;
        const double h0 =
            std::min(0.25, 0.5 * (tau - n) / std::max(1, prop.order));
        const auto est = derivative_estimate(orbit, tau, prop.order, h0, 5);
        if (est.inconclusive) return false;
      }
      return true;
    }
    case PropertySpec::Kind::Smooth: {
      const TimeWindow k(n + 0.5, n + 2.5);
      std::vector<int> ladder{2, 4, 8, 16, 32, 64, 128, 256, 512};
      SmoothnessProbeOptions po;
      po.grid_points = 1025;
      const auto report = smoothness_probe(orbit, k, prop.order, ladder, po);
      return report.smooth_to(prop.order);
    }
    case PropertySpec::Kind::Analytic: {
      AnalyticityOptions ao;
      int kmax = opts.analytic_kmax;
      if (!orbit.has_deriv()) {
        ao.estimator = make_derivative_estimator();
        kmax = std::min(kmax, 6);
      }
      constexpr int kProbePoints = 3;
      for (int i = 0; i < kProbePoints; ++i) {
        const double tau = n + opts.horizon * (i + 0.5) / kProbePoints;
        std::vector<double> ladder{1.0, 0.5, 0.25, 0.125};
        while (!ladder.empty() && !(tau - ladder.front() > n))
          ladder.erase(ladder.begin());  // keep the window right of n
        if (ladder.empty()) return false;
        try {
          const auto scan = analyticity_radius(orbit, tau, ladder, kmax, 64, ao);
          if (!scan.radius) return false;
        } catch (const InconclusiveError&) {
          return false;
        }
      }
      return true;
    }
  }
  return false;
}

}  // namespace detail

/// Smallest scanned window start whose tail window certifies the property,
/// refined by bisection between the last failing and first passing starts to
/// the configured resolution.
inline ThresholdEstimate orbit_threshold(const Orbit& orbit,
                                         const PropertySpec& prop,
                                         std::span<const int> scan,
                                         const ClassifyOptions& opts = {}) {
  if (scan.empty() || scan.front() != 0)
    throw ConfigError("orbit_threshold: scan must start at 0");
  for (std::size_t i = 0; i + 1 < scan.size(); ++i)
    if (scan[i] >= scan[i + 1])
      throw ConfigError("orbit_threshold: scan must be increasing");

  // Scale reference for the zero test: sup over an initial stretch.
  double orbit_scale = 1.0;
  {
    const auto v =
        sup_seminorm(orbit, TimeWindow(orbit.domain_start,
                                       orbit.domain_start + opts.horizon),
                     opts.res);
    if (v.is_finite()) orbit_scale += v.value;
  }

  ThresholdEstimate out;
  int prev_fail = -1;
  bool found = false;
  int first_pass = 0;
  for (int n : scan) {
    const bool ok = detail::property_holds_from(orbit, prop, n, orbit_scale, opts);
    out.scan_trace.emplace_back(static_cast<double>(n), ok);
    if (ok) {
      found = true;
      first_pass = n;
      break;
    }
    prev_fail = n;
  }
  if (!found) return out;  // not attained within the scan

  out.attained = true;
  out.witness_n = first_pass;
  if (prev_fail < 0) {
    out.threshold = first_pass;
    return out;
  }
  double lo = prev_fail, hi = first_pass;
  while (hi - lo > opts.resolution) {
    const double mid = 0.5 * (lo + hi);
    const bool ok = detail::property_holds_from(orbit, prop, mid, orbit_scale, opts);
    out.scan_trace.emplace_back(mid, ok);
    (ok ? hi : lo) = mid;
  }
  out.threshold = hi;
  return out;
}

// ---------------------------------------------------------------------------
// Uniform threshold over a basis plus random probes
// ---------------------------------------------------------------------------

struct RegularityReport {
  std::string property;
  std::vector<int> scan;

  struct Row {
    std::string orbit_id;
    bool attained = false;
    double threshold = 0.0;
    int witness_n = -1;
    std::vector<std::pair<double, bool>> trace;
  };
  std::vector<Row> per_orbit;

  bool uniform_attained = false;
  double uniform_threshold = 0.0;
  std::string witness_orbit;  // diverging witness, or the max contributor
};

inline std::vector<Vector> gaussian_probes(Eigen::Index dim, int count,
                                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Vector v(dim);
    for (Eigen::Index j = 0; j < dim; ++j) v[j] = Complex(gauss(rng), gauss(rng));
    out.push_back(std::move(v));
  }
  return out;
}

inline RegularityReport uniform_threshold(const OperatorFunction& F,
                                          const PropertySpec& prop,
                                          std::span<const int> scan,
                                          const ClassifyOptions& opts = {}) {
  RegularityReport report;
  report.property = to_string(prop.kind);
  report.scan.assign(scan.begin(), scan.end());

  std::vector<std::pair<std::string, Vector>> probes;
  const Eigen::Index d = F.dim;
  const Eigen::Index basis_stride =
      std::max<Eigen::Index>(1, d / std::max(1, opts.max_basis));
  for (Eigen::Index j = 0; j < d; j += basis_stride) {
    Vector e = Vector::Zero(d);
    e[j] = 1.0;
    probes.emplace_back("e" + std::to_string(j), std::move(e));
  }
  int gi = 0;
  for (auto& g : gaussian_probes(d, opts.probes, opts.seed))
    probes.emplace_back("g" + std::to_string(gi++), std::move(g));

  double worst = 0.0;
  std::string worst_id;
  bool any_diverging = false;
  std::string diverging_id;
  for (auto& [id, x] : probes) {
    const auto est = orbit_threshold(F.orbit(x), prop, scan, opts);
    RegularityReport::Row row;
    row.orbit_id = id;
    row.attained = est.attained;
    row.threshold = est.threshold;
    row.witness_n = est.witness_n;
    row.trace = est.scan_trace;
    report.per_orbit.push_back(std::move(row));
    if (!est.attained) {
      if (!any_diverging) diverging_id = id;
      any_diverging = true;
    } else if (est.threshold >= worst) {
      worst = est.threshold;
      worst_id = id;
    }
  }

  if (any_diverging) {
    report.uniform_attained = false;
    report.witness_orbit = diverging_id;
  } else {
    report.uniform_attained = true;
    report.uniform_threshold = worst;
    report.witness_orbit = worst_id;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

inline nlohmann::json report_to_json(const RegularityReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.per_orbit) {
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& [n, ok] : row.trace)
      trace.push_back({{"n", n}, {"passed", ok}});
    rows.push_back({{"orbit_id", row.orbit_id},
                    {"verdict", row.attained ? "finite" : "diverging"},
                    {"threshold", row.attained ? nlohmann::json(row.threshold)
                                               : nlohmann::json()},
                    {"witness_n", row.witness_n},
                    {"trace", std::move(trace)}});
  }
  return nlohmann::json{
      {"property", r.property},
      {"scan", r.scan},
      {"per_orbit", std::move(rows)},
      {"uniform",
       {{"verdict", r.uniform_attained ? "finite" : "diverging"},
        {"threshold", r.uniform_attained ? nlohmann::json(r.uniform_threshold)
                                         : nlohmann::json()},
        {"witness_orbit", r.witness_orbit}}}};
}

inline std::string format_sig17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string report_to_csv(const RegularityReport& r) {
  std::string out = "orbit_id,property,threshold,verdict,witness_n\n";
  for (const auto& row : r.per_orbit) {
    out += row.orbit_id;
    out += ',';
    out += r.property;
    out += ',';
    out += row.attained ? format_sig17(row.threshold) : "";
    out += ',';
    out += row.attained ? "finite" : "diverging";
    out += ',';
    out += std::to_string(row.witness_n);
    out += '\n';
  }
  out += "uniform,";
  out += r.property;
  out += ',';
  out += r.uniform_attained ? format_sig17(r.uniform_threshold) : "";
  out += ',';
  out += r.uniform_attained ? "finite" : "diverging";
  out += ",-1\n";
  return out;
}

}  // namespace regkit
