#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "regkit/common.hpp"
#include "regkit/finitediff.hpp"
#include "regkit/kernel.hpp"

namespace regkit {

// ---------------------------------------------------------------------------
// Analyticity seminorm p_{t,r}(x) = sup { r^k/k! |f^(k)(s)| : |s-t| < r,
// k <= K }. A finite value is exactly the best constant C in the derivative
// bound |f^(k)(s)| <= C k!/r^k over the inspected orders.
// ---------------------------------------------------------------------------

struct AnalyticityOptions {
  double divergence_slope = 0.05;  // log-linear growth in k
  int slope_orders = 8;            // fitted over the last this-many orders
  DerivEstimator estimator;        // used when the orbit has no oracle
};

namespace detail {

inline double log_norm(const Vector& v) {
  const double n = v.norm();
  return n > 0 ? std::log(n) : -std::numeric_limits<double>::infinity();
}

inline double slope_in_k(std::span<const double> log_terms) {
  // Least squares of log term against order, skipping -inf entries.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < log_terms.size(); ++i) {
    if (!std::isfinite(log_terms[i])) continue;
    const double x = static_cast<double>(i);
    sx += x;
    sy += log_terms[i];
    sxx += x * x;
    sxy += x * log_terms[i];
    ++n;
  }
  if (n < 2) return 0.0;
  const double denom = n * sxx - sx * sx;
  return denom == 0 ? 0.0 : (n * sxy - sx * sy) / denom;
}

}  // namespace detail

inline ExtRealVerdict analyticity_seminorm(const Orbit& f, double t, double r,
                                           int k_max, int res,
                                           const AnalyticityOptions& opts = {}) {
  if (!(r > 0)) throw ConfigError("analyticity_seminorm: radius must be > 0");
  if (k_max < 0) throw ConfigError("analyticity_seminorm: K_max must be >= 0");
  if (res < 1) throw ConfigError("analyticity_seminorm: resolution must be >= 1");

  auto derivative = [&](int k, double s) -> Vector {
    if (f.has_deriv()) return f.deriv(k, s);
    if (k == 0) return f.eval(s);
    if (!opts.estimator)
      throw ConfigError(
          "analyticity_seminorm: orbit has no oracle and no estimator given");
    return opts.estimator(f, k, s);
  };

  // Sample window (t-r, t+r), clipped to the orbit domain.
  const double lo = std::max(t - r, f.domain_start);
  const double hi = t + r;
  if (!(lo < hi)) throw ConfigError("analyticity_seminorm: empty window");
  std::vector<double> ss(static_cast<std::size_t>(res));
  for (int j = 0; j < res; ++j)
    ss[static_cast<std::size_t>(j)] = lo + (hi - lo) * (j + 0.5) / res;

  const double log_r = std::log(r);
  std::vector<double> order_max(static_cast<std::size_t>(k_max) + 1,
                                -std::numeric_limits<double>::infinity());
  std::vector<std::pair<double, double>> trace;
  double running = -std::numeric_limits<double>::infinity();
  try {
    for (int k = 0; k <= k_max; ++k) {
      double lw = k * log_r - std::lgamma(static_cast<double>(k) + 1.0);
      double best = -std::numeric_limits<double>::infinity();
      for (double s : ss)
        best = std::max(best, lw + detail::log_norm(derivative(k, s)));
      order_max[static_cast<std::size_t>(k)] = best;
      running = std::max(running, best);
      trace.emplace_back(static_cast<double>(k + 1),
                         std::isfinite(running) ? std::exp(running) : 0.0);
    }
  } catch (const InconclusiveError& e) {
    return ExtRealVerdict::inconclusive(std::move(trace));
  }

  const int window = std::min(opts.slope_orders, k_max + 1);
  if (window >= 4) {
    const auto tail =
        std::span<const double>(order_max).last(static_cast<std::size_t>(window));
    const double slope = detail::slope_in_k(tail);
    if (slope > opts.divergence_slope)
      return ExtRealVerdict::diverging(slope, std::move(trace));
  }
  const double value = std::isfinite(running) ? std::exp(running) : 0.0;
  return ExtRealVerdict::finite(value, std::move(trace));
}

// ---------------------------------------------------------------------------
// Radius scan over a decreasing ladder in (0, 1].
// ---------------------------------------------------------------------------

inline std::vector<double> dyadic_radius_ladder(int depth = 10) {
  std::vector<double> ladder;
  for (int j = 0; j <= depth; ++j) ladder.push_back(std::pow(2.0, -j));
  return ladder;
}

struct RadiusScan {
  std::optional<double> radius;  // largest ladder radius with a finite verdict
  std::vector<std::pair<double, ExtRealVerdict>> reports;
};

inline RadiusScan analyticity_radius(const Orbit& f, double t,
                                     std::vector<double> ladder, int k_max,
                                     int res = 128,
                                     const AnalyticityOptions& opts = {}) {
  if (ladder.empty()) ladder = dyadic_radius_ladder();
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (!(ladder[i] > 0 && ladder[i] <= 1))
      throw ConfigError("analyticity_radius: ladder radii must lie in (0, 1]");
    if (i > 0 && !(ladder[i] < ladder[i - 1]))
      throw ConfigError("analyticity_radius: ladder must be strictly decreasing");
  }
  RadiusScan scan;
  bool all_inconclusive = true;
  for (double r : ladder) {
    ExtRealVerdict v = analyticity_seminorm(f, t, r, k_max, res, opts);
    all_inconclusive = all_inconclusive && v.is_inconclusive();
    const bool finite = v.is_finite();
    scan.reports.emplace_back(r, std::move(v));
    if (finite) {
      scan.radius = r;
      break;
    }
  }
  if (!scan.radius && all_inconclusive) {
    std::vector<std::pair<double, double>> trace;
    for (const auto& [r, v] : scan.reports) trace.emplace_back(r, 0.0);
    throw InconclusiveError("analyticity_radius: every ladder radius inconclusive",
                            std::move(trace));
  }
  return scan;
}

// ---------------------------------------------------------------------------
// Guarded power-series evaluation with a geometric tail bound.
// ---------------------------------------------------------------------------

/// Derivative-bound certificate |f^(k)(s)| <= C k!/r^k near t; r is any
/// positive radius the fit was measured at.
struct CauchyFit {
  double t = 0.0;
  double r = 1.0;
  double C = 0.0;
  int k_max = 0;
};

/// Builds a CauchyFit from the measured seminorm at (t, r).
inline std::optional<CauchyFit> fit_cauchy(const Orbit& f, double t, double r,
                                           int k_max, int res = 128,
                                           const AnalyticityOptions& opts = {}) {
  const ExtRealVerdict v = analyticity_seminorm(f, t, r, k_max, res, opts);
  if (!v.is_finite()) return std::nullopt;
  CauchyFit fit;
  fit.t = t;
  fit.r = r;
  fit.C = v.value;
  fit.k_max = k_max;
  return fit;
}

struct SeriesEval {
  Vector value;
  double tail_bound = 0.0;
};

/// Taylor sum sum_{k<=K} (z-t)^k f^(k)(t)/k! plus the rigorous geometric tail
/// C q^(K+1)/(1-q), q = |z-t|/r from the certificate.
inline SeriesEval series_eval(const Orbit& f, double t, Complex z, int K,
                              const CauchyFit& fit) {
  if (!f.has_deriv()) throw ConfigError("series_eval: needs a derivative oracle");
  if (K < 0) throw ConfigError("series_eval: truncation must be >= 0");
  if (!(fit.C >= 0) || !(fit.r > 0))
    throw ConfigError("series_eval: certificate must be finite");
  const double q = std::abs(z - t) / fit.r;
  if (q >= 1.0)
    throw OutOfDomainError("series_eval: point outside the certified disc");

  SeriesEval out;
  out.value = Vector::Zero(f.dim);
  Complex coeff = 1.0;  // (z-t)^k / k!
  for (int k = 0; k <= K; ++k) {
    out.value += coeff * f.deriv(k, t);
    coeff *= (z - t) / static_cast<double>(k + 1);
  }
  out.tail_bound = fit.C * std::pow(q, K + 1) / (1.0 - q);
  return out;
}

}  // namespace regkit
