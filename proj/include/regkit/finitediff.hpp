#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "regkit/common.hpp"
#include "regkit/kernel.hpp"
#include "regkit/lowdisc.hpp"
#include "regkit/quadrature.hpp"

namespace regkit {

// ---------------------------------------------------------------------------
// Admissible increments for an order-k difference quotient at base time t.
// Increments are stored sorted: the quotient depends on h only through the
// multiset, and a canonical order makes permutation invariance bit-exact.
// ---------------------------------------------------------------------------

struct StepBox {
  int k = 1;
  double delta = 0.0;
  double t = 0.0;
  std::vector<double> h;
};

/// Validates order, increment bounds and the Minkowski reach
/// [t - k*delta, t + k*delta], which must stay strictly inside the orbit's
/// admissible window (open at domain_start).
inline StepBox make_step_box(const Orbit& f, int k, double delta, double t,
                             std::vector<double> h) {
  if (k < 1) throw ConfigError("step box: order must be >= 1");
  if (k > 24) throw ConfigError("step box: order above 24 rejected (2^k blow-up)");
  if (!(delta > 0)) throw ConfigError("step box: delta must be > 0");
  if (static_cast<int>(h.size()) != k)
    throw ConfigError("step box: expected k increments");
  for (double hj : h) {
    if (hj == 0.0) throw ConfigError("step box: increments must be nonzero");
    if (std::abs(hj) > delta * (1.0 + 1e-12))
      throw ConfigError("step box: |h_j| must not exceed delta");
  }
  if (!(t - k * delta > f.domain_start))
    throw ConfigError("step box: reach [t-k*delta, t+k*delta] leaves the domain");
  std::sort(h.begin(), h.end());
  StepBox box;
  box.k = k;
  box.delta = delta;
  box.t = t;
  box.h = std::move(h);
  return box;
}

enum class DiffStrategy { SubsetSum, Nested, Integral };

namespace detail {

// The alternating sum cancels almost completely (the result is smaller than
// the largest term by a factor of prod h_j), so accumulation runs in
// quad precision: reordering noise then stays far below the 1e-12 agreement
// the three realizations are held to. Function values remain doubles; their
// rounding is common to every realization and drops out of comparisons.
using Quad = __float128;

struct QuadVec {
  std::vector<Quad> re, im;
  explicit QuadVec(Eigen::Index n)
      : re(static_cast<std::size_t>(n), Quad(0)),
        im(static_cast<std::size_t>(n), Quad(0)) {}
  void add_scaled(const Vector& v, Quad w) {
    for (std::size_t d = 0; d < re.size(); ++d) {
      re[d] += w * Quad(v[static_cast<Eigen::Index>(d)].real());
      im[d] += w * Quad(v[static_cast<Eigen::Index>(d)].imag());
    }
  }
  Vector to_vector(Quad scale) const {
    Vector out(static_cast<Eigen::Index>(re.size()));
    for (std::size_t d = 0; d < re.size(); ++d)
      out[static_cast<Eigen::Index>(d)] =
          Complex(static_cast<double>(re[d] * scale),
                  static_cast<double>(im[d] * scale));
    return out;
  }
};

inline double lattice_shift(std::span<const double> h, std::uint64_t mask);

inline Vector subset_sum_quotient(const Orbit& f, const StepBox& box) {
  const int k = box.k;
  QuadVec acc(f.dim);
  const std::uint64_t subsets = std::uint64_t{1} << k;
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    const int sign = ((k - std::popcount(mask)) & 1) ? -1 : 1;
    acc.add_scaled(f.eval(box.t + lattice_shift(box.h, mask)), Quad(sign));
  }
  Quad denom = 1;
  for (double hj : box.h) denom *= Quad(hj);
  return acc.to_vector(Quad(1) / denom);
}

struct QuadPair {
  Quad re = 0, im = 0;
};

// Evaluation points shared with the subset sum: the argument t + h_J is
// accumulated the same way in both realizations, so the two routes see
// bit-identical function values and differ only in reduction order.
inline double lattice_shift(std::span<const double> h, std::uint64_t mask) {
  double shift = 0.0;
  for (std::size_t j = 0; j < h.size(); ++j)
    if (mask & (std::uint64_t{1} << j)) shift += h[j];
  return shift;
}

/// First-difference cascade over the subset lattice: peeling one increment
/// per round realizes D_k = (D_{k-1} shifted - D_{k-1}) / h_k.
inline Vector nested_quotient(const Orbit& f, std::span<const double> h,
                              double t) {
  const int k = static_cast<int>(h.size());
  const std::uint64_t lattice = std::uint64_t{1} << k;
  std::vector<QuadPair> cells(static_cast<std::size_t>(lattice) *
                              static_cast<std::size_t>(f.dim));
  for (std::uint64_t mask = 0; mask < lattice; ++mask) {
    const Vector v = f.eval(t + lattice_shift(h, mask));
    for (Eigen::Index d = 0; d < f.dim; ++d) {
      auto& cell = cells[static_cast<std::size_t>(mask) * f.dim +
                         static_cast<std::size_t>(d)];
      cell.re = Quad(v[d].real());
      cell.im = Quad(v[d].imag());
    }
  }
  for (int j = 0; j < k; ++j) {
    const std::uint64_t bit = std::uint64_t{1} << j;
    const Quad inv = Quad(1) / Quad(h[static_cast<std::size_t>(j)]);
    for (std::uint64_t mask = 0; mask < lattice; ++mask) {
      if (mask & bit) continue;
      for (Eigen::Index d = 0; d < f.dim; ++d) {
        auto& lo = cells[static_cast<std::size_t>(mask) * f.dim +
                         static_cast<std::size_t>(d)];
        const auto& hi = cells[static_cast<std::size_t>(mask | bit) * f.dim +
                               static_cast<std::size_t>(d)];
        lo.re = (hi.re - lo.re) * inv;
        lo.im = (hi.im - lo.im) * inv;
      }
    }
  }
  Vector out(f.dim);
  for (Eigen::Index d = 0; d < f.dim; ++d)
    out[d] = Complex(static_cast<double>(cells[static_cast<std::size_t>(d)].re),
                     static_cast<double>(cells[static_cast<std::size_t>(d)].im));
  return out;
}

inline Vector integral_quotient(const Orbit& f, const StepBox& box, int nodes) {
  if (!f.has_deriv())
    throw ConfigError("integral quotient needs a derivative oracle");
  if (nodes < 1) throw ConfigError("integral quotient: node count must be >= 1");
  double work = 1.0;
  for (int j = 0; j < box.k; ++j) work *= nodes;
  if (work > 6.9e7)
    throw ConfigError("integral quotient: tensor rule too large for this order");

  const auto& rule = GaussLegendre::of(nodes);
  std::vector<double> s01(rule.nodes.size()), w01(rule.nodes.size());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    s01[i] = 0.5 * (static_cast<double>(rule.nodes[i]) + 1.0);
    w01[i] = 0.5 * static_cast<double>(rule.weights[i]);
  }

  Vector acc = Vector::Zero(f.dim);
  std::vector<int> idx(static_cast<std::size_t>(box.k), 0);
  for (;;) {
    double shift = 0.0, weight = 1.0;
    for (int j = 0; j < box.k; ++j) {
      shift += box.h[static_cast<std::size_t>(j)] * s01[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
      weight *= w01[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
    }
    acc += weight * f.deriv(box.k, box.t + shift);
    int j = 0;
    for (; j < box.k; ++j) {
      if (++idx[static_cast<std::size_t>(j)] < nodes) break;
      idx[static_cast<std::size_t>(j)] = 0;
    }
    if (j == box.k) break;
  }
  return acc;
}

}  // namespace detail

/// D[f](h) = (1/prod h_j) * sum_{J subset of [k]} (-1)^{k-|J|} f(t + h_J),
/// equivalently the nested first-difference recursion, equivalently the
/// [0,1]^k tensor quadrature of f^(k)(t + sum h_j s_j).
inline Vector diff_quotient(const Orbit& f, const StepBox& box,
                            DiffStrategy strategy, int quad_nodes = 32) {
  switch (strategy) {
    case DiffStrategy::SubsetSum:
      return detail::subset_sum_quotient(f, box);
    case DiffStrategy::Nested:
      return detail::nested_quotient(f, box.h, box.t);
    case DiffStrategy::Integral:
      return detail::integral_quotient(f, box, quad_nodes);
  }
  throw ConfigError("unknown difference-quotient strategy");
}

/// Binomial stencil the subset sum collapses to at equal steps:
/// w_j = (-1)^(k-j) * C(k, j), so D = h^-k * sum_j w_j f(t + j h).
inline std::vector<double> equal_step_weights(int k) {
  if (k < 1) throw ConfigError("equal_step_weights: order must be >= 1");
  std::vector<double> c(static_cast<std::size_t>(k) + 1, 0.0);
  c[0] = 1.0;
  for (int row = 1; row <= k; ++row)
    for (int j = row; j >= 1; --j) c[static_cast<std::size_t>(j)] += c[static_cast<std::size_t>(j - 1)];
  for (int j = 0; j <= k; ++j)
    if ((k - j) & 1) c[static_cast<std::size_t>(j)] = -c[static_cast<std::size_t>(j)];
  return c;
}

/// Forward equal-step stencil value h^-k * sum_j w_j f(t + j h).
inline Vector forward_stencil(const Orbit& f, double t, int k, double h) {
  const auto w = equal_step_weights(k);
  detail::QuadVec acc(f.dim);
  for (int j = 0; j <= k; ++j)
    acc.add_scaled(f.eval(t + j * h),
                   detail::Quad(w[static_cast<std::size_t>(j)]));
  detail::Quad denom = 1;
  for (int j = 0; j < k; ++j) denom *= detail::Quad(h);
  return acc.to_vector(detail::Quad(1) / denom);
}

// ---------------------------------------------------------------------------
// Derivative estimation: the iterated limit collapsed to equal steps plus
// Richardson extrapolation (ratio 2, first-order elimination).
// ---------------------------------------------------------------------------

struct DerivativeEstimate {
  Vector value;
  double error = 0.0;
  bool inconclusive = false;
  std::vector<double> discrepancies;
  std::string note;
};

namespace detail {

struct RichardsonResult {
  Vector value;
  std::vector<double> discrepancies;
};

inline RichardsonResult richardson_ladder(const Orbit& f, double t, int k,
                                          double h0, int levels) {
  std::vector<std::vector<Vector>> table(static_cast<std::size_t>(levels));
  for (int i = 0; i < levels; ++i)
    table[static_cast<std::size_t>(i)].push_back(
        forward_stencil(f, t, k, h0 / std::pow(2.0, i)));
  for (int j = 1; j < levels; ++j) {
    const double factor = std::pow(2.0, j);
    for (int i = j; i < levels; ++i)
      table[static_cast<std::size_t>(i)].push_back(
          (factor * table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - 1)] -
           table[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)]) /
          (factor - 1.0));
  }
  RichardsonResult out;
  out.value = table.back().back();
  for (int i = 1; i < levels; ++i)
    out.discrepancies.push_back(
        (table[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] -
         table[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(i - 1)])
            .norm());
  return out;
}

}  // namespace detail

/// Forward stencils at h0, h0/2, ... with Richardson extrapolation; the
/// last-two-level discrepancy is the error estimate. When the backward reach
/// is admissible the one-sided limits are cross-checked, so kinks surface as
/// Inconclusive instead of a silently one-sided answer.
inline DerivativeEstimate derivative_estimate(const Orbit& f, double t, int k,
                                              double h0, int levels) {
  if (levels < 2) throw ConfigError("derivative_estimate: needs levels >= 2");
  if (k < 1) throw ConfigError("derivative_estimate: order must be >= 1");
  if (!(h0 > 0)) throw ConfigError("derivative_estimate: h0 must be > 0");

  DerivativeEstimate out;
  const auto fwd = detail::richardson_ladder(f, t, k, h0, levels);
  out.value = fwd.value;
  out.discrepancies = fwd.discrepancies;
  const double scale = std::max(out.value.norm(), 1.0);
  double err = fwd.discrepancies.empty() ? 0.0 : fwd.discrepancies.back();

  const bool backward_ok = t - k * h0 > f.domain_start;
  if (backward_ok) {
    const auto bwd = detail::richardson_ladder(f, t, k, -h0, levels);
    const double gap = (fwd.value - bwd.value).norm();
    const double budget =
        10.0 * (err + (bwd.discrepancies.empty() ? 0.0 : bwd.discrepancies.back())) +
        1e-9 * scale;
    if (gap > budget) {
      out.inconclusive = true;
      out.note = "one-sided limits disagree";
      out.error = gap;
      return out;
    }
    err = std::max(err, gap);
  }

  const auto& d = fwd.discrepancies;
  if (d.size() >= 3 && d[d.size() - 1] >= d[d.size() - 2] &&
      d[d.size() - 2] >= d[d.size() - 3] && d.back() > 1e-7 * scale) {
    out.inconclusive = true;
    out.note = "discrepancies stalled";
    out.error = d.back();
    return out;
  }

  out.error = err;
  return out;
}

/// Adapter for the strong-derivative assembly and the analyticity machinery.
inline DerivEstimator make_derivative_estimator(double h0 = 0.25,
                                                int levels = 5) {
  return [h0, levels](const Orbit& f, int k, double t) -> Vector {
    if (k == 0) return f.eval(t);
    const double reach = t - f.domain_start;
    const double step = std::min(h0, reach > 0 ? 0.5 * reach / k : h0);
    auto est = derivative_estimate(f, t, k, step, levels);
    if (est.inconclusive) {
      std::vector<std::pair<double, double>> trace;
      for (std::size_t i = 0; i < est.discrepancies.size(); ++i)
        trace.emplace_back(static_cast<double>(i), est.discrepancies[i]);
      throw InconclusiveError("derivative estimate failed to converge (" +
                                  est.note + ")",
                              std::move(trace));
    }
    return est.value;
  };
}

// ---------------------------------------------------------------------------
// Difference-quotient seminorm: sup of |D[f](h)| over h in the step box,
// sampled with a scrambled low-discrepancy sequence plus the box corners.
// ---------------------------------------------------------------------------

/// Default box half-width at (k, t): min(1, (t - start)/(k+1)) keeps the
/// Minkowski reach strictly inside the admissible window with room to spare.
inline double default_box_delta(const Orbit& f, double t, int k) {
  if (!(t > f.domain_start))
    throw ConfigError("default_box_delta: t must lie inside the domain");
  return std::min(1.0, (t - f.domain_start) / (k + 1));
}

struct DiffSeminormOptions {
  RefinementPolicy policy{};
};

inline ExtRealVerdict diff_seminorm(const Orbit& f, double t, int k,
                                    double delta, int samples,
                                    const DiffSeminormOptions& opts) {
  if (samples < 1) throw ConfigError("diff_seminorm: samples must be >= 1");
  if (k < 1 || k > 24) throw ConfigError("diff_seminorm: order out of range");
  if (!(delta > 0)) throw ConfigError("diff_seminorm: delta must be > 0");
  if (!(t - k * delta > f.domain_start))
    throw ConfigError("diff_seminorm: reach leaves the orbit domain");

  const double floor = delta * std::pow(2.0, -20);  // keep clear of the axes
  HaltonSequence seq(k);
  auto quotient_at = [&](const std::vector<double>& h) {
    StepBox box;
    box.k = k;
    box.delta = delta;
    box.t = t;
    box.h = h;
    std::sort(box.h.begin(), box.h.end());
    return detail::subset_sum_quotient(f, box).norm();
  };

  double corner_sup = 0.0;
  if (k <= 12) {
    const std::uint64_t corners = std::uint64_t{1} << k;
    std::vector<double> h(static_cast<std::size_t>(k));
    for (std::uint64_t mask = 0; mask < corners; ++mask) {
      for (int j = 0; j < k; ++j)
        h[static_cast<std::size_t>(j)] = (mask & (std::uint64_t{1} << j)) ? delta : -delta;
      corner_sup = std::max(corner_sup, quotient_at(h));
    }
  }

  std::uint64_t seen = 0;
  return refine_to_verdict(
      opts.policy, static_cast<double>(samples), [&](int level, double nf) {
        const std::uint64_t n = static_cast<std::uint64_t>(std::llround(nf));
        double best = (level == 0) ? corner_sup : 0.0;
        std::vector<double> h(static_cast<std::size_t>(k));
        for (std::uint64_t i = seen; i < n; ++i) {
          const auto u = seq.point(i);
          for (int j = 0; j < k; ++j) {
            double hj = delta * (2.0 * u[static_cast<std::size_t>(j)] - 1.0);
            if (std::abs(hj) < floor) hj = std::copysign(floor, hj == 0.0 ? 1.0 : hj);
            h[static_cast<std::size_t>(j)] = hj;
          }
          best = std::max(best, quotient_at(h));
        }
        seen = n;
        return best;
      });
}

inline ExtRealVerdict diff_seminorm(const Orbit& f, double t, int k,
                                    double delta, int samples) {
  return diff_seminorm(f, t, k, delta, samples, DiffSeminormOptions{});
}

}  // namespace regkit
