#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "regkit/common.hpp"
#include "regkit/kernel.hpp"
#include "regkit/quadrature.hpp"

namespace regkit {

// ---------------------------------------------------------------------------
// The bump rho(x) = exp(1/(x^2-1)) on (-1,1) and its derivatives through the
// rational-prefactor recurrence
//   rho^(k)(x) = P_k(x) / (x^2-1)^(2k) * rho(x),
//   P_{k+1} = P_k' (x^2-1)^2 - P_k (4 k x (x^2-1) + 2 x),  P_0 = 1.
// The P_k have integer coefficients; they are built once in exact int64
// arithmetic (growth stays far below 2^63 up to k = 12) and evaluated in
// long double.
// ---------------------------------------------------------------------------

class BumpKernel {
 public:
  static constexpr int kMaxDeriv = 12;

  static long double rho(long double x) {
    const long double u = x * x - 1.0L;
    if (u >= 0.0L) return 0.0L;
    return std::exp(1.0L / u);
  }

  static long double rho_deriv(int k, long double x) {
    if (k < 0 || k > kMaxDeriv)
      throw ConfigError("bump derivative order out of range (0..12)");
    if (k == 0) return rho(x);
    const long double u = x * x - 1.0L;
    if (u >= 0.0L) return 0.0L;
    const long double e = std::exp(1.0L / u);
    if (e == 0.0L) return 0.0L;  // past this point u^(2k) cannot underflow
    const auto& poly = prefactors()[static_cast<std::size_t>(k)];
    long double p = 0.0L;
    for (std::size_t i = poly.size(); i-- > 0;) p = p * x + poly[i];
    return p / std::pow(u, static_cast<long double>(2 * k)) * e;
  }

  /// Integral of rho over (-1, 1); about 0.4439938.
  static long double mass() {
    static const long double m = [] {
      long double acc = 0.0L;
      for (const auto& [a, b] : graded_panels(14))
        acc += gl_integrate([](long double x) { return rho(x); }, a, b, 48);
      return acc;
    }();
    return m;
  }

  /// Normalized absolute moment (1/mass) * integral of |rho^(k)|. Grows fast
  /// in k (about 1, 1.7, 7.2, 80, 2.4e3, 1.3e5, 1.2e7, ...) and sets the
  /// cancellation amplification of convolutions against the k-th derivative.
  static double abs_moment(int k) {
    if (k < 0 || k > kMaxDeriv)
      throw ConfigError("bump derivative order out of range (0..12)");
    static std::mutex mu;
    static std::vector<double> table;
    std::lock_guard<std::mutex> lock(mu);
    while (static_cast<int>(table.size()) <= k) {
      const int order = static_cast<int>(table.size());
      long double acc = 0.0L;
      for (const auto& [a, b] : graded_panels(14))
        acc += gl_integrate(
            [order](long double x) { return std::fabs(rho_deriv(order, x)); },
            a, b, 48);
      table.push_back(static_cast<double>(acc / mass()));
    }
    return table[static_cast<std::size_t>(k)];
  }

 private:
  // prefactors()[k] holds P_k coefficients, lowest power first.
  static const std::vector<std::vector<long double>>& prefactors() {
    static const std::vector<std::vector<long double>> table = [] {
      std::vector<std::vector<std::int64_t>> polys;
      polys.push_back({1});  // P_0
      for (int k = 0; k < kMaxDeriv; ++k) {
        const auto& p = polys.back();
        const std::size_t deg = p.size() - 1;
        std::vector<std::int64_t> next(deg + 4, 0);
        // P_k' * (x^4 - 2 x^2 + 1)
        for (std::size_t i = 1; i <= deg; ++i) {
          const std::int64_t d = p[i] * static_cast<std::int64_t>(i);
          next[i - 1] += d;
          next[i + 1] -= 2 * d;
          next[i + 3] += d;
        }
        // - P_k * (4 k x^3 + (2 - 4 k) x)
        for (std::size_t i = 0; i <= deg; ++i) {
          next[i + 3] -= 4 * static_cast<std::int64_t>(k) * p[i];
          next[i + 1] -= (2 - 4 * static_cast<std::int64_t>(k)) * p[i];
        }
        while (next.size() > 1 && next.back() == 0) next.pop_back();
        polys.push_back(std::move(next));
      }
      std::vector<std::vector<long double>> out(polys.size());
      for (std::size_t k = 0; k < polys.size(); ++k)
        out[k].assign(polys[k].begin(), polys[k].end());
      return out;
    }();
    return table;
  }
};

/// Scaled unit-mass kernel: varrho_l(x) = C l rho(l x) with C = 1/mass, so
/// supp(varrho_l) = [-1/l, 1/l] and the integral is 1 for every l.
struct MollifierFamily {
  int l = 1;

  explicit MollifierFamily(int l_) : l(l_) {
    if (l < 1) throw ConfigError("mollifier index must be >= 1");
  }

  static double normalization() {
    return static_cast<double>(1.0L / BumpKernel::mass());
  }

  double value(double x) const {
    return static_cast<double>(static_cast<long double>(normalization()) * l *
                               BumpKernel::rho(static_cast<long double>(l) * x));
  }

  double deriv(int k, double x) const {
    const long double scale =
        (1.0L / BumpKernel::mass()) *
        std::pow(static_cast<long double>(l), static_cast<long double>(k) + 1.0L);
    return static_cast<double>(
        scale * BumpKernel::rho_deriv(k, static_cast<long double>(l) * x));
  }
};

/// varrho_l^{(k)}(x); exactly zero outside the open support.
inline double bump_deriv(int l, int k, double x) {
  return MollifierFamily(l).deriv(k, x);
}

namespace detail {

struct KernelRow {
  std::vector<long double> abscissae;  // u-nodes on (-1, 1)
  std::vector<long double> weights;    // panel-scaled GL weights
  std::vector<std::vector<long double>> rows;  // rows[k][node] = rho^(k)(u)
};

/// Fixed quadrature layout in the scaled variable u = l s: graded panels
/// toward the support endpoints, where the kernel derivatives concentrate.
inline const KernelRow& kernel_row(int max_k, int nodes_per_panel) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, KernelRow> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(max_k, nodes_per_panel);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  KernelRow row;
  const auto& rule = GaussLegendre::of(nodes_per_panel);
  for (const auto& [a, b] : graded_panels(12)) {
    const long double mid = 0.5L * (a + b), half = 0.5L * (b - a);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      row.abscissae.push_back(mid + half * rule.nodes[i]);
      row.weights.push_back(half * rule.weights[i]);
    }
  }
  row.rows.resize(static_cast<std::size_t>(max_k) + 1);
  for (int k = 0; k <= max_k; ++k) {
    auto& r = row.rows[static_cast<std::size_t>(k)];
    r.resize(row.abscissae.size());
    for (std::size_t i = 0; i < row.abscissae.size(); ++i)
      r[i] = BumpKernel::rho_deriv(k, row.abscissae[i]);
  }
  return cache.emplace(key, std::move(row)).first->second;
}

inline Vector orbit_eval_zero_extended(const Orbit& f, double t) {
  if (t < f.domain_start) return Vector::Zero(f.dim);
  return f.eval(t);
}

}  // namespace detail

/// (f * varrho_l^{(k)})(t) = integral of f(t-s) varrho_l^{(k)}(s) over the
/// support, with f extended by zero below its domain start. Long-double
/// accumulation: the kernel derivatives are huge and the integral cancels
/// almost completely, so double-width rounding would dominate for k >= 3.
inline Vector mollify_deriv(const Orbit& f, int l, int k, double t,
                            int nodes_per_panel = 32) {
  if (l < 1) throw ConfigError("mollify_deriv: index must be >= 1");
  if (k < 0 || k > BumpKernel::kMaxDeriv)
    throw ConfigError("mollify_deriv: order out of range (0..12)");
  const int nodes = k >= 8 ? 2 * nodes_per_panel : nodes_per_panel;
  const auto& row = detail::kernel_row(BumpKernel::kMaxDeriv, nodes);

  const long double scale =
      (1.0L / BumpKernel::mass()) *
      std::pow(static_cast<long double>(l), static_cast<long double>(k));
  std::vector<long double> acc_re(static_cast<std::size_t>(f.dim), 0.0L);
  std::vector<long double> acc_im(static_cast<std::size_t>(f.dim), 0.0L);
  const auto& ker = row.rows[static_cast<std::size_t>(k)];
  for (std::size_t i = 0; i < row.abscissae.size(); ++i) {
    const long double w = row.weights[i] * ker[i];
    if (w == 0.0L) continue;
    const double s = static_cast<double>(row.abscissae[i]) / l;
    const Vector fv = detail::orbit_eval_zero_extended(f, t - s);
    for (Eigen::Index d = 0; d < f.dim; ++d) {
      acc_re[static_cast<std::size_t>(d)] += w * static_cast<long double>(fv[d].real());
      acc_im[static_cast<std::size_t>(d)] += w * static_cast<long double>(fv[d].imag());
    }
  }
  Vector out(f.dim);
  for (Eigen::Index d = 0; d < f.dim; ++d)
    out[d] = Complex(static_cast<double>(scale * acc_re[static_cast<std::size_t>(d)]),
                     static_cast<double>(scale * acc_im[static_cast<std::size_t>(d)]));
  return out;
}

// ---------------------------------------------------------------------------
// Mollifier smoothness probe: f is smooth to order k on a compact window iff
// the ladder of convolutions f * varrho_l^{(k)} is uniformly Cauchy there.
// ---------------------------------------------------------------------------

struct SmoothnessOrderReport {
  int order = 0;
  bool converged = false;
  double scale = 0.0;
  std::vector<double> gaps;  // sup-distance per consecutive ladder pair
};

struct SmoothnessReport {
  std::vector<int> ladder;
  std::vector<SmoothnessOrderReport> orders;  // index = derivative order

  bool smooth_to(int k) const {
    if (k >= static_cast<int>(orders.size())) return false;
    for (int i = 0; i <= k; ++i)
      if (!orders[static_cast<std::size_t>(i)].converged) return false;
    return true;
  }
};

/// Default ladder 2, 4, ..., 1024 (the index-1 kernel is skipped so supports
/// stay inside the halved neighborhood the convolution needs near t >= 1).
inline std::vector<int> default_mollifier_ladder() {
  return {2, 4, 8, 16, 32, 64, 128, 256, 512, 1024};
}

struct SmoothnessProbeOptions {
  int grid_points = 0;  // 0: derived from the top ladder index
  double rel_tol = 1e-6;
  int nodes_per_panel = 32;
};

inline SmoothnessReport smoothness_probe(const Orbit& f,
                                         const TimeWindow& window, int max_order,
                                         std::vector<int> ladder = {},
                                         const SmoothnessProbeOptions& opts = {}) {
  if (!window.bounded())
    throw ConfigError("smoothness_probe: needs a compact window");
  if (max_order < 0 || max_order > BumpKernel::kMaxDeriv)
    throw ConfigError("smoothness_probe: order out of range");
  if (ladder.empty()) ladder = default_mollifier_ladder();
  if (ladder.size() < 2) throw ConfigError("smoothness_probe: ladder too short");
  for (std::size_t i = 0; i + 1 < ladder.size(); ++i)
    if (ladder[i] >= ladder[i + 1] || ladder[i] < 1)
      throw ConfigError("smoothness_probe: ladder must be increasing, >= 1");

  const int l_max = ladder.back();
  // The grid must resolve 1/l_max features or a kink hiding between grid
  // points would look smooth.
  const int grid_n = opts.grid_points > 0
                         ? opts.grid_points
                         : std::max(129, 2 * l_max + 1);

  SmoothnessReport report;
  report.ladder = ladder;
  report.orders.resize(static_cast<std::size_t>(max_order) + 1);
  for (int k = 0; k <= max_order; ++k) {
    auto& ord = report.orders[static_cast<std::size_t>(k)];
    ord.order = k;
    ord.gaps.assign(ladder.size() - 1, 0.0);
  }

  const int nodes = max_order >= 8 ? 2 * opts.nodes_per_panel : opts.nodes_per_panel;
  const auto& row = detail::kernel_row(BumpKernel::kMaxDeriv, nodes);
  const std::size_t nn = row.abscissae.size();
  const long double inv_mass = 1.0L / BumpKernel::mass();
  const std::size_t orders = static_cast<std::size_t>(max_order) + 1;
  const std::size_t pairs = ladder.size() - 1;

  // Grid points evaluated in parallel into per-point slots; one orbit row
  // per (t, l) feeds every order. The max-reduction below runs in a fixed
  // order, so the report does not depend on the thread count.
  std::vector<double> local_gaps(static_cast<std::size_t>(grid_n) * orders * pairs);
  std::vector<double> local_scales(static_cast<std::size_t>(grid_n) * orders);
  parallel_for(static_cast<std::size_t>(grid_n), [&](std::size_t g) {
    const double t =
        window.lo + window.width() * static_cast<double>(g) / (grid_n - 1);
    std::vector<std::vector<Vector>> conv(ladder.size(),
                                          std::vector<Vector>(orders));
    std::vector<Vector> frow(nn);
    for (std::size_t li = 0; li < ladder.size(); ++li) {
      const int l = ladder[li];
      for (std::size_t i = 0; i < nn; ++i)
        frow[i] = detail::orbit_eval_zero_extended(
            f, t - static_cast<double>(row.abscissae[i]) / l);
      for (std::size_t k = 0; k < orders; ++k) {
        const auto& ker = row.rows[k];
        const long double scale =
            inv_mass * std::pow(static_cast<long double>(l),
                                static_cast<long double>(k));
        Vector out(f.dim);
        for (Eigen::Index d = 0; d < f.dim; ++d) {
          long double re = 0.0L, im = 0.0L;
          for (std::size_t i = 0; i < nn; ++i) {
            const long double w = row.weights[i] * ker[i];
            re += w * static_cast<long double>(frow[i][d].real());
            im += w * static_cast<long double>(frow[i][d].imag());
          }
          out[d] = Complex(static_cast<double>(scale * re),
                           static_cast<double>(scale * im));
        }
        conv[li][k] = std::move(out);
      }
    }
    for (std::size_t k = 0; k < orders; ++k) {
      for (std::size_t li = 0; li + 1 < ladder.size(); ++li)
        local_gaps[(g * orders + k) * pairs + li] =
            (conv[li][k] - conv[li + 1][k]).norm();
      local_scales[g * orders + k] = conv.back()[k].norm();
    }
  });
  for (std::size_t g = 0; g < static_cast<std::size_t>(grid_n); ++g)
    for (std::size_t k = 0; k < orders; ++k) {
      auto& ord = report.orders[k];
      for (std::size_t li = 0; li < pairs; ++li)
        ord.gaps[li] =
            std::max(ord.gaps[li], local_gaps[(g * orders + k) * pairs + li]);
      ord.scale = std::max(ord.scale, local_scales[g * orders + k]);
    }

  // Convergence threshold: the relative tolerance plus the double-precision
  // noise floor of the convolution itself. Function values carry eps-relative
  // rounding that the kernel derivative amplifies by abs_moment(k) * l^k, so
  // gaps below that level are indistinguishable from data noise.
  const double base_scale =
      std::max(report.orders[0].scale, 1e-12);
  for (int k = 0; k <= max_order; ++k) {
    auto& ord = report.orders[static_cast<std::size_t>(k)];
    const double scale_k = std::max(ord.scale, 1e-12);
    const double noise_floor =
        2.0 * std::numeric_limits<double>::epsilon() *
        BumpKernel::abs_moment(k) *
        std::pow(static_cast<double>(l_max), k) * base_scale;
    ord.converged = ord.gaps.back() < opts.rel_tol * scale_k + noise_floor;
  }
  return report;
}

}  // namespace regkit
