#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "regkit/common.hpp"

namespace regkit {

/// Gauss-Legendre nodes and weights on [-1, 1], Newton iteration on the
/// Legendre recurrence. Computed in long double and cached per order.
struct GaussLegendre {
  std::vector<long double> nodes;
  std::vector<long double> weights;

  static const GaussLegendre& of(int n) {
    static std::mutex mu;
    static std::map<int, GaussLegendre> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build(n)).first;
    return it->second;
  }

 private:
  static GaussLegendre build(int n) {
    if (n < 1) throw ConfigError("Gauss-Legendre order must be >= 1");
    GaussLegendre out;
    out.nodes.resize(static_cast<std::size_t>(n));
    out.weights.resize(static_cast<std::size_t>(n));
    const long double pi = 3.14159265358979323846264338327950288L;
    for (int i = 0; i < n; ++i) {
      // Tricomi initial guess, then Newton.
      long double x = std::cos(pi * (static_cast<long double>(i) + 0.75L) /
                               (static_cast<long double>(n) + 0.5L));
      long double dp = 0.0L;
      for (int iter = 0; iter < 100; ++iter) {
        long double p0 = 1.0L, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const long double pk = ((2.0L * k - 1.0L) * x * p1 - (k - 1.0L) * p0) / k;
          p0 = p1;
          p1 = pk;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0L);
        const long double dx = p1 / dp;
        x -= dx;
        if (std::fabs(dx) < 1e-19L) break;
      }
      out.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
      out.weights[static_cast<std::size_t>(n - 1 - i)] =
          2.0L / ((1.0L - x * x) * dp * dp);
    }
    return out;
  }
};

/// Integrates g over [a, b] with a single Gauss-Legendre panel.
template <class Fn>
long double gl_integrate(Fn&& g, long double a, long double b, int order) {
  const auto& rule = GaussLegendre::of(order);
  const long double mid = 0.5L * (a + b);
  const long double half = 0.5L * (b - a);
  long double acc = 0.0L;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    acc += rule.weights[i] * g(mid + half * rule.nodes[i]);
  return half * acc;
}

/// Panel breakpoints on [-1, 1] geometrically graded toward both endpoints:
/// 0, ±1/2, ±3/4, ..., ±(1 - 2^-depth), ±1. Resolves integrands whose
/// variation concentrates near the endpoints.
inline std::vector<std::pair<long double, long double>> graded_panels(int depth) {
  std::vector<long double> right{0.0L};
  for (int j = 1; j <= depth; ++j) right.push_back(1.0L - std::pow(2.0L, -j));
  right.push_back(1.0L);
  std::vector<std::pair<long double, long double>> panels;
  for (std::size_t i = 0; i + 1 < right.size(); ++i) {
    panels.emplace_back(right[i], right[i + 1]);
    panels.emplace_back(-right[i + 1], -right[i]);
  }
  return panels;
}

}  // namespace regkit
