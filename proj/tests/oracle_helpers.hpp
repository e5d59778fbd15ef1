#pragma once

// Test-only brute-force oracles, independent of the library's computation
// paths.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include <regkit/kernel.hpp>

namespace oracle {

using regkit::Complex;
using regkit::Vector;

// Alternating subset sum written directly from the defining formula, with a
// plain recursive subset walk (no bitmask sharing with the implementation).
// Accumulates in quad precision: the sum cancels by a factor of prod h_j and
// the comparison tolerance sits far below double-width reordering noise.
inline Complex brute_subset_quotient(const std::function<Complex(double)>& f,
                                     double t, const std::vector<double>& h) {
  const int k = static_cast<int>(h.size());
  __float128 re = 0, im = 0;
  std::function<void(int, int, double)> walk = [&](int idx, int size,
                                                   double shift) {
    if (idx == k) {
      const int sign = ((k - size) % 2 == 0) ? 1 : -1;
      const Complex v = f(t + shift);
      re += sign * static_cast<__float128>(v.real());
      im += sign * static_cast<__float128>(v.imag());
      return;
    }
    walk(idx + 1, size, shift);
    walk(idx + 1, size + 1, shift + h[static_cast<std::size_t>(idx)]);
  };
  walk(0, 0, 0.0);
  __float128 denom = 1;
  for (double x : h) denom *= static_cast<__float128>(x);
  return Complex(static_cast<double>(re / denom),
                 static_cast<double>(im / denom));
}

// Pairwise Holder quotient maximum over an explicit sample list.
inline double brute_holder_sup(const std::function<double(double)>& f,
                               const std::vector<double>& ts, double alpha) {
  double best = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i)
    for (std::size_t j = 0; j < ts.size(); ++j) {
      if (!(ts[i] < ts[j])) continue;
      best = std::max(best, std::abs(f(ts[j]) - f(ts[i])) /
                                std::pow(ts[j] - ts[i], alpha));
    }
  return best;
}

// Trapezoid-free partition sum for total variation over an explicit grid.
inline double brute_variation(const std::function<double(double)>& f,
                              const std::vector<double>& grid) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    acc += std::abs(f(grid[i + 1]) - f(grid[i]));
  return acc;
}

// Largest singular value of a small matrix via dense Jacobi SVD (Eigen's
// direct decomposition, not the library's power iteration).
inline double svd_norm(const regkit::Matrix& m) {
  Eigen::JacobiSVD<regkit::Matrix> svd(m);
  return svd.singularValues()(0);
}

inline double factorial(int k) {
  double f = 1.0;
  for (int q = 2; q <= k; ++q) f *= q;
  return f;
}

}  // namespace oracle
