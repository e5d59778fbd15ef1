#pragma once

#include <cstdint>
#include <vector>

#include "regkit/common.hpp"

namespace regkit {

/// Halton sequence with a fixed per-dimension digit scramble. Deterministic:
/// the i-th point is a pure function of (i, dim).
class HaltonSequence {
 public:
  explicit HaltonSequence(int dim) : bases_(first_primes(dim)) {
    if (dim < 1) throw ConfigError("Halton dimension must be >= 1");
  }

  /// Point index i (0-based), coordinates in (0, 1).
  std::vector<double> point(std::uint64_t i) const {
    std::vector<double> x(bases_.size());
    for (std::size_t d = 0; d < bases_.size(); ++d)
      x[d] = radical_inverse(i + 1, bases_[d], multiplier(d));
    return x;
  }

  int dim() const { return static_cast<int>(bases_.size()); }

 private:
  static std::vector<std::uint32_t> first_primes(int n) {
    std::vector<std::uint32_t> ps;
    std::uint32_t c = 2;
    while (static_cast<int>(ps.size()) < n) {
      bool prime = true;
      for (std::uint32_t p : ps) {
        if (p * p > c) break;
        if (c % p == 0) {
          prime = false;
          break;
        }
      }
      if (prime) ps.push_back(c);
      ++c;
    }
    return ps;
  }

  // Multiplicative digit scramble (units digit fixed-point free for gcd=1).
  std::uint32_t multiplier(std::size_t d) const {
    const std::uint32_t b = bases_[d];
    std::uint32_t m = (17u * (static_cast<std::uint32_t>(d) + 3u)) % b;
    if (m == 0) m = 1;
    return m;
  }

  static double radical_inverse(std::uint64_t i, std::uint32_t base,
                                std::uint32_t mult) {
    double inv = 1.0 / base, f = inv, x = 0.0;
    while (i > 0) {
      const std::uint64_t digit = (i % base) * mult % base;
      x += static_cast<double>(digit) * f;
      i /= base;
      f *= inv;
    }
    return x;
  }

  std::vector<std::uint32_t> bases_;
};

}  // namespace regkit
