#pragma once

#include <algorithm>
#include <atomic>
#include <complex>
#include <cstdlib>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace regkit {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Caller-side misuse: bad parameters, dimension mismatches, unusable config.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation that needed a decisive numeric answer could not certify one.
/// Carries the refinement trace that stalled.
class InconclusiveError : public std::runtime_error {
 public:
  explicit InconclusiveError(const std::string& what,
                             std::vector<std::pair<double, double>> trace = {})
      : std::runtime_error(what), trace_(std::move(trace)) {}

  const std::vector<std::pair<double, double>>& trace() const { return trace_; }

 private:
  std::vector<std::pair<double, double>> trace_;
};

class OutOfDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Pairwise (cascade) summation; the result does not depend on chunking or
/// thread count, only on the element order.
inline double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

inline int thread_budget() {
  if (const char* env = std::getenv("REG_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(i) for i in [0, n) over a fixed 64-slice grid. The slice
/// decomposition is independent of the thread count, so per-slice reductions
/// combine identically no matter how many workers run.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const int threads = thread_budget();
  if (n == 0) return;
  if (threads <= 1 || n < 256) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  constexpr std::size_t kSlices = 64;
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  const std::size_t slice = (n + kSlices - 1) / kSlices;
  auto worker = [&] {
    for (;;) {
      const std::size_t s = next.fetch_add(1);
      if (s >= kSlices) return;
      const std::size_t lo = s * slice;
      const std::size_t hi = std::min(n, lo + slice);
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    }
  };
  const int workers = std::min<int>(threads, static_cast<int>(kSlices));
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace regkit
