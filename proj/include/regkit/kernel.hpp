#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "regkit/common.hpp"

namespace regkit {

// ---------------------------------------------------------------------------
// Extended-real verdicts
// ---------------------------------------------------------------------------

enum class VerdictKind { Finite, Diverging, Inconclusive };

/// Value of an extended seminorm as measured on nested sample sets. Infinity
/// is never stored as a float: divergence is certified by a growth-exponent
/// fit over the refinement trace.
struct ExtRealVerdict {
  VerdictKind kind = VerdictKind::Inconclusive;
  double value = 0.0;             // meaningful when Finite
  double growth_exponent = 0.0;   // meaningful when Diverging
  std::vector<std::pair<double, double>> refinement_trace;  // (resolution, partial sup)

  bool is_finite() const { return kind == VerdictKind::Finite; }
  bool is_diverging() const { return kind == VerdictKind::Diverging; }
  bool is_inconclusive() const { return kind == VerdictKind::Inconclusive; }

  static ExtRealVerdict finite(double v,
                               std::vector<std::pair<double, double>> trace = {}) {
    ExtRealVerdict out;
    out.kind = VerdictKind::Finite;
    out.value = v;
    out.refinement_trace = std::move(trace);
    return out;
  }
  static ExtRealVerdict diverging(double exponent,
                                  std::vector<std::pair<double, double>> trace = {}) {
    ExtRealVerdict out;
    out.kind = VerdictKind::Diverging;
    out.growth_exponent = exponent;
    out.refinement_trace = std::move(trace);
    return out;
  }
  static ExtRealVerdict inconclusive(
      std::vector<std::pair<double, double>> trace = {}) {
    ExtRealVerdict out;
    out.refinement_trace = std::move(trace);
    return out;
  }
};

inline const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Finite: return "finite";
    case VerdictKind::Diverging: return "diverging";
    case VerdictKind::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

/// How a supremum estimated on nested sample sets is promoted to a verdict:
/// Finite once two successive partial sups agree to finite_rel_tol, Diverging
/// once the log-log slope over the last slope_window trace points exceeds
/// divergence_slope, Inconclusive when max_levels is exhausted first.
struct RefinementPolicy {
  double finite_rel_tol = 1e-6;
  double divergence_slope = 0.1;
  int slope_window = 5;  // 4 doublings
  int max_levels = 12;
  double value_floor = 1e-300;
  double growth_factor = 2.0;  // resolution multiplier per level
  int finite_streak = 1;       // consecutive stable transitions required
};

namespace detail {

inline double loglog_slope(std::span<const std::pair<double, double>> pts,
                           double floor) {
  // Least-squares slope of log(sup) against log(resolution).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(pts.size());
  for (const auto& [res, sup] : pts) {
    const double x = std::log(res);
    const double y = std::log(std::max(sup, floor));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0) return 0.0;
  return (n * sxy - sx * sy) / denom;
}

}  // namespace detail

/// Drives dyadic refinement: sup_at(level, resolution) must return the
/// partial sup over a sample set that is nested as the level grows (the
/// driver additionally takes a running max, so traces are non-decreasing by
/// construction).
template <class SupFn>
ExtRealVerdict refine_to_verdict(const RefinementPolicy& policy, double res0,
                                 SupFn&& sup_at) {
  std::vector<std::pair<double, double>> trace;
  double running = 0.0;
  int stable = 0;
  for (int level = 0; level < policy.max_levels; ++level) {
    const double res = res0 * std::pow(policy.growth_factor, level);
    running = std::max(running, static_cast<double>(sup_at(level, res)));
    trace.emplace_back(res, running);
    if (static_cast<int>(trace.size()) >= policy.slope_window) {
      const auto tail = std::span<const std::pair<double, double>>(trace).last(
          static_cast<std::size_t>(policy.slope_window));
      const double slope = detail::loglog_slope(tail, policy.value_floor);
      if (slope > policy.divergence_slope)
        return ExtRealVerdict::diverging(slope, std::move(trace));
    }
    if (level >= 1) {
      const double prev = trace[trace.size() - 2].second;
      const double scale = std::max({std::abs(running), std::abs(prev),
                                     policy.value_floor});
      stable = std::abs(running - prev) <= policy.finite_rel_tol * scale
                   ? stable + 1
                   : 0;
      if (stable >= policy.finite_streak)
        return ExtRealVerdict::finite(running, std::move(trace));
    }
  }
  return ExtRealVerdict::inconclusive(std::move(trace));
}

// ---------------------------------------------------------------------------
// Time windows
// ---------------------------------------------------------------------------

/// Open interval (lo, hi); hi may be +infinity.
struct TimeWindow {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();

  TimeWindow() = default;
  TimeWindow(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!(lo >= 0.0)) throw ConfigError("window.lo must be >= 0");
    if (!(lo < hi)) throw ConfigError("window requires lo < hi");
  }

  bool bounded() const { return std::isfinite(hi); }
  double width() const { return hi - lo; }

  static TimeWindow after(double lo) { return TimeWindow(lo, std::numeric_limits<double>::infinity()); }
};

// ---------------------------------------------------------------------------
// Operators on finite-dimensional / grid-discretized spaces
// ---------------------------------------------------------------------------

/// Bounded operator on C^d: dense matrix or diagonal multiplier. Immutable
/// value type; all arithmetic returns fresh operators.
class Operator {
 public:
  static Operator dense(Matrix m) {
    if (m.rows() != m.cols()) throw ConfigError("dense operator must be square");
    return Operator(std::move(m));
  }
  static Operator diagonal(Vector d) { return Operator(std::move(d)); }
  static Operator identity(Eigen::Index n) {
    return diagonal(Vector::Ones(n));
  }
  static Operator zero(Eigen::Index n) { return diagonal(Vector::Zero(n)); }

  Eigen::Index dim() const {
    if (const Matrix* m = std::get_if<Matrix>(&rep_)) return m->rows();
    return std::get<Vector>(rep_).size();
  }
  bool is_diagonal() const { return std::holds_alternative<Vector>(rep_); }

  const Vector& diagonal_entries() const { return std::get<Vector>(rep_); }

  /// Dense view; materializes a diagonal on demand.
  Matrix to_matrix() const {
    if (const Matrix* m = std::get_if<Matrix>(&rep_)) return *m;
    return Matrix(std::get<Vector>(rep_).asDiagonal());
  }

  Vector apply(const Vector& x) const {
    if (x.size() != dim())
      throw ConfigError("operator/vector dimension mismatch");
    if (const Matrix* m = std::get_if<Matrix>(&rep_)) return (*m) * x;
    return std::get<Vector>(rep_).cwiseProduct(x);
  }

  Operator compose(const Operator& rhs) const {  // this ∘ rhs
    if (dim() != rhs.dim()) throw ConfigError("operator dimension mismatch");
    if (is_diagonal() && rhs.is_diagonal())
      return diagonal(diagonal_entries().cwiseProduct(rhs.diagonal_entries()));
    return dense(to_matrix() * rhs.to_matrix());
  }

  Operator plus(const Operator& rhs) const {
    if (dim() != rhs.dim()) throw ConfigError("operator dimension mismatch");
    if (is_diagonal() && rhs.is_diagonal())
      return diagonal(diagonal_entries() + rhs.diagonal_entries());
    return dense(to_matrix() + rhs.to_matrix());
  }

  Operator minus(const Operator& rhs) const {
    if (dim() != rhs.dim()) throw ConfigError("operator dimension mismatch");
    if (is_diagonal() && rhs.is_diagonal())
      return diagonal(diagonal_entries() - rhs.diagonal_entries());
    return dense(to_matrix() - rhs.to_matrix());
  }

  Operator scaled(Complex a) const {
    if (is_diagonal()) return diagonal(a * diagonal_entries());
    return dense(a * to_matrix());
  }

  /// Operator norm. Diagonal: max modulus. Dense: largest singular value via
  /// power iteration on M*M, relative tolerance 1e-12, 10000 iteration cap.
  double norm() const {
    if (is_diagonal()) {
      const Vector& d = diagonal_entries();
      double m = 0.0;
      for (Eigen::Index i = 0; i < d.size(); ++i)
        m = std::max(m, std::abs(d[i]));
      return m;
    }
    const Matrix& m = std::get<Matrix>(rep_);
    const double frob = m.norm();
    if (frob == 0.0) return 0.0;
    Vector v = Vector::Ones(m.cols());
    for (Eigen::Index i = 0; i < v.size(); ++i)
      v[i] += Complex(0.0, 1e-3 * static_cast<double>(i + 1));
    v /= v.norm();
    double sigma2 = 0.0;
    for (int iter = 0; iter < 10000; ++iter) {
      Vector w = m.adjoint() * (m * v);
      const double lambda = w.norm();
      if (lambda == 0.0) return 0.0;
      w /= lambda;
      const double change = std::abs(lambda - sigma2);
      sigma2 = lambda;
      v = std::move(w);
      if (change <= 1e-12 * std::max(sigma2, 1e-300)) break;
    }
    return std::sqrt(sigma2);
  }

 private:
  explicit Operator(Matrix m) : rep_(std::move(m)) {}
  explicit Operator(Vector d) : rep_(std::move(d)) {}
  std::variant<Matrix, Vector> rep_;
};

// ---------------------------------------------------------------------------
// Orbits and operator-valued functions
// ---------------------------------------------------------------------------

/// Evaluable trajectory t -> vector for t >= domain_start, with an optional
/// exact derivative oracle (order, t) -> vector. deriv(0, t) == eval(t).
struct Orbit {
  Eigen::Index dim = 1;
  double domain_start = 0.0;
  std::function<Vector(double)> eval;
  std::function<Vector(int, double)> deriv;  // optional

  bool has_deriv() const { return static_cast<bool>(deriv); }

  Vector operator()(double t) const { return eval(t); }
};

/// Wraps a scalar map into a dim-1 orbit.
inline Orbit scalar_orbit(std::function<double(double)> f,
                          std::function<double(int, double)> df = {},
                          double domain_start = 0.0) {
  Orbit o;
  o.dim = 1;
  o.domain_start = domain_start;
  o.eval = [f = std::move(f)](double t) {
    Vector v(1);
    v[0] = f(t);
    return v;
  };
  if (df)
    o.deriv = [df = std::move(df)](int k, double t) {
      Vector v(1);
      v[0] = df(k, t);
      return v;
    };
  return o;
}

inline Orbit complex_scalar_orbit(std::function<Complex(double)> f,
                                  std::function<Complex(int, double)> df = {},
                                  double domain_start = 0.0) {
  Orbit o;
  o.dim = 1;
  o.domain_start = domain_start;
  o.eval = [f = std::move(f)](double t) {
    Vector v(1);
    v[0] = f(t);
    return v;
  };
  if (df)
    o.deriv = [df = std::move(df)](int k, double t) {
      Vector v(1);
      v[0] = df(k, t);
      return v;
    };
  return o;
}

inline Orbit scaled_orbit(const Orbit& o, Complex a) {
  Orbit out;
  out.dim = o.dim;
  out.domain_start = o.domain_start;
  out.eval = [ev = o.eval, a](double t) -> Vector { return a * ev(t); };
  if (o.has_deriv())
    out.deriv = [dv = o.deriv, a](int k, double t) -> Vector {
      return a * dv(k, t);
    };
  return out;
}

inline Orbit sum_orbit(const Orbit& x, const Orbit& y) {
  if (x.dim != y.dim) throw ConfigError("orbit sum: dimension mismatch");
  Orbit out;
  out.dim = x.dim;
  out.domain_start = std::max(x.domain_start, y.domain_start);
  out.eval = [fx = x.eval, fy = y.eval](double t) -> Vector {
    return fx(t) + fy(t);
  };
  if (x.has_deriv() && y.has_deriv())
    out.deriv = [dx = x.deriv, dy = y.deriv](int k, double t) -> Vector {
      return dx(k, t) + dy(k, t);
    };
  return out;
}

/// Evaluable map t -> operator with optional derivative oracle. Orbits are
/// derived views: orbit(x).eval(t) == eval(t) . x by construction.
struct OperatorFunction {
  Eigen::Index dim = 0;
  double domain_start = 0.0;
  std::function<Operator(double)> eval;
  std::function<Operator(int, double)> deriv;  // optional

  bool has_deriv() const { return static_cast<bool>(deriv); }

  Orbit orbit(Vector x) const {
    if (x.size() != dim) throw ConfigError("probe vector dimension mismatch");
    Orbit o;
    o.dim = dim;
    o.domain_start = domain_start;
    o.eval = [ev = eval, x](double t) { return ev(t).apply(x); };
    if (deriv)
      o.deriv = [dv = deriv, x](int k, double t) { return dv(k, t).apply(x); };
    return o;
  }
};

inline Vector eval_orbit(const OperatorFunction& F, const Vector& x, double t) {
  if (x.size() != F.dim) throw ConfigError("eval_orbit: dimension mismatch");
  if (t < F.domain_start) throw ConfigError("eval_orbit: t below domain start");
  return F.eval(t).apply(x);
}

// ---------------------------------------------------------------------------
// Spatial grids (discretization of the multiplier variable)
// ---------------------------------------------------------------------------

struct SpatialGrid {
  enum class Spacing { Uniform, Logarithmic };

  double s_max = 1.0;
  Spacing spacing = Spacing::Uniform;
  std::vector<double> points;  // strictly increasing, within [0, s_max]

  static SpatialGrid uniform(double s_max, int n) {
    if (!(s_max > 0) || n < 2) throw ConfigError("uniform grid needs s_max > 0, n >= 2");
    SpatialGrid g;
    g.s_max = s_max;
    g.spacing = Spacing::Uniform;
    g.points.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      g.points[static_cast<std::size_t>(i)] = s_max * i / (n - 1);
    return g;
  }

  static SpatialGrid logarithmic(double s_min, double s_max, int n) {
    if (!(0 < s_min && s_min < s_max) || n < 2)
      throw ConfigError("log grid needs 0 < s_min < s_max, n >= 2");
    SpatialGrid g;
    g.s_max = s_max;
    g.spacing = Spacing::Logarithmic;
    g.points.resize(static_cast<std::size_t>(n));
    const double l0 = std::log(s_min), l1 = std::log(s_max);
    for (int i = 0; i < n; ++i)
      g.points[static_cast<std::size_t>(i)] =
          std::exp(l0 + (l1 - l0) * i / (n - 1));
    // Pin the endpoints exactly; exp/log round-tripping may land a hair off.
    g.points.front() = s_min;
    g.points.back() = s_max;
    return g;
  }
};

// ---------------------------------------------------------------------------
// Strong-derivative assembly
// ---------------------------------------------------------------------------

/// Per-orbit derivative estimator used when no oracle is attached; throws
/// InconclusiveError when the estimate does not converge.
using DerivEstimator = std::function<Vector(const Orbit&, int, double)>;

/// Assembles the order-k derivative operator columnwise from basis orbits:
/// the action on e_j is the k-th derivative of the orbit of e_j at t. With an
/// oracle attached this is exact; otherwise est supplies the per-column
/// numerical estimate.
inline Operator assemble_derivative_operator(const OperatorFunction& F, int k,
                                             double t,
                                             const DerivEstimator& est = {}) {
  if (k < 0) throw ConfigError("derivative order must be >= 0");
  if (F.has_deriv()) return F.deriv(k, t);
  if (!est)
    throw ConfigError(
        "assemble_derivative_operator: no oracle and no estimator supplied");
  Matrix cols(F.dim, F.dim);
  for (Eigen::Index j = 0; j < F.dim; ++j) {
    Vector e = Vector::Zero(F.dim);
    e[j] = 1.0;
    cols.col(j) = est(F.orbit(e), k, t);
  }
  return Operator::dense(std::move(cols));
}

}  // namespace regkit
