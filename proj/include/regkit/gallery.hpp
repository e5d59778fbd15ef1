#pragma once

#include <cmath>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "regkit/common.hpp"
#include "regkit/kernel.hpp"

namespace regkit {

// ---------------------------------------------------------------------------
// Example constructors. Each carries an exact derivative oracle where a
// closed form exists.
// ---------------------------------------------------------------------------

/// u(t) = [[t^2, t], [0, 0]]: polynomial entries, deliberately not a
/// semigroup.
struct MatrixPolyParams {};

/// Multiplication semigroup on a grid discretization of continuous functions
/// vanishing at infinity, symbol a(s) = -log(1+s) + i s:
/// T(t) = diag(exp(t a(s_j))).
struct MultiplicationC0Params {
  SpatialGrid grid;
};

/// Right shift by floor(t/dt) cells on a uniform grid over [0, 1], zero fill;
/// identically zero for t >= 1.
struct NilpotentShiftParams {
  double dt = 0.01;
};

/// T(t) = diag(exp(t lambda_j)) with Re lambda_j < 0.
struct DiagonalAnalyticParams {
  std::vector<Complex> lambdas;
};

/// T(t) = exp(t A) for a dense matrix A (scaling and squaring), oracle
/// A^k exp(t A).
struct DenseMatrixExpParams {
  Matrix a;
};

/// T(t) = exp(t N) for the nilpotent Jordan block of the given size:
/// entries t^(j-i)/(j-i)! above the diagonal, exact polynomials.
struct JordanNilpotentExpParams {
  int dim = 4;
};

using ExampleSpec =
    std::variant<MatrixPolyParams, MultiplicationC0Params, NilpotentShiftParams,
                 DiagonalAnalyticParams, DenseMatrixExpParams,
                 JordanNilpotentExpParams>;

/// Symbol of the multiplication example.
inline Complex c0_symbol(double s) { return Complex(-std::log1p(s), s); }

namespace detail {

inline OperatorFunction make_matrix_poly() {
  OperatorFunction F;
  F.dim = 2;
  F.eval = [](double t) {
    Matrix m(2, 2);
    m << t * t, t, 0.0, 0.0;
    return Operator::dense(std::move(m));
  };
  F.deriv = [](int k, double t) {
    Matrix m = Matrix::Zero(2, 2);
    if (k == 0) {
      m << t * t, t, 0.0, 0.0;
    } else if (k == 1) {
      m << 2.0 * t, 1.0, 0.0, 0.0;
    } else if (k == 2) {
      m(0, 0) = 2.0;
    }
    return Operator::dense(std::move(m));
  };
  return F;
}

inline OperatorFunction make_multiplication_c0(MultiplicationC0Params p) {
  if (p.grid.points.size() < 2)
    throw ConfigError("MultiplicationC0: grid must have at least 2 points");
  Vector symbol(static_cast<Eigen::Index>(p.grid.points.size()));
  for (std::size_t j = 0; j < p.grid.points.size(); ++j)
    symbol[static_cast<Eigen::Index>(j)] = c0_symbol(p.grid.points[j]);
  OperatorFunction F;
  F.dim = symbol.size();
  F.eval = [symbol](double t) {
    Vector d(symbol.size());
    for (Eigen::Index j = 0; j < symbol.size(); ++j)
      d[j] = std::exp(t * symbol[j]);
    return Operator::diagonal(std::move(d));
  };
  F.deriv = [symbol](int k, double t) {
    Vector d(symbol.size());
    for (Eigen::Index j = 0; j < symbol.size(); ++j)
      d[j] = std::pow(symbol[j], k) * std::exp(t * symbol[j]);
    return Operator::diagonal(std::move(d));
  };
  return F;
}

inline OperatorFunction make_nilpotent_shift(NilpotentShiftParams p) {
  if (!(p.dt > 0 && p.dt <= 1))
    throw ConfigError("NilpotentShift: dt must lie in (0, 1]");
  const int cells = static_cast<int>(std::lround(1.0 / p.dt));
  if (std::abs(cells * p.dt - 1.0) > 1e-9)
    throw ConfigError("NilpotentShift: dt must divide 1");
  OperatorFunction F;
  F.dim = cells;
  F.eval = [cells, dt = p.dt](double t) {
    if (t < 0) throw ConfigError("NilpotentShift: negative time");
    const long shift = static_cast<long>(std::floor(t / dt + 1e-9));
    if (shift >= cells) return Operator::zero(cells);
    Matrix m = Matrix::Zero(cells, cells);
    for (long i = shift; i < cells; ++i) m(i, i - shift) = 1.0;
    return Operator::dense(std::move(m));
  };
  return F;
}

inline OperatorFunction make_diagonal_analytic(DiagonalAnalyticParams p) {
  if (p.lambdas.empty())
    throw ConfigError("DiagonalAnalytic: lambdas must be non-empty");
  for (Complex l : p.lambdas)
    if (!(l.real() < 0))
      throw ConfigError("DiagonalAnalytic: lambdas must have Re < 0");
  Vector lam(static_cast<Eigen::Index>(p.lambdas.size()));
  for (std::size_t j = 0; j < p.lambdas.size(); ++j)
    lam[static_cast<Eigen::Index>(j)] = p.lambdas[j];
  OperatorFunction F;
  F.dim = lam.size();
  F.eval = [lam](double t) {
    Vector d(lam.size());
    for (Eigen::Index j = 0; j < lam.size(); ++j) d[j] = std::exp(t * lam[j]);
    return Operator::diagonal(std::move(d));
  };
  F.deriv = [lam](int k, double t) {
    Vector d(lam.size());
    for (Eigen::Index j = 0; j < lam.size(); ++j)
      d[j] = std::pow(lam[j], k) * std::exp(t * lam[j]);
    return Operator::diagonal(std::move(d));
  };
  return F;
}

inline OperatorFunction make_dense_matrix_exp(DenseMatrixExpParams p) {
  if (p.a.rows() != p.a.cols() || p.a.rows() < 1)
    throw ConfigError("DenseMatrixExp: a must be a square matrix");
  const Matrix a = std::move(p.a);
  OperatorFunction F;
  F.dim = a.rows();
  F.eval = [a](double t) {
    const Matrix e = (t * a).exp();
    return Operator::dense(e);
  };
  F.deriv = [a](int k, double t) {
    Matrix m = (t * a).exp();
    for (int i = 0; i < k; ++i) m = a * m;
    return Operator::dense(std::move(m));
  };
  return F;
}

inline OperatorFunction make_jordan_nilpotent_exp(JordanNilpotentExpParams p) {
  if (p.dim < 2) throw ConfigError("JordanNilpotentExp: dim must be >= 2");
  const int d = p.dim;
  OperatorFunction F;
  F.dim = d;
  // exp(t N)_{ij} = t^(j-i)/(j-i)! for j >= i; k-th derivative shifts the
  // band: entries t^(j-i-k)/(j-i-k)!.
  F.deriv = [d](int k, double t) {
    Matrix m = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = i + k; j < d; ++j) {
        const int p2 = j - i - k;
        double f = 1.0;
        for (int q = 2; q <= p2; ++q) f *= q;
        m(i, j) = std::pow(t, p2) / f;
      }
    return Operator::dense(std::move(m));
  };
  F.eval = [dv = F.deriv](double t) { return dv(0, t); };
  return F;
}

}  // namespace detail

inline OperatorFunction make_example(ExampleSpec spec) {
  return std::visit(
      [](auto&& p) -> OperatorFunction {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, MatrixPolyParams>)
          return detail::make_matrix_poly();
        else if constexpr (std::is_same_v<T, MultiplicationC0Params>)
          return detail::make_multiplication_c0(std::move(p));
        else if constexpr (std::is_same_v<T, NilpotentShiftParams>)
          return detail::make_nilpotent_shift(std::move(p));
        else if constexpr (std::is_same_v<T, DiagonalAnalyticParams>)
          return detail::make_diagonal_analytic(std::move(p));
        else if constexpr (std::is_same_v<T, DenseMatrixExpParams>)
          return detail::make_dense_matrix_exp(std::move(p));
        else
          return detail::make_jordan_nilpotent_exp(std::move(p));
      },
      std::move(spec));
}

// ---------------------------------------------------------------------------
// Tail-growth scan for the multiplication symbol: fits the exponent of
// sup_{s <= S} |a(s)|^n (1+s)^(-t) against S over a ladder of cutoffs.
// The expected exponent is n - t, with the sup stabilizing (slope ~ 0) once
// t exceeds n.
// ---------------------------------------------------------------------------

struct GrowthScan {
  double slope = 0.0;
  std::vector<std::pair<double, double>> sups;  // (cutoff, grid sup)
};

inline SpatialGrid default_growth_grid() {
  return SpatialGrid::logarithmic(1e-6, 1e6, 200000);
}

inline std::vector<double> default_growth_ladder() {
  return {1e3, 1e4, 1e5, 1e6};
}

inline GrowthScan growth_scan(int n, double t, std::span<const double> ladder,
                              const SpatialGrid& grid) {
  if (n < 0) throw ConfigError("growth_scan: order must be >= 0");
  if (ladder.size() < 3)
    throw ConfigError("growth_scan: ladder needs at least 3 entries");
  for (std::size_t i = 0; i + 1 < ladder.size(); ++i)
    if (!(ladder[i] < ladder[i + 1]))
      throw ConfigError("growth_scan: ladder must be increasing");
  if (grid.points.empty() ||
      grid.points.back() < ladder.back() * (1.0 - 1e-12))
    throw ConfigError("growth_scan: grid does not reach the last cutoff");

  // Pointwise values in parallel, then a sequential prefix max per cutoff;
  // the reduction order is fixed, so results do not depend on thread count.
  std::vector<double> values(grid.points.size());
  parallel_for(grid.points.size(), [&](std::size_t i) {
    const double s = grid.points[i];
    values[i] = std::pow(std::abs(c0_symbol(s)), n) * std::pow(1.0 + s, -t);
  });

  GrowthScan out;
  double running = 0.0;
  std::size_t gi = 0;
  for (double raw_cutoff : ladder) {
    const double cutoff = raw_cutoff * (1.0 + 1e-12);
    for (; gi < grid.points.size() && grid.points[gi] <= cutoff; ++gi)
      running = std::max(running, values[gi]);
    out.sups.emplace_back(raw_cutoff, running);
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [cutoff, sup] : out.sups) {
    const double x = std::log(cutoff);
    const double y = std::log(std::max(sup, 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(out.sups.size());
  out.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return out;
}

inline GrowthScan growth_scan(int n, double t) {
  const auto ladder = default_growth_ladder();
  return growth_scan(n, t, ladder, default_growth_grid());
}

}  // namespace regkit
