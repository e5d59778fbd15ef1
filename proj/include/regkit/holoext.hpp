#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "regkit/analytic.hpp"
#include "regkit/common.hpp"
#include "regkit/kernel.hpp"

namespace regkit {

// ---------------------------------------------------------------------------
// The extension domain generated by a center t and a convergence radius
// r < t:  Omega = union over n >= 1, s in [n t, (n+1) t) of B(s, n r).
// It contains the real ray from t and the sector of half-angle
// theta = arcsin(r/t) at apex t.
// ---------------------------------------------------------------------------

struct HolomorphyDomain {
  double t = 1.0;
  double r = 0.5;
  int n_max = 6;  // rendering horizon

  HolomorphyDomain(double t_, double r_, int n_max_ = 6)
      : t(t_), r(r_), n_max(n_max_) {
    if (!(t > 0)) throw ConfigError("domain: t must be > 0");
    if (!(r > 0 && r < t)) throw ConfigError("domain: needs 0 < r < t");
    if (n_max < 1) throw ConfigError("domain: n_max must be >= 1");
  }

  double theta() const { return std::asin(r / t); }
};

struct OmegaWitness {
  bool member = false;
  int witness_n = 0;   // smallest generating index when member
  double distance = 0; // distance to that segment
};

/// z lies in the domain iff some generator ball family covers it:
/// dist(z, [n t, (n+1) t]) < n r for some n. Closed clamping with a strict
/// inequality keeps the set open.
inline OmegaWitness omega_membership(const HolomorphyDomain& dom, Complex z) {
  OmegaWitness out;
  const int n_hi =
      static_cast<int>(std::ceil(std::max(0.0, z.real()) / dom.t)) + 1;
  for (int n = 1; n <= n_hi; ++n) {
    const double s = std::clamp(z.real(), n * dom.t, (n + 1) * dom.t);
    const double d = std::abs(z - Complex(s, 0.0));
    if (d < n * dom.r) {
      out.member = true;
      out.witness_n = n;
      out.distance = d;
      return out;
    }
  }
  return out;
}

/// Open sector { Re z > t, |arg(z - t)| < theta }, arg on (-pi, pi].
inline bool sector_membership(const HolomorphyDomain& dom, Complex z) {
  if (!(z.real() > dom.t)) return false;
  return std::abs(std::arg(z - Complex(dom.t, 0.0))) < dom.theta();
}

// ---------------------------------------------------------------------------
// Semigroup diagnostics
// ---------------------------------------------------------------------------

/// max over grid pairs of |T(s+t) - T(s) T(t)|.
inline double semigroup_defect(const OperatorFunction& T,
                               std::span<const double> grid) {
  double worst = 0.0;
  for (double s : grid) {
    if (s < T.domain_start) throw ConfigError("semigroup_defect: negative time");
    for (double t : grid) {
      const Operator lhs = T.eval(s + t);
      const Operator rhs = T.eval(s).compose(T.eval(t));
      worst = std::max(worst, lhs.minus(rhs).norm());
    }
  }
  return worst;
}

/// |T^(l)(t) T^(k)(s) - T^(l+k)(t+s)|; zero for smooth semigroups.
inline double derivative_composition_defect(const OperatorFunction& T, int l,
                                            int k, double t, double s) {
  if (!T.has_deriv())
    throw ConfigError("derivative_composition_defect: needs an oracle");
  if (l < 0 || k < 0) throw ConfigError("derivative orders must be >= 0");
  const Operator lhs = T.deriv(l, t).compose(T.deriv(k, s));
  const Operator rhs = T.deriv(l + k, t + s);
  return lhs.minus(rhs).norm();
}

// ---------------------------------------------------------------------------
// Off-axis evaluation by series re-centering: pick the witness ball, center
// the series at s = clamp(Re z) on the real axis, assemble coefficients via
// T^(k)(s) = T^(k)(t) T(s - t), and bound the tail with a constant measured
// at the chosen center.
// ---------------------------------------------------------------------------

struct ExtensionResult {
  Operator value;
  double tail_bound = 0.0;
  bool tail_ok = true;  // false: truncation warning, bound above tolerance
  double center = 0.0;
  int witness_n = 0;
};

inline ExtensionResult extend_eval(const OperatorFunction& T,
                                   const HolomorphyDomain& dom, Complex z,
                                   int K = 40, double tail_tol = 1e-10) {
  if (!T.has_deriv()) throw ConfigError("extend_eval: needs a derivative oracle");
  if (K < 0) throw ConfigError("extend_eval: truncation must be >= 0");
  const OmegaWitness w = omega_membership(dom, z);
  if (!w.member)
    throw OutOfDomainError("extend_eval: point outside the extension domain");

  const int n = w.witness_n;
  const double s = std::clamp(z.real(), n * dom.t, (n + 1) * dom.t);
  const double radius = n * dom.r;
  const Complex dz = z - Complex(s, 0.0);
  const double q = std::abs(dz) / radius;

  const Operator translate = T.eval(s - dom.t);
  Operator acc = Operator::zero(T.dim);
  Complex coeff = 1.0;  // dz^k / k!
  double log_c = -std::numeric_limits<double>::infinity();
  const double log_radius = std::log(radius);
  for (int k = 0; k <= K; ++k) {
    const Operator dk = T.deriv(k, dom.t).compose(translate);  // T^(k)(s)
    acc = acc.plus(dk.scaled(coeff));
    const double nrm = dk.norm();
    if (nrm > 0)
      log_c = std::max(log_c, k * log_radius -
                                  std::lgamma(static_cast<double>(k) + 1.0) +
                                  std::log(nrm));
    coeff *= dz / static_cast<double>(k + 1);
  }

  ExtensionResult out{std::move(acc)};
  const double c = std::isfinite(log_c) ? std::exp(log_c) : 0.0;
  out.tail_bound = q < 1.0
                       ? c * std::pow(q, K + 1) / (1.0 - q)
                       : std::numeric_limits<double>::infinity();
  out.center = s;
  out.witness_n = n;
  out.tail_ok = out.tail_bound <= tail_tol * std::max(1.0, out.value.norm());
  return out;
}

// ---------------------------------------------------------------------------
// Figure rendering: real axis with ticks at n t, generator circles B(n t, n r),
// the tangent strips joining them, and the sector at apex t. Deterministic
// output: identical inputs produce byte-identical SVG.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string svg_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace detail

inline std::string domain_svg_string(const HolomorphyDomain& dom) {
  const double t = dom.t, r = dom.r;
  const int n = dom.n_max;
  // Domain-coordinate viewBox [-0.5, (n+1) t] x [-n r 1.3, n r 1.3]; the
  // picture is mirror-symmetric about the axis, so the y-down convention of
  // SVG changes nothing visible.
  const double x_lo = -0.5, x_hi = (n + 1) * t;
  const double y_half = n * r * 1.3;
  const double view_w = x_hi - x_lo, view_h = 2 * y_half;
  const double px_w = 900.0, px_h = 900.0 * view_h / view_w;
  const double stroke = view_w / 900.0;
  const double font = 14.0 * stroke;

  auto S = [&](double v) { return detail::svg_num(v); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << S(px_w)
      << "\" height=\"" << S(px_h) << "\" viewBox=\"" << S(x_lo) << ' '
      << S(-y_half) << ' ' << S(view_w) << ' ' << S(view_h) << "\">\n";

  // Sector at apex t, clipped to the right edge and the vertical bounds.
  const double tan_theta = std::tan(dom.theta());
  double apex_dx = x_hi - t;
  double apex_dy = apex_dx * tan_theta;
  if (apex_dy > y_half) {
    apex_dy = y_half;
    apex_dx = apex_dy / tan_theta;
  }
  svg << "<polygon points=\"" << S(t) << ",0 " << S(t + apex_dx) << ','
      << S(apex_dy) << ' ' << S(t + apex_dx) << ',' << S(-apex_dy)
      << "\" fill=\"#e69500\" fill-opacity=\"0.2\" stroke=\"#e69500\" "
         "stroke-width=\""
      << S(1.5 * stroke) << "\"/>\n";

  // Real axis with ticks and labels at i t.
  svg << "<line x1=\"" << S(x_lo) << "\" y1=\"0\" x2=\"" << S(x_hi)
      << "\" y2=\"0\" stroke=\"black\" stroke-width=\"" << S(1.5 * stroke)
      << "\"/>\n";
  for (int i = 1; i <= n; ++i) {
    const double x = i * t;
    svg << "<line x1=\"" << S(x) << "\" y1=\"" << S(-4 * stroke) << "\" x2=\""
        << S(x) << "\" y2=\"" << S(4 * stroke)
        << "\" stroke=\"black\" stroke-width=\"" << S(stroke) << "\"/>\n";
    svg << "<text x=\"" << S(x) << "\" y=\"" << S(20 * stroke)
        << "\" font-size=\"" << S(font) << "\" text-anchor=\"middle\">"
        << (i == 1 ? std::string("t") : std::to_string(i) + "t") << "</text>\n";
  }

  // Generator circles, stroke only.
  for (int i = 1; i <= n; ++i)
    svg << "<circle cx=\"" << S(i * t) << "\" cy=\"0\" r=\"" << S(i * r)
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\"" << S(stroke)
        << "\"/>\n";

  // Tangent strips y = +-(i r) from x = i t to where the next circle takes
  // over: x = (i+1) t - r sqrt(2 i + 1).
  for (int i = 1; i < n; ++i) {
    const double x0 = i * t;
    const double x1 = (i + 1) * t - r * std::sqrt(2.0 * i + 1.0);
    if (x1 <= x0) continue;
    for (int sgn : {1, -1})
      svg << "<line x1=\"" << S(x0) << "\" y1=\"" << S(sgn * i * r)
          << "\" x2=\"" << S(x1) << "\" y2=\"" << S(sgn * i * r)
          << "\" stroke=\"black\" stroke-width=\"" << S(stroke) << "\"/>\n";
  }

  svg << "</svg>\n";
  return svg.str();
}

inline void domain_svg(const HolomorphyDomain& dom,
                       const std::filesystem::path& out) {
  std::ofstream stream(out, std::ios::binary);
  if (!stream) throw IoError("domain_svg: cannot open " + out.string());
  const std::string body = domain_svg_string(dom);
  stream.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!stream) throw IoError("domain_svg: write failed for " + out.string());
}

}  // namespace regkit
