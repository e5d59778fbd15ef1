// Command-line front end: seminorm evaluation, difference quotients,
// mollification, analyticity scans, regularity classification, holomorphic
// extension, figure emission, and a built-in invariant suite.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <regkit/regkit.hpp>

namespace {

using namespace regkit;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInconclusive = 3;

void emit(const json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file: " + path);
  out << j.dump(2) << "\n";
}

void emit_text(const std::string& body, const std::string& path) {
  if (path.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file: " + path);
  out << body;
}

Vector parse_vector(const std::string& text, Eigen::Index dim) {
  std::vector<double> comps;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) comps.push_back(std::stod(tok));
  if (static_cast<Eigen::Index>(comps.size()) != dim)
    throw ConfigError("--vector needs " + std::to_string(dim) + " components");
  Vector x(dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    x[i] = comps[static_cast<std::size_t>(i)];
  return x;
}

Orbit pick_orbit(const OperatorFunction& F, int basis, const std::string& vec) {
  if (!vec.empty()) return F.orbit(parse_vector(vec, F.dim));
  if (basis < 0 || basis >= F.dim)
    throw ConfigError("--basis index out of range");
  Vector e = Vector::Zero(F.dim);
  e[basis] = 1.0;
  return F.orbit(e);
}

TimeWindow parse_window(double lo, double hi) {
  if (hi <= 0 || std::isinf(hi)) return TimeWindow::after(lo);
  return TimeWindow(lo, hi);
}

// --------------------------------------------------------------------------
// verify: built-in invariant suite
// --------------------------------------------------------------------------

struct Verifier {
  int failures = 0;

  void check(const std::string& name, bool ok, const std::string& detail = "") {
    std::printf("[%s] %s%s%s\n", ok ? "ok" : "FAIL", name.c_str(),
                detail.empty() ? "" : ": ", detail.c_str());
    if (!ok) ++failures;
  }
};

void verify_diffquot(Verifier& v) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ts(1.5, 4.5), hs(-0.2, 0.2);
  auto fexp = scalar_orbit([](double t) { return std::exp(t); },
                           [](int, double t) { return std::exp(t); });
  auto fsin = scalar_orbit(
      [](double t) { return std::sin(t); },
      [](int k, double t) { return std::sin(t + k * 1.5707963267948966); });
  double worst_nested = 0, worst_integral = 0;
  for (const Orbit* f : {&fexp, &fsin}) {
    for (int k = 1; k <= 4; ++k) {
      std::vector<double> h(static_cast<std::size_t>(k));
      for (auto& x : h) {
        do { x = hs(rng); } while (std::abs(x) < 1e-3);
      }
      const auto box = make_step_box(*f, k, 0.2, ts(rng) + 1.3, h);
      const Vector a = diff_quotient(*f, box, DiffStrategy::SubsetSum);
      const Vector b = diff_quotient(*f, box, DiffStrategy::Nested);
      worst_nested = std::max(worst_nested, (a - b).norm() / a.norm());
      if (k <= 3) {
        const Vector c = diff_quotient(*f, box, DiffStrategy::Integral);
        worst_integral = std::max(worst_integral, (a - c).norm() / a.norm());
      }
    }
  }
  v.check("diffquot-subset-vs-nested", worst_nested <= 1e-12);
  v.check("diffquot-subset-vs-integral", worst_integral <= 1e-8);
}

void verify_stencils(Verifier& v) {
  bool ok = true;
  for (int k = 1; k <= 6; ++k) {
    auto mono = scalar_orbit([k](double t) { return std::pow(t, k); });
    double fact = 1;
    for (int q = 2; q <= k; ++q) fact *= q;
    // Near the origin the monomial cancellation stays benign.
    const Vector d = forward_stencil(mono, 0.1, k, 0.125);
    ok = ok && std::abs(d[0].real() - fact) <= 1e-9 * fact;
  }
  const auto w4 = equal_step_weights(4);
  ok = ok && w4 == std::vector<double>{1, -4, 6, -4, 1};
  v.check("stencil-identities", ok);
}

void verify_seminorm_axioms(Verifier& v) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 1.0);
  bool ok = true;
  for (int trial = 0; trial < 20 && ok; ++trial) {
    const double a1 = g(rng), a2 = g(rng), b1 = g(rng), b2 = g(rng);
    auto x = scalar_orbit([=](double t) { return a1 * std::sin(t) + a2 * std::cos(0.7 * t); });
    auto y = scalar_orbit([=](double t) { return b1 * std::cos(t) + b2 * std::sin(0.3 * t); });
    const double lam = 0.5 + std::abs(g(rng));
    const TimeWindow win(0.5, 6.5);
    const auto px = holder_seminorm(x, win, 0.5, 32);
    const auto plx = holder_seminorm(scaled_orbit(x, lam), win, 0.5, 32);
    const auto py = holder_seminorm(y, win, 0.5, 32);
    const auto pxy = holder_seminorm(sum_orbit(x, y), win, 0.5, 32);
    const double scale = px.value + py.value + 1.0;
    ok = ok && std::abs(plx.value - lam * px.value) <= 1e-9 * scale;
    ok = ok && pxy.value <= px.value + py.value + 1e-9 * scale;
  }
  v.check("seminorm-axioms", ok);
}

void verify_variation(Verifier& v) {
  auto s = scalar_orbit([](double t) { return std::sin(t); });
  const auto tv = total_variation(s, 0.0, 2 * 3.141592653589793, 64);
  v.check("variation-sin",
          tv.is_finite() && std::abs(tv.value - 4.0) <= 1e-4);
  const auto va = total_variation(s, 0.25, 1.25, 4096);
  const auto vb = total_variation(s, 1.25, 2.25, 4096);
  const auto vc = total_variation(s, 0.25, 2.25, 8192);
  v.check("variation-additivity",
          std::abs(vc.value - va.value - vb.value) <= 1e-6 * vc.value);
}

void verify_mollifier(Verifier& v) {
  bool mass_ok = true;
  for (int l : {1, 2, 4, 8, 16, 32, 64}) {
    long double acc = 0.0L;
    for (const auto& [a, b] : graded_panels(12))
      acc += gl_integrate(
          [&](long double u) {
            return static_cast<long double>(
                bump_deriv(l, 0, static_cast<double>(u) / l));
          },
          a, b, 32) / l;
    mass_ok = mass_ok && std::abs(static_cast<double>(acc) - 1.0) <= 1e-10;
  }
  v.check("mollifier-mass", mass_ok);

  auto fexp = scalar_orbit([](double t) { return std::exp(t); },
                           [](int, double t) { return std::exp(t); });
  bool ident_ok = true;
  for (int k = 0; k <= 4; ++k) {
    const Vector lhs = mollify_deriv(fexp, 2, k, 1.3);
    auto oracle = scalar_orbit([](double t) { return std::exp(t); });
    const Vector rhs = mollify_deriv(oracle, 2, 0, 1.3);
    ident_ok = ident_ok && (lhs - rhs).norm() <= 1e-8 * rhs.norm();
  }
  v.check("mollifier-derivative-identity", ident_ok);
}

void verify_domain(Verifier& v) {
  HolomorphyDomain dom(2.3, 0.3, 6);
  v.check("domain-angle",
          std::abs(dom.theta() - std::asin(0.3 / 2.3)) <= 1e-12);
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ux(0.0, 1.0);
  bool sector_ok = true, add_ok = true, shift_ok = true;
  int added = 0;
  std::vector<Complex> members;
  for (int i = 0; i < 200; ++i) {
    const double re = dom.t * (1.0 + 6.0 * ux(rng)) + 1e-6;
    const double half = (re - dom.t) * std::tan(dom.theta());
    const double im = (2.0 * ux(rng) - 1.0) * half * 0.999;
    const Complex z(re, im);
    if (!sector_membership(dom, z)) continue;
    sector_ok = sector_ok && omega_membership(dom, z).member;
    members.push_back(z);
  }
  for (std::size_t i = 0; i + 1 < members.size() && added < 200; i += 2, ++added) {
    add_ok = add_ok && omega_membership(dom, members[i] + members[i + 1]).member;
    shift_ok = shift_ok &&
               omega_membership(dom, members[i] + Complex(3.7, 0.0)).member;
  }
  v.check("domain-sector-containment", sector_ok);
  v.check("domain-additive-closure", add_ok);
  v.check("domain-right-translation", shift_ok);
}

void verify_extension(Verifier& v) {
  DiagonalAnalyticParams p;
  p.lambdas = {Complex(-1.0, 0.0), Complex(-2.0, 3.0)};
  const auto T = make_example(p);
  HolomorphyDomain dom(1.0, 0.5, 8);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ux(0.0, 1.0);
  bool ok = true;
  for (int i = 0; i < 20; ++i) {
    const Complex z(1.0 + 6.0 * ux(rng), (2.0 * ux(rng) - 1.0) * 0.4);
    if (!omega_membership(dom, z).member) continue;
    const auto ext = extend_eval(T, dom, z, 40);
    Vector expect(2);
    for (int j = 0; j < 2; ++j) expect[j] = std::exp(z * p.lambdas[static_cast<std::size_t>(j)]);
    const double err =
        ext.value.minus(Operator::diagonal(expect)).norm();
    ok = ok && err <= std::max(ext.tail_bound, 1e-10);
  }
  v.check("extension-closed-form", ok);
  const auto J = make_example(JordanNilpotentExpParams{4});
  v.check("derivative-composition",
          derivative_composition_defect(J, 1, 2, 1.0, 1.0) <= 1e-11);
}

void verify_thresholds(Verifier& v) {
  NilpotentShiftParams p;
  p.dt = 1.0 / 64;
  const auto T = make_example(p);
  PropertySpec zero;
  zero.kind = PropertySpec::Kind::Zero;
  ClassifyOptions opts;
  opts.probes = 4;
  opts.max_basis = 16;
  const std::vector<int> scan{0, 1, 2};
  const auto report = uniform_threshold(T, zero, scan, opts);
  v.check("threshold-nilpotent-uniform",
          report.uniform_attained &&
              std::abs(report.uniform_threshold - 1.0) <= 1.0 / 64);
}

void verify_analytic(Verifier& v) {
  auto f = scalar_orbit(
      [](double t) { return 1.0 / (1.5 - t); },
      [](int k, double t) {
        double fact = 1;
        for (int q = 2; q <= k; ++q) fact *= q;
        return fact / std::pow(1.5 - t, k + 1);
      });
  const auto scan = analyticity_radius(f, 0.5, {1.0, 0.5, 0.25}, 30, 8192);
  bool ok = scan.radius && *scan.radius == 0.5;
  const auto p = analyticity_seminorm(f, 0.5, 0.5, 30, 8192);
  ok = ok && p.is_finite() && std::abs(p.value - 2.0) <= 1e-3;
  const auto bad = analyticity_seminorm(f, 0.5, 0.9, 30, 256);
  ok = ok && bad.is_diverging();
  v.check("analytic-detector", ok);
}

void verify_growth(Verifier& v) {
  const auto s21 = growth_scan(2, 1.0);
  const auto s32 = growth_scan(3, 2.0);
  const auto flat = growth_scan(2, 2.5);
  v.check("growth-exponents", std::abs(s21.slope - 1.0) <= 0.05 &&
                                  std::abs(s32.slope - 1.0) <= 0.05 &&
                                  flat.slope <= 0.05);
}

int run_verify(const std::string& suite) {
  Verifier v;
  verify_diffquot(v);
  verify_stencils(v);
  verify_seminorm_axioms(v);
  verify_variation(v);
  verify_mollifier(v);
  verify_domain(v);
  verify_extension(v);
  verify_thresholds(v);
  verify_analytic(v);
  if (suite == "all") verify_growth(v);
  std::printf("%s\n", v.failures == 0 ? "all checks passed"
                                      : "some checks FAILED");
  return v.failures == 0 ? kExitOk : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eventual-regularity toolkit"};
  app.require_subcommand(1);

  // seminorm
  auto* sem = app.add_subcommand("seminorm", "evaluate an extended seminorm");
  std::string sem_config, sem_vector, sem_prop = "sup", sem_out;
  int sem_basis = 0, sem_res = 128;
  double sem_lo = 0.0, sem_hi = -1.0, sem_alpha = 1.0, sem_delta = 1.0;
  sem->add_option("--config", sem_config, "function config JSON")->required();
  sem->add_option("--basis", sem_basis, "basis orbit index");
  sem->add_option("--vector", sem_vector, "probe vector components");
  sem->add_option("--property", sem_prop,
                  "sup|holder|uniform-continuity|total-variation|absolute-continuity");
  sem->add_option("--lo", sem_lo, "window start");
  sem->add_option("--hi", sem_hi, "window end (<=0 for +inf)");
  sem->add_option("--alpha", sem_alpha, "Holder exponent");
  sem->add_option("--delta", sem_delta, "separation / length budget");
  sem->add_option("--res", sem_res, "samples per unit time");
  sem->add_option("-o,--output", sem_out, "output path (default stdout)");

  // diffquot
  auto* dq = app.add_subcommand("diffquot", "order-k difference quotient");
  dq->set_help_flag("--help", "print help");  // frees -h/--h for increments
  std::string dq_config, dq_vector, dq_h, dq_out;
  int dq_basis = 0, dq_order = 1;
  double dq_t = 1.0, dq_delta = 0.0;
  dq->add_option("--config", dq_config)->required();
  dq->add_option("--basis", dq_basis);
  dq->add_option("--vector", dq_vector);
  dq->add_option("--order", dq_order)->required();
  dq->add_option("--t", dq_t)->required();
  dq->add_option("--h", dq_h, "comma-separated increments")->required();
  dq->add_option("--delta", dq_delta, "box half-width (default max |h|)");
  dq->add_option("-o,--output", dq_out);

  // mollify
  auto* mo = app.add_subcommand("mollify", "mollified derivative or probe");
  std::string mo_config, mo_vector, mo_out;
  int mo_basis = 0, mo_l = 4, mo_order = 0, mo_maxorder = 3;
  double mo_t = 1.0, mo_lo = 1.0, mo_hi = 2.0;
  bool mo_probe = false;
  mo->add_option("--config", mo_config)->required();
  mo->add_option("--basis", mo_basis);
  mo->add_option("--vector", mo_vector);
  mo->add_option("--l", mo_l, "mollifier index");
  mo->add_option("--order", mo_order, "derivative order");
  mo->add_option("--t", mo_t);
  mo->add_flag("--probe", mo_probe, "run the smoothness probe instead");
  mo->add_option("--lo", mo_lo, "probe window start");
  mo->add_option("--hi", mo_hi, "probe window end");
  mo->add_option("--max-order", mo_maxorder, "probe maximum order");
  mo->add_option("-o,--output", mo_out);

  // analytic
  auto* an = app.add_subcommand("analytic", "analyticity radius scan");
  std::string an_config, an_vector, an_out;
  int an_basis = 0, an_kmax = 24, an_res = 128;
  double an_t = 1.0;
  an->add_option("--config", an_config)->required();
  an->add_option("--basis", an_basis);
  an->add_option("--vector", an_vector);
  an->add_option("--t", an_t)->required();
  an->add_option("--kmax", an_kmax);
  an->add_option("--res", an_res);
  an->add_option("-o,--output", an_out);

  // classify
  auto* cl = app.add_subcommand("classify", "regularity threshold report");
  std::string cl_config;
  cl->add_option("--config", cl_config, "full run config JSON")->required();

  // extend
  auto* ex = app.add_subcommand("extend", "holomorphic extension evaluation");
  std::string ex_config, ex_z, ex_out;
  double ex_t = 1.0, ex_r = 0.5;
  int ex_K = 40;
  ex->add_option("--config", ex_config)->required();
  ex->add_option("--t", ex_t)->required();
  ex->add_option("--r", ex_r)->required();
  ex->add_option("--z", ex_z, "target point re,im")->required();
  ex->add_option("--K", ex_K, "series truncation");
  ex->add_option("-o,--output", ex_out);

  // domain-svg
  auto* ds = app.add_subcommand("domain-svg", "render the extension domain");
  std::string ds_out;
  double ds_t = 2.3, ds_r = 0.3;
  int ds_n = 6;
  ds->add_option("--t", ds_t)->required();
  ds->add_option("--r", ds_r)->required();
  ds->add_option("--n", ds_n, "rendering horizon");
  ds->add_option("-o,--output", ds_out)->required();

  // verify
  auto* ve = app.add_subcommand("verify", "run the invariant suite");
  std::string ve_suite = "all";
  ve->add_option("--suite", ve_suite, "all|quick");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (sem->parsed()) {
      const auto F = make_example(parse_example(load_json_file(sem_config).at("function")));
      const Orbit orbit = pick_orbit(F, sem_basis, sem_vector);
      SeminormSpec spec;
      spec.window = parse_window(sem_lo, sem_hi);
      spec.alpha = sem_alpha;
      spec.delta_cap = sem_delta;
      spec.sample_resolution = sem_res;
      if (sem_prop == "sup") spec.property = SeminormProperty::SupNorm;
      else if (sem_prop == "holder") spec.property = SeminormProperty::Holder;
      else if (sem_prop == "uniform-continuity") spec.property = SeminormProperty::UniformContinuity;
      else if (sem_prop == "total-variation") spec.property = SeminormProperty::TotalVariation;
      else if (sem_prop == "absolute-continuity") spec.property = SeminormProperty::AbsoluteContinuity;
      else throw ConfigError("unknown --property: " + sem_prop);
      const auto verdict = evaluate_seminorm(spec, orbit);
      json out{{"property", to_string(spec.property)},
               {"verdict", verdict_to_json(verdict)}};
      emit(out, sem_out);
      return verdict.is_inconclusive() ? kExitInconclusive : kExitOk;
    }

    if (dq->parsed()) {
      const auto F = make_example(parse_example(load_json_file(dq_config).at("function")));
      const Orbit orbit = pick_orbit(F, dq_basis, dq_vector);
      std::vector<double> h;
      std::stringstream ss(dq_h);
      std::string tok;
      while (std::getline(ss, tok, ',')) h.push_back(std::stod(tok));
      double delta = dq_delta;
      if (delta <= 0)
        for (double x : h) delta = std::max(delta, std::abs(x));
      const auto box = make_step_box(orbit, dq_order, delta, dq_t, h);
      const Vector a = diff_quotient(orbit, box, DiffStrategy::SubsetSum);
      const Vector b = diff_quotient(orbit, box, DiffStrategy::Nested);
      json out{{"order", dq_order},
               {"t", dq_t},
               {"subset_sum", complex_to_json(a[0])},
               {"nested", complex_to_json(b[0])},
               {"cross_check", (a - b).norm()}};
      if (orbit.has_deriv() && dq_order <= 3) {
        const Vector c = diff_quotient(orbit, box, DiffStrategy::Integral);
        out["integral"] = complex_to_json(c[0]);
        out["integral_cross_check"] = (a - c).norm();
      }
      if (F.dim > 1) {
        json full = json::array();
        for (Eigen::Index i = 0; i < a.size(); ++i)
          full.push_back(complex_to_json(a[i]));
        out["subset_sum_vector"] = std::move(full);
      }
      emit(out, dq_out);
      return kExitOk;
    }

    if (mo->parsed()) {
      const auto F = make_example(parse_example(load_json_file(mo_config).at("function")));
      const Orbit orbit = pick_orbit(F, mo_basis, mo_vector);
      if (mo_probe) {
        const auto rep = smoothness_probe(orbit, TimeWindow(mo_lo, mo_hi), mo_maxorder);
        json orders = json::array();
        for (const auto& o : rep.orders)
          orders.push_back({{"order", o.order},
                            {"converged", o.converged},
                            {"scale", o.scale},
                            {"gaps", o.gaps}});
        emit(json{{"ladder", rep.ladder}, {"orders", std::move(orders)}}, mo_out);
        return kExitOk;
      }
      const Vector val = mollify_deriv(orbit, mo_l, mo_order, mo_t);
      json comps = json::array();
      for (Eigen::Index i = 0; i < val.size(); ++i)
        comps.push_back(complex_to_json(val[i]));
      emit(json{{"l", mo_l}, {"order", mo_order}, {"t", mo_t},
                {"value", std::move(comps)}},
           mo_out);
      return kExitOk;
    }

    if (an->parsed()) {
      const auto F = make_example(parse_example(load_json_file(an_config).at("function")));
      const Orbit orbit = pick_orbit(F, an_basis, an_vector);
      AnalyticityOptions opts;
      if (!orbit.has_deriv()) opts.estimator = make_derivative_estimator();
      const auto scan =
          analyticity_radius(orbit, an_t, {}, an_kmax, an_res, opts);
      json reports = json::array();
      for (const auto& [r, verdict] : scan.reports)
        reports.push_back({{"r", r}, {"verdict", verdict_to_json(verdict)}});
      json out{{"t", an_t},
               {"radius", scan.radius ? json(*scan.radius) : json()},
               {"reports", std::move(reports)}};
      emit(out, an_out);
      return scan.radius ? kExitOk : kExitOk;
    }

    if (cl->parsed()) {
      const RunConfig cfg = parse_run_config(load_json_file(cl_config));
      if (!cfg.property)
        throw ConfigError("classify: config needs a 'property' section");
      const auto F = make_example(cfg.function);
      ClassifyOptions opts;
      opts.probes = cfg.probes;
      opts.seed = cfg.seed;
      const auto report = uniform_threshold(F, *cfg.property, cfg.scan, opts);
      if (cfg.output_format == "csv")
        emit_text(report_to_csv(report), cfg.output_path);
      else
        emit(report_to_json(report), cfg.output_path);
      std::fprintf(stderr, "uniform %s: %s\n", report.property.c_str(),
                   report.uniform_attained
                       ? format_sig17(report.uniform_threshold).c_str()
                       : "diverging");
      return kExitOk;
    }

    if (ex->parsed()) {
      const auto F = make_example(parse_example(load_json_file(ex_config).at("function")));
      std::stringstream ss(ex_z);
      std::string re, im;
      std::getline(ss, re, ',');
      std::getline(ss, im, ',');
      const Complex z(std::stod(re), im.empty() ? 0.0 : std::stod(im));
      HolomorphyDomain dom(ex_t, ex_r, 8);
      const auto ext = extend_eval(F, dom, z, ex_K);
      const Matrix m = ext.value.to_matrix();
      json rows = json::array();
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
          row.push_back(complex_to_json(m(i, j)));
        rows.push_back(std::move(row));
      }
      emit(json{{"z", complex_to_json(z)},
                {"witness_n", ext.witness_n},
                {"center", ext.center},
                {"tail_bound", ext.tail_bound},
                {"tail_ok", ext.tail_ok},
                {"value", std::move(rows)}},
           ex_out);
      return ext.tail_ok ? kExitOk : kExitInconclusive;
    }

    if (ds->parsed()) {
      domain_svg(HolomorphyDomain(ds_t, ds_r, ds_n), ds_out);
      return kExitOk;
    }

    if (ve->parsed()) {
      if (ve_suite != "all" && ve_suite != "quick")
        throw ConfigError("--suite must be all or quick");
      return run_verify(ve_suite);
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitConfig;
  } catch (const OutOfDomainError& e) {
    std::fprintf(stderr, "domain error: %s\n", e.what());
    return kExitConfig;
  } catch (const InconclusiveError& e) {
    std::fprintf(stderr, "inconclusive: %s\n", e.what());
    return kExitInconclusive;
  } catch (const IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 1;
  }
  return kExitOk;
}
