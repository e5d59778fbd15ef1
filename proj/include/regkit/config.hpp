#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "regkit/classify.hpp"
#include "regkit/common.hpp"
#include "regkit/gallery.hpp"
#include "regkit/seminorm.hpp"

namespace regkit {

// ---------------------------------------------------------------------------
// JSON run configuration. Complex numbers are {"re": r, "im": i}; example
// functions are {"name": ..., per-name fields}.
// ---------------------------------------------------------------------------

inline Complex parse_complex(const nlohmann::json& j, const char* field) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (!j.is_object() || !j.contains("re"))
    throw ConfigError(std::string("expected complex {re, im} for ") + field);
  return Complex(j.at("re").get<double>(),
                 j.value("im", 0.0));
}

inline nlohmann::json complex_to_json(Complex z) {
  return {{"re", z.real()}, {"im", z.imag()}};
}

inline SpatialGrid parse_grid(const nlohmann::json& j) {
  const std::string spacing = j.value("spacing", "logarithmic");
  const int points = j.value("points", 200000);
  const double s_max = j.value("s_max", 1e6);
  if (spacing == "uniform") return SpatialGrid::uniform(s_max, points);
  if (spacing == "logarithmic")
    return SpatialGrid::logarithmic(j.value("s_min", 1e-6), s_max, points);
  throw ConfigError("grid.spacing must be 'uniform' or 'logarithmic'");
}

inline ExampleSpec parse_example(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("name"))
    throw ConfigError("function: expected an object with a 'name' field");
  const std::string name = j.at("name").get<std::string>();
  if (name == "MatrixPoly") return MatrixPolyParams{};
  if (name == "MultiplicationC0") {
    MultiplicationC0Params p;
    p.grid = j.contains("grid") ? parse_grid(j.at("grid"))
                                : SpatialGrid::logarithmic(1e-6, 1e6, 20000);
    return p;
  }
  if (name == "NilpotentShift") {
    NilpotentShiftParams p;
    p.dt = j.value("dt", 0.01);
    return p;
  }
  if (name == "DiagonalAnalytic") {
    DiagonalAnalyticParams p;
    if (!j.contains("lambdas"))
      throw ConfigError("DiagonalAnalytic: missing field 'lambdas'");
    for (const auto& l : j.at("lambdas"))
      p.lambdas.push_back(parse_complex(l, "lambdas"));
    return p;
  }
  if (name == "DenseMatrixExp") {
    if (!j.contains("a")) throw ConfigError("DenseMatrixExp: missing field 'a'");
    const auto& rows = j.at("a");
    const Eigen::Index d = static_cast<Eigen::Index>(rows.size());
    if (d == 0) throw ConfigError("DenseMatrixExp: 'a' must be non-empty");
    Matrix a(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      const auto& row = rows.at(static_cast<std::size_t>(i));
      if (static_cast<Eigen::Index>(row.size()) != d)
        throw ConfigError("DenseMatrixExp: 'a' must be square");
      for (Eigen::Index k = 0; k < d; ++k)
        a(i, k) = parse_complex(row.at(static_cast<std::size_t>(k)), "a");
    }
    return DenseMatrixExpParams{std::move(a)};
  }
  if (name == "JordanNilpotentExp") {
    JordanNilpotentExpParams p;
    p.dim = j.value("dim", 4);
    return p;
  }
  throw ConfigError("unknown example function name: " + name);
}

inline PropertySpec parse_property(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("name"))
    throw ConfigError("property: expected an object with a 'name' field");
  const std::string name = j.at("name").get<std::string>();
  PropertySpec p;
  if (name == "Zero") p.kind = PropertySpec::Kind::Zero;
  else if (name == "Bounded") p.kind = PropertySpec::Kind::Bounded;
  else if (name == "LocalBounded") p.kind = PropertySpec::Kind::LocalBounded;
  else if (name == "Holder") p.kind = PropertySpec::Kind::Holder;
  else if (name == "LocalHolder") p.kind = PropertySpec::Kind::LocalHolder;
  else if (name == "UniformContinuity") p.kind = PropertySpec::Kind::UniformContinuity;
  else if (name == "LocalBoundedVariation") p.kind = PropertySpec::Kind::LocalBoundedVariation;
  else if (name == "AbsoluteContinuity") p.kind = PropertySpec::Kind::AbsoluteContinuity;
  else if (name == "Differentiable") p.kind = PropertySpec::Kind::Differentiable;
  else if (name == "Smooth") p.kind = PropertySpec::Kind::Smooth;
  else if (name == "Analytic") p.kind = PropertySpec::Kind::Analytic;
  else throw ConfigError("unknown property name: " + name);
  p.alpha = j.value("alpha", 1.0);
  p.delta_cap = j.value("delta_cap", 1.0);
  p.order = j.value("order", 1);
  if (!(p.alpha > 0 && p.alpha <= 1))
    throw ConfigError("property.alpha must lie in (0, 1]");
  if (!(p.delta_cap > 0)) throw ConfigError("property.delta_cap must be > 0");
  if (p.order < 0) throw ConfigError("property.order must be >= 0");
  return p;
}

struct RunConfig {
  ExampleSpec function;
  std::optional<PropertySpec> property;
  std::vector<int> scan{0, 1, 2, 4};
  std::string output_format = "json";  // json | csv
  std::string output_path;             // empty: stdout
  std::uint64_t seed = 12345;
  int probes = 32;
};

inline RunConfig parse_run_config(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config root must be an object");
  if (!j.contains("function")) throw ConfigError("config: missing 'function'");
  RunConfig cfg;
  cfg.function = parse_example(j.at("function"));
  if (j.contains("property")) cfg.property = parse_property(j.at("property"));
  if (j.contains("scan")) {
    cfg.scan.clear();
    for (const auto& n : j.at("scan")) cfg.scan.push_back(n.get<int>());
  }
  if (j.contains("output")) {
    const auto& out = j.at("output");
    cfg.output_format = out.value("format", "json");
    cfg.output_path = out.value("path", "");
    if (cfg.output_format != "json" && cfg.output_format != "csv")
      throw ConfigError("output.format must be 'json' or 'csv'");
  }
  cfg.seed = j.value("seed", std::uint64_t{12345});
  cfg.probes = j.value("probes", 32);
  if (cfg.probes < 0) throw ConfigError("probes must be >= 0");
  return cfg;
}

inline nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return j;
}

inline nlohmann::json verdict_to_json(const ExtRealVerdict& v) {
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& [res, sup] : v.refinement_trace)
    trace.push_back({{"resolution", res}, {"sup", sup}});
  nlohmann::json out{{"kind", to_string(v.kind)}, {"trace", std::move(trace)}};
  if (v.is_finite()) out["value"] = v.value;
  if (v.is_diverging()) out["growth_exponent"] = v.growth_exponent;
  return out;
}

}  // namespace regkit
