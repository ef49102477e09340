#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dtai/error.hpp"
#include "dtai/feasibility.hpp"
#include "dtai/metrics.hpp"
#include "dtai/optimize.hpp"
#include "dtai/report.hpp"
#include "dtai/rng.hpp"
#include "dtai/types.hpp"

namespace dtai {

enum class generator_kind { dataset, interpolation, external };

/// Either a percentile of the adjusted dataset values (resolved at run
/// time) or fully explicit per-objective vectors.
struct target_config {
  std::optional<double> percentile;
  double alpha = 1.0;
  double beta = 4.0;
  std::optional<target_spec> explicit_targets;
};

/// Hypervolume reference: an explicit point or a low percentile of the
/// adjusted dataset values.
struct reference_config {
  std::optional<double> percentile;
  std::optional<std::vector<double>> point;
};

struct generator_config {
  generator_kind kind = generator_kind::dataset;
  std::size_t count = 250;
  rng_seed seed{1};
  std::filesystem::path path;  ///< external generator: CSV of designs
};

struct evaluation_config {
  hv_options hv;
  bool standardize = false;
  std::size_t kde_grid = 256;
};

struct benchmark_config {
  std::string problem = "gaussian_peaks";
  std::size_t dim = 2;
  std::size_t n_obj = 2;
  rng_seed seed{11};
};

/// Everything one CLI run needs, parsed from a single JSON document.
struct run_config {
  std::filesystem::path data_path;
  schema columns;
  std::vector<objective_spec> objectives;
  target_config targets;
  reference_config reference;
  std::vector<feasibility_rule> rules;
  generator_config generator;
  evaluation_config evaluation;
  std::optional<benchmark_config> benchmark;
  optimizer_config optimizer;
  ordered_json raw;  ///< the resolved document, embedded in reports
};

namespace detail {

[[noreturn]] inline void config_fail(const std::string& where, const std::string& what) {
  failf(errc::invalid_config, "config ", where, ": ", what);
}

inline const ordered_json& member(const ordered_json& j, const std::string& where,
                                  const char* key) {
  if (!j.is_object() || !j.contains(key))
    config_fail(where, std::string("missing key '") + key + "'");
  return j[key];
}

template <typename T>
T get_as(const ordered_json& j, const std::string& where, const char* key) {
  try {
    return member(j, where, key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    config_fail(where + "." + key, e.what());
  }
}

template <typename T>
T get_or(const ordered_json& j, const std::string& where, const char* key,
         T fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return get_as<T>(j, where, key);
}

/// Accepts a scalar (broadcast to n entries) or an n-element array.
inline std::vector<double> broadcast(const ordered_json& j, const std::string& where,
                                     std::size_t n) {
  if (j.is_number()) return std::vector<double>(n, j.get<double>());
  if (j.is_array()) {
    auto v = j.get<std::vector<double>>();
    if (v.size() != n)
      config_fail(where, "expected " + std::to_string(n) + " entries, got " +
                             std::to_string(v.size()));
    return v;
  }
  config_fail(where, "expected a number or an array of numbers");
}

inline schema parse_schema(const ordered_json& j) {
  if (!j.is_array() || j.empty()) config_fail("data.schema", "expected a non-empty array");
  schema columns;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string where = "data.schema[" + std::to_string(i) + "]";
    column_schema col;
    col.name = get_as<std::string>(j[i], where, "name");
    const std::string kind = get_or<std::string>(j[i], where, "kind", "continuous");
    if (kind == "continuous") {
      col.kind = column_kind::continuous;
    } else if (kind == "categorical") {
      col.kind = column_kind::categorical;
      col.categories = get_as<std::vector<std::string>>(j[i], where, "categories");
    } else {
      config_fail(where + ".kind", "unknown kind '" + kind + "'");
    }
    columns.push_back(std::move(col));
  }
  try {
    validate_schema(columns);
  } catch (const error& e) {
    config_fail("data.schema", e.what());
  }
  return columns;
}

inline std::vector<objective_spec> parse_objectives(const ordered_json& j) {
  if (!j.is_array() || j.empty()) config_fail("objectives", "expected a non-empty array");
  std::vector<objective_spec> specs;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string where = "objectives[" + std::to_string(i) + "]";
    objective_spec spec;
    spec.name = get_as<std::string>(j[i], where, "name");
    const std::string dir = get_or<std::string>(j[i], where, "direction", "maximize");
    if (dir == "maximize") {
      spec.direction = objective_direction::maximize;
    } else if (dir == "minimize_magnitude") {
      spec.direction = objective_direction::minimize_magnitude;
    } else {
      config_fail(where + ".direction", "unknown direction '" + dir + "'");
    }
    spec.epsilon = get_or<double>(j[i], where, "epsilon", 1e-9);
    specs.push_back(std::move(spec));
  }
  try {
    validate_objectives(specs);
  } catch (const error& e) {
    config_fail("objectives", e.what());
  }
  return specs;
}

inline target_config parse_targets(const ordered_json& j, std::size_t n_obj) {
  target_config out;
  if (j.contains("percentile")) {
    out.percentile = get_as<double>(j, "targets", "percentile");
    out.alpha = get_or<double>(j, "targets", "alpha", 1.0);
    out.beta = get_or<double>(j, "targets", "beta", 4.0);
    if (*out.percentile < 0.0 || *out.percentile > 100.0)
      config_fail("targets.percentile", "must be in [0, 100]");
    return out;
  }
  if (j.contains("t")) {
    target_spec spec;
    spec.t = broadcast(member(j, "targets", "t"), "targets.t", n_obj);
    spec.alpha = j.contains("alpha")
                     ? broadcast(j["alpha"], "targets.alpha", n_obj)
                     : std::vector<double>(n_obj, 1.0);
    spec.beta = j.contains("beta") ? broadcast(j["beta"], "targets.beta", n_obj)
                                   : std::vector<double>(n_obj, 4.0);
    try {
      validate_targets(spec);
    } catch (const error& e) {
      config_fail("targets", e.what());
    }
    out.explicit_targets = std::move(spec);
    return out;
  }
  config_fail("targets", "expected either 'percentile' or 't'");
}

inline reference_config parse_reference(const ordered_json& j, std::size_t n_obj) {
  reference_config out;
  if (j.contains("percentile")) {
    out.percentile = get_as<double>(j, "reference", "percentile");
    if (*out.percentile < 0.0 || *out.percentile > 100.0)
      config_fail("reference.percentile", "must be in [0, 100]");
    return out;
  }
  if (j.contains("point")) {
    out.point = broadcast(member(j, "reference", "point"), "reference.point", n_obj);
    return out;
  }
  config_fail("reference", "expected either 'percentile' or 'point'");
}

inline std::vector<feasibility_rule> parse_rules(const ordered_json& j) {
  if (!j.is_array()) config_fail("rules", "expected an array");
  std::vector<feasibility_rule> rules;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string where = "rules[" + std::to_string(i) + "]";
    const std::string kind = get_as<std::string>(j[i], where, "kind");
    const std::string label = get_or<std::string>(j[i], where, "label", kind);
    if (kind == "non_negative") {
      rules.push_back(non_negative_rule(get_as<std::string>(j[i], where, "column"), label));
    } else if (kind == "lower_bound") {
      rules.push_back(lower_bound_rule(get_as<std::string>(j[i], where, "column"),
                                       get_as<double>(j[i], where, "bound"), label));
    } else if (kind == "upper_bound") {
      rules.push_back(upper_bound_rule(get_as<std::string>(j[i], where, "column"),
                                       get_as<double>(j[i], where, "bound"), label));
    } else if (kind == "linear_inequality") {
      auto coeffs =
          get_as<std::map<std::string, double>>(j[i], where, "coeffs");
      rules.push_back(linear_inequality_rule(std::move(coeffs),
                                             get_as<double>(j[i], where, "rhs"), label));
    } else if (kind == "triangle_inequality") {
      rules.push_back(triangle_rule(get_as<std::string>(j[i], where, "a"),
                                    get_as<std::string>(j[i], where, "b"),
                                    get_as<std::string>(j[i], where, "c"), label));
    } else {
      config_fail(where + ".kind", "unknown rule kind '" + kind + "'");
    }
  }
  return rules;
}

inline generator_config parse_generator(const ordered_json& j) {
  generator_config out;
  const std::string kind = get_or<std::string>(j, "generator", "kind", "dataset");
  if (kind == "dataset") {
    out.kind = generator_kind::dataset;
  } else if (kind == "interpolation") {
    out.kind = generator_kind::interpolation;
  } else if (kind == "external") {
    out.kind = generator_kind::external;
    out.path = get_as<std::string>(j, "generator", "path");
  } else {
    config_fail("generator.kind", "unknown generator '" + kind + "'");
  }
  out.count = get_or<std::size_t>(j, "generator", "count", 250);
  if (out.count == 0 && out.kind != generator_kind::external)
    config_fail("generator.count", "must be >= 1");
  out.seed.value = get_or<std::uint64_t>(j, "generator", "seed", 1);
  return out;
}

inline evaluation_config parse_evaluation(const ordered_json& j) {
  evaluation_config out;
  if (j.contains("hv")) {
    const auto& hv = j["hv"];
    const std::string mode = get_or<std::string>(hv, "evaluation.hv", "mode", "auto");
    if (mode == "auto") {
      out.hv.mode = hv_mode::automatic;
    } else if (mode == "exact") {
      out.hv.mode = hv_mode::exact;
    } else if (mode == "monte_carlo") {
      out.hv.mode = hv_mode::monte_carlo;
    } else {
      config_fail("evaluation.hv.mode", "unknown mode '" + mode + "'");
    }
    out.hv.mc_samples =
        get_or<std::size_t>(hv, "evaluation.hv", "mc_samples", out.hv.mc_samples);
    out.hv.seed.value = get_or<std::uint64_t>(hv, "evaluation.hv", "seed", 9001);
  }
  out.standardize = get_or<bool>(j, "evaluation", "standardize", false);
  out.kde_grid = get_or<std::size_t>(j, "evaluation", "kde_grid", 256);
  if (out.kde_grid < 2) config_fail("evaluation.kde_grid", "must be >= 2");
  return out;
}

inline benchmark_config parse_benchmark(const ordered_json& j) {
  benchmark_config out;
  out.problem = get_or<std::string>(j, "benchmark", "problem", "gaussian_peaks");
  if (out.problem != "gaussian_peaks")
    config_fail("benchmark.problem", "unknown problem '" + out.problem + "'");
  out.dim = get_as<std::size_t>(j, "benchmark", "dim");
  out.n_obj = get_as<std::size_t>(j, "benchmark", "n_obj");
  out.seed.value = get_or<std::uint64_t>(j, "benchmark", "problem_seed", 11);
  if (out.dim < 1) config_fail("benchmark.dim", "must be >= 1");
  if (out.n_obj < 1) config_fail("benchmark.n_obj", "must be >= 1");
  return out;
}

inline optimizer_config parse_optimizer(const ordered_json& j) {
  optimizer_config out;
  out.population = get_or<std::size_t>(j, "optimizer", "population", out.population);
  out.max_iters = get_or<std::size_t>(j, "optimizer", "max_iters", out.max_iters);
  out.learning_rate =
      get_or<double>(j, "optimizer", "learning_rate", out.learning_rate);
  out.tolerance = get_or<double>(j, "optimizer", "tolerance", out.tolerance);
  out.window = get_or<std::size_t>(j, "optimizer", "window", out.window);
  out.seed.value = get_or<std::uint64_t>(j, "optimizer", "seed", out.seed.value);
  try {
    validate_optimizer_config(out);
  } catch (const error& e) {
    config_fail("optimizer", e.what());
  }
  return out;
}

}  // namespace detail

inline run_config parse_config(const ordered_json& j) {
  if (!j.is_object()) detail::config_fail("(root)", "expected a JSON object");
  run_config cfg;
  cfg.raw = j;

  const auto& data = detail::member(j, "(root)", "data");
  cfg.data_path = detail::get_as<std::string>(data, "data", "path");
  cfg.columns = detail::parse_schema(detail::member(data, "data", "schema"));
  cfg.objectives = detail::parse_objectives(detail::member(j, "(root)", "objectives"));
  cfg.targets =
      detail::parse_targets(detail::member(j, "(root)", "targets"), cfg.objectives.size());
  cfg.reference = detail::parse_reference(detail::member(j, "(root)", "reference"),
                                          cfg.objectives.size());
  if (j.contains("rules")) cfg.rules = detail::parse_rules(j["rules"]);
  if (j.contains("generator")) cfg.generator = detail::parse_generator(j["generator"]);
  if (j.contains("evaluation")) cfg.evaluation = detail::parse_evaluation(j["evaluation"]);
  if (j.contains("benchmark")) cfg.benchmark = detail::parse_benchmark(j["benchmark"]);
  if (j.contains("optimizer")) cfg.optimizer = detail::parse_optimizer(j["optimizer"]);
  return cfg;
}

/// Applies one "dotted.path=value" override to a JSON document, creating
/// intermediate objects as needed. The value is parsed as JSON when it is
/// valid JSON, otherwise taken as a bare string.
inline void apply_override(ordered_json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  require(eq != std::string::npos && eq > 0, errc::invalid_config,
          "override '", assignment, "' is not of the form key=value");
  const std::string path = assignment.substr(0, eq);
  const std::string value_text = assignment.substr(eq + 1);

  ordered_json value = ordered_json::parse(value_text, nullptr, false);
  if (value.is_discarded()) value = value_text;

  ordered_json* node = &j;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot - start);
    require(!key.empty(), errc::invalid_config, "override '", assignment,
            "' has an empty path segment");
    if (dot == std::string::npos) {
      (*node)[key] = std::move(value);
      return;
    }
    if (!node->contains(key) || !(*node)[key].is_object()) (*node)[key] = ordered_json::object();
    node = &(*node)[key];
    start = dot + 1;
  }
}

/// Reads a config file, applies --set overrides in order, and parses. File
/// system problems surface as IoError, everything else as InvalidConfig.
inline run_config load_config(const std::filesystem::path& path,
                              const std::vector<std::string>& overrides = {}) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), errc::io_error, "cannot read config '", path.string(), "'");
  ordered_json j = ordered_json::parse(in, nullptr, false);
  require(!j.is_discarded(), errc::invalid_config, "config '", path.string(),
          "' is not valid JSON");
  for (const auto& assignment : overrides) apply_override(j, assignment);
  run_config cfg = parse_config(j);

  // Relative data paths are taken relative to the config file itself, so a
  // config directory can be moved or mounted anywhere as one unit.
  const auto base = path.parent_path();
  if (!base.empty()) {
    if (cfg.data_path.is_relative()) cfg.data_path = base / cfg.data_path;
    if (cfg.generator.kind == generator_kind::external &&
        cfg.generator.path.is_relative())
      cfg.generator.path = base / cfg.generator.path;
  }
  return cfg;
}

}  // namespace dtai
