#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dtai/dataset.hpp"
#include "dtai/optimize.hpp"
#include "dtai/rng.hpp"
#include "dtai/types.hpp"

namespace dtai {

/// Fixed recipe for the bundled synthetic design study: a five-dimensional
/// box with one categorical material column and four objectives given by
/// the Gaussian peaks benchmark. Dataset rows cluster near the corners of
/// the box, far from the peak centers, which is what makes interpolation
/// and gradient ascent measurably better than resampling the data.
struct demo_spec {
  std::size_t rows = 5000;
  std::size_t dim = 5;
  std::size_t n_obj = 4;
  rng_seed dataset_seed{7};
  rng_seed problem_seed{11};
  double corner_fraction = 0.55;
  double corner_noise = 0.12;
};

inline gaussian_peaks_problem demo_problem(const demo_spec& spec = {}) {
  return gaussian_peaks_problem(spec.dim, spec.n_obj, spec.problem_seed);
}

inline schema demo_schema(const demo_spec& spec = {}) {
  schema columns;
  for (std::size_t j = 0; j < spec.dim; ++j)
    columns.push_back({"x" + std::to_string(j), column_kind::continuous, {}});
  columns.push_back({"material",
                     column_kind::categorical,
                     {"steel", "aluminum", "polymer"}});
  return columns;
}

/// First half of the objectives is stored as-is, second half is stored as a
/// magnitude to be minimized, so the raw file exercises both adjustments.
inline std::vector<objective_spec> demo_objectives(const demo_spec& spec = {}) {
  std::vector<objective_spec> specs;
  for (std::size_t k = 0; k < spec.n_obj; ++k) {
    objective_spec o;
    o.name = "p" + std::to_string(k);
    o.direction = k < spec.n_obj / 2 ? objective_direction::maximize
                                     : objective_direction::minimize_magnitude;
    specs.push_back(std::move(o));
  }
  return specs;
}

/// Deterministic synthetic dataset with adjusted performance attached.
/// corner_fraction of the rows sit near a random box corner with Gaussian
/// jitter, the rest are uniform; material frequencies are 60/30/10.
inline design_set demo_dataset(const demo_spec& spec = {}) {
  require(spec.rows >= 2, errc::invalid_parameter, "demo needs at least 2 rows");
  const gaussian_peaks_problem problem = demo_problem(spec);
  rng gen(spec.dataset_seed);

  design_set set;
  set.columns = demo_schema(spec);
  set.designs.reserve(spec.rows);
  std::vector<performance_vector> perf;
  perf.reserve(spec.rows);

  for (std::size_t i = 0; i < spec.rows; ++i) {
    design_record rec;
    rec.values.resize(spec.dim);
    if (gen.uniform() < spec.corner_fraction) {
      for (std::size_t j = 0; j < spec.dim; ++j) {
        const double corner = gen.uniform() < 0.5 ? 0.0 : 1.0;
        rec.values[j] =
            std::clamp(corner + spec.corner_noise * gen.normal(), 0.0, 1.0);
      }
    } else {
      for (std::size_t j = 0; j < spec.dim; ++j) rec.values[j] = gen.uniform();
    }
    const double m = gen.uniform();
    rec.labels.push_back(m < 0.6 ? 0 : (m < 0.9 ? 1 : 2));
    perf.push_back(problem.evaluate(rec.values));
    set.designs.push_back(std::move(rec));
  }
  set.performance = std::move(perf);
  return set;
}

namespace detail {

inline ordered_json demo_config_json(const demo_spec& spec) {
  ordered_json schema_json = ordered_json::array();
  for (std::size_t j = 0; j < spec.dim; ++j)
    schema_json.push_back({{"name", "x" + std::to_string(j)}, {"kind", "continuous"}});
  schema_json.push_back({{"name", "material"},
                         {"kind", "categorical"},
                         {"categories", {"steel", "aluminum", "polymer"}}});

  ordered_json objectives = ordered_json::array();
  for (const auto& o : demo_objectives(spec))
    objectives.push_back(
        {{"name", o.name},
         {"direction", o.direction == objective_direction::maximize
                           ? "maximize"
                           : "minimize_magnitude"}});

  ordered_json rules = ordered_json::array();
  rules.push_back({{"kind", "non_negative"}, {"column", "x0"}, {"label", "x0 sign"}});
  rules.push_back({{"kind", "upper_bound"},
                   {"column", "x1"},
                   {"bound", 1.0},
                   {"label", "x1 cap"}});
  rules.push_back({{"kind", "linear_inequality"},
                   {"coeffs", {{"x2", 1.0}, {"x3", 1.0}}},
                   {"rhs", 2.0},
                   {"label", "x2+x3 budget"}});

  ordered_json j;
  j["data"] = {{"path", "designs.csv"}, {"schema", schema_json}};
  j["objectives"] = objectives;
  j["targets"] = {{"percentile", 75.0}, {"alpha", 1.0}, {"beta", 4.0}};
  j["reference"] = {{"percentile", 1.0}};
  j["rules"] = rules;
  j["generator"] = {{"kind", "dataset"}, {"count", 250}, {"seed", 21}};
  j["evaluation"] = {{"hv", {{"mode", "auto"}, {"mc_samples", 1 << 18}, {"seed", 9001}}},
                     {"standardize", false},
                     {"kde_grid", 256}};
  j["benchmark"] = {{"problem", "gaussian_peaks"},
                    {"dim", spec.dim},
                    {"n_obj", spec.n_obj},
                    {"problem_seed", spec.problem_seed.value}};
  j["optimizer"] = {{"population", 64},
                    {"max_iters", 500},
                    {"learning_rate", 0.1},
                    {"tolerance", 1e-7},
                    {"window", 10},
                    {"seed", 2024}};
  return j;
}

}  // namespace detail

/// Writes the bundled study to a directory: designs.csv (raw objective
/// columns, reproducible byte for byte) plus config.json ready for the
/// evaluate and optimize commands.
inline void write_demo_files(const std::filesystem::path& dir,
                             const demo_spec& spec = {}) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  require(!ec, errc::io_error, "cannot create '", dir.string(), "': ", ec.message());

  const design_set set = demo_dataset(spec);
  const auto objectives = demo_objectives(spec);
  write_design_csv(set, dir / "designs.csv", &objectives);

  std::ofstream out(dir / "config.json", std::ios::binary);
  require(out.good(), errc::io_error, "cannot write '", (dir / "config.json").string(),
          "'");
  out << detail::demo_config_json(spec).dump(2) << '\n';
  require(out.good(), errc::io_error, "write failed for '",
          (dir / "config.json").string(), "'");
}

}  // namespace dtai
