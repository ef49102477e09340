#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "dtai/baselines.hpp"
#include "dtai/config.hpp"
#include "dtai/dataset.hpp"
#include "dtai/demo.hpp"
#include "dtai/feasibility.hpp"
#include "dtai/optimize.hpp"
#include "dtai/report.hpp"

namespace dtai {

namespace detail {

inline std::vector<std::string> objective_names(const std::vector<objective_spec>& specs) {
  std::vector<std::string> names;
  names.reserve(specs.size());
  for (const auto& spec : specs) names.push_back(spec.name);
  return names;
}

inline design_set load_adjusted_dataset(const run_config& cfg) {
  design_set raw = ingest_csv(cfg.data_path, cfg.columns, objective_names(cfg.objectives));
  return adjust_set_performance(std::move(raw), cfg.objectives);
}

inline target_spec resolve_targets(const run_config& cfg, const design_set& dataset) {
  if (cfg.targets.explicit_targets) return *cfg.targets.explicit_targets;
  return uniform_targets(percentile_of(dataset, *cfg.targets.percentile),
                         cfg.targets.alpha, cfg.targets.beta);
}

inline std::vector<double> resolve_reference(const run_config& cfg,
                                             const design_set& dataset) {
  if (cfg.reference.point) return *cfg.reference.point;
  return percentile_of(dataset, *cfg.reference.percentile);
}

/// Scores interpolated designs through the configured benchmark, mapping
/// the continuous part of each record straight into the problem domain.
inline void attach_benchmark_performance(design_set& set, const run_config& cfg) {
  require(cfg.benchmark.has_value(), errc::no_performance,
          "the interpolation generator produces unscored designs; add a "
          "benchmark section so they can be evaluated");
  const benchmark_config& bench = *cfg.benchmark;
  require(bench.dim == continuous_count(set.columns), errc::dimension_mismatch,
          "benchmark dim ", bench.dim, " does not match the ",
          continuous_count(set.columns), " continuous schema columns");
  require(bench.n_obj == cfg.objectives.size(), errc::dimension_mismatch,
          "benchmark n_obj ", bench.n_obj, " does not match the ",
          cfg.objectives.size(), " configured objectives");
  const gaussian_peaks_problem problem(bench.dim, bench.n_obj, bench.seed);
  std::vector<performance_vector> perf;
  perf.reserve(set.size());
  for (const auto& rec : set.designs) perf.push_back(problem.evaluate(rec.values));
  set.performance = std::move(perf);
}

inline design_set generate_set(const run_config& cfg, const design_set& dataset) {
  switch (cfg.generator.kind) {
    case generator_kind::dataset:
      return sample_dataset(dataset, cfg.generator.count, cfg.generator.seed);
    case generator_kind::interpolation: {
      design_set set = interpolate(dataset, cfg.generator.count, cfg.generator.seed);
      attach_benchmark_performance(set, cfg);
      return set;
    }
    case generator_kind::external: {
      design_set raw =
          ingest_csv(cfg.generator.path, cfg.columns, objective_names(cfg.objectives));
      return adjust_set_performance(std::move(raw), cfg.objectives);
    }
  }
  failf(errc::invalid_config, "unhandled generator kind");
}

inline evaluate_options make_evaluate_options(const run_config& cfg,
                                              std::size_t threads) {
  evaluate_options options;
  options.hv = cfg.evaluation.hv;
  if (threads > 0) options.hv.threads = threads;
  options.standardize = cfg.evaluation.standardize;
  options.kde_grid = cfg.evaluation.kde_grid;
  return options;
}

inline void write_report_files(const evaluation_report& report,
                               const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  require(!ec, errc::io_error, "cannot create '", out_dir.string(), "': ",
          ec.message());
  write_report_json(report, out_dir / "report.json");
  write_scores_csv(report, out_dir / "scores.csv");
  write_kde_csv(report, out_dir / "kde.csv");
}

}  // namespace detail

/// Full evaluate pipeline: ingest and adjust the dataset, resolve targets
/// and the reference point, generate a candidate set, flag feasibility, and
/// score everything. The resolved config travels inside the report.
inline evaluation_report run_evaluate(const run_config& cfg, std::size_t threads = 0) {
  const design_set dataset = detail::load_adjusted_dataset(cfg);
  const target_spec targets = detail::resolve_targets(cfg, dataset);
  const std::vector<double> reference = detail::resolve_reference(cfg, dataset);

  design_set generated = detail::generate_set(cfg, dataset);
  generated = flag_set(std::move(generated), cfg.rules);

  evaluation_report report = evaluate_set(generated, targets, reference, dataset,
                                          detail::make_evaluate_options(cfg, threads));
  report.config = cfg.raw;
  return report;
}

struct optimize_outcome {
  optimization_trajectory trajectory;
  evaluation_report report;
};

/// Full optimize pipeline: build the benchmark, resolve targets (from the
/// dataset when given as a percentile), run gradient ascent, and score the
/// final population against the initial one.
inline optimize_outcome run_optimize(const run_config& cfg, std::size_t threads = 0) {
  require(cfg.benchmark.has_value(), errc::invalid_config,
          "optimize needs a benchmark section");
  const benchmark_config& bench = *cfg.benchmark;

  target_spec targets;
  if (cfg.targets.explicit_targets) {
    targets = *cfg.targets.explicit_targets;
  } else {
    const design_set dataset = detail::load_adjusted_dataset(cfg);
    targets = detail::resolve_targets(cfg, dataset);
  }
  require(targets.size() == bench.n_obj, errc::dimension_mismatch, "targets cover ",
          targets.size(), " objectives, benchmark produces ", bench.n_obj);

  const gaussian_peaks_problem problem(bench.dim, bench.n_obj, bench.seed);
  optimize_outcome out;
  out.trajectory = ascend_dtai(problem, targets, cfg.optimizer);
  out.report = evaluate_trajectory(out.trajectory, targets,
                                   detail::make_evaluate_options(cfg, threads));
  out.report.config = cfg.raw;
  return out;
}

/// Exit codes shared by every subcommand: 0 success, 1 runtime failure,
/// 2 configuration or usage failure.
inline constexpr int exit_ok = 0;
inline constexpr int exit_runtime = 1;
inline constexpr int exit_config = 2;

namespace detail {

inline int classify(const error& e) {
  return e.code() == errc::invalid_config ? exit_config : exit_runtime;
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    fn();
    return exit_ok;
  } catch (const error& e) {
    err << "error: " << e.code_name() << ": " << e.what() << '\n';
    return classify(e);
  } catch (const std::exception& e) {
    err << "error: Unexpected: " << e.what() << '\n';
    return exit_runtime;
  }
}

}  // namespace detail

inline int cmd_evaluate(const std::filesystem::path& config_path,
                        const std::vector<std::string>& overrides,
                        const std::filesystem::path& out_dir, std::size_t threads,
                        std::ostream& out, std::ostream& err,
                        const std::filesystem::path& data_path = {},
                        const std::filesystem::path& generated_path = {}) {
  return detail::guarded(err, [&] {
    run_config cfg = load_config(config_path, overrides);
    if (!data_path.empty()) cfg.data_path = data_path;
    if (!generated_path.empty()) {
      cfg.generator.kind = generator_kind::external;
      cfg.generator.path = generated_path;
    }
    const evaluation_report report = run_evaluate(cfg, threads);
    detail::write_report_files(report, out_dir);
    out << format_table(report);
  });
}

inline int cmd_optimize(const std::filesystem::path& config_path,
                        const std::vector<std::string>& overrides,
                        const std::filesystem::path& out_dir, std::size_t threads,
                        std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const run_config cfg = load_config(config_path, overrides);
    const optimize_outcome outcome = run_optimize(cfg, threads);
    detail::write_report_files(outcome.report, out_dir);
    write_trajectory_csv(outcome.trajectory, out_dir / "trajectory.csv");
    out << format_table(outcome.report);
  });
}

inline int cmd_report(const std::filesystem::path& report_path, std::ostream& out,
                      std::ostream& err) {
  return detail::guarded(err, [&] {
    std::ifstream in(report_path, std::ios::binary);
    require(in.good(), errc::io_error, "cannot read '", report_path.string(), "'");
    ordered_json j = ordered_json::parse(in, nullptr, false);
    // A broken report is bad data, not bad configuration: exit code 1.
    require(!j.is_discarded(), errc::schema_mismatch, "'", report_path.string(),
            "' is not valid JSON");
    evaluation_report report;
    try {
      report = report_from_json(j);
    } catch (const nlohmann::json::exception& e) {
      failf(errc::schema_mismatch, "'", report_path.string(),
            "' is not a report file: ", e.what());
    }
    const auto dir = report_path.has_parent_path() ? report_path.parent_path()
                                                   : std::filesystem::path(".");
    write_kde_csv(report, dir / "kde.csv");
    out << format_table(report);
  });
}

inline int cmd_demo(const std::filesystem::path& out_dir, std::ostream& out,
                    std::ostream& err) {
  return detail::guarded(err, [&] {
    write_demo_files(out_dir);
    out << "wrote designs.csv and config.json to " << out_dir.string() << '\n';
  });
}

}  // namespace dtai
