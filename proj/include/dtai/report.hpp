#pragma once

#include <array>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dtai/csv.hpp"
#include "dtai/dataset.hpp"
#include "dtai/metrics.hpp"
#include "dtai/score.hpp"
#include "dtai/types.hpp"

namespace dtai {

using ordered_json = nlohmann::ordered_json;

/// One per-design metric over the feasible subset, or the reason it was
/// left out (e.g. TooFewDesigns when only one design is feasible).
struct metric_block {
  bool present = false;
  double mean = 0.0;
  std::vector<double> values;
  std::string omitted_reason;
};

/// Everything a generated set is scored on: feasibility rate over the whole
/// set, then hypervolume plus the six per-design metrics over the feasible
/// subset, with KDE summaries of their distributions.
struct evaluation_report {
  std::size_t total = 0;
  std::size_t feasible_count = 0;
  double gfr = 0.0;

  std::optional<hypervolume_result> hv;
  std::string hv_omitted;

  metric_block dsd;   ///< design space diversity (encoded design vectors)
  metric_block psd;   ///< performance space diversity
  metric_block dn;    ///< design novelty vs. the source dataset
  metric_block dtai;  ///< design target achievement index
  metric_block tsr;   ///< target success rate
  metric_block mtr;   ///< minimum target ratio

  std::map<std::string, kde_curve> kde_curves;
  std::map<std::string, std::string> kde_omitted;

  std::vector<std::size_t> feasible_indices;
  target_spec targets;
  std::vector<double> reference;
  ordered_json config;  ///< resolved run config when produced by the CLI
};

struct evaluate_options {
  hv_options hv;
  bool standardize = false;  ///< z-score continuous columns before distances
  std::size_t kde_grid = 256;
  below_target_form form = below_target_form::penalty;
};

namespace detail {

inline const std::array<const char*, 6> per_design_metric_names = {
    "dsd", "psd", "dn", "dtai", "tsr", "mtr"};

inline double mean_of(const std::vector<double>& values) {
  double acc = 0.0;
  for (double v : values) acc += v;
  return acc / static_cast<double>(values.size());
}

inline void fill_block(metric_block& block, std::vector<double> values) {
  block.values = std::move(values);
  block.mean = mean_of(block.values);
  block.present = true;
}

inline void omit_block(metric_block& block, errc reason) {
  block.present = false;
  block.values.clear();
  block.omitted_reason = to_string(reason);
}

}  // namespace detail

/// Scores a generated set against targets, a hypervolume reference, and the
/// source dataset (for novelty). GFR covers the whole set; every other
/// metric covers the feasible subset only. Metrics that cannot be computed
/// (too few feasible designs, degenerate samples) are reported as omitted
/// rather than raising.
inline evaluation_report evaluate_set(const design_set& set, const target_spec& targets,
                                      const std::vector<double>& reference,
                                      const design_set& dataset,
                                      const evaluate_options& options = {}) {
  validate_set(set);
  validate_targets(targets);
  require(set.performance.has_value(), errc::no_performance,
          "generated set has no performance attached");
  require(set.feasible.has_value(), errc::invalid_parameter,
          "generated set has no feasibility flags attached");
  require(!dataset.designs.empty(), errc::empty_dataset, "source dataset is empty");
  require(schemas_equal(set.columns, dataset.columns), errc::schema_mismatch,
          "generated set and dataset use different schemas");

  evaluation_report report;
  report.total = set.size();
  report.gfr = feasibility_rate(*set.feasible);
  report.targets = targets;
  report.reference = reference;

  for (std::size_t i = 0; i < set.size(); ++i)
    if ((*set.feasible)[i]) report.feasible_indices.push_back(i);
  report.feasible_count = report.feasible_indices.size();

  if (report.feasible_count == 0) {
    report.hv_omitted = to_string(errc::no_feasible_designs);
    for (metric_block* block :
         {&report.dsd, &report.psd, &report.dn, &report.dtai, &report.tsr, &report.mtr})
      detail::omit_block(*block, errc::no_feasible_designs);
    for (const char* name : detail::per_design_metric_names)
      report.kde_omitted[name] = to_string(errc::no_feasible_designs);
    return report;
  }

  std::vector<performance_vector> feasible_perf;
  feasible_perf.reserve(report.feasible_count);
  for (std::size_t i : report.feasible_indices)
    feasible_perf.push_back((*set.performance)[i]);

  standardizer st;
  const standardizer* st_ptr = nullptr;
  if (options.standardize) {
    st = fit_standardizer(dataset);
    st_ptr = &st;
  }

  // Design space diversity on encoded vectors of the feasible subset.
  if (report.feasible_count >= 2) {
    std::vector<std::vector<double>> encoded;
    encoded.reserve(report.feasible_count);
    for (std::size_t i : report.feasible_indices)
      encoded.push_back(encode_for_distance(set.designs[i], set.columns, st_ptr));
    detail::fill_block(report.dsd, diversity_scores(encoded));

    std::vector<std::vector<double>> perf_rows;
    perf_rows.reserve(report.feasible_count);
    for (const auto& pv : feasible_perf) perf_rows.push_back(pv.p);
    detail::fill_block(report.psd, diversity_scores(perf_rows));
  } else {
    detail::omit_block(report.dsd, errc::too_few_designs);
    detail::omit_block(report.psd, errc::too_few_designs);
  }

  {
    std::vector<std::vector<double>> generated_encoded, dataset_encoded;
    generated_encoded.reserve(report.feasible_count);
    for (std::size_t i : report.feasible_indices)
      generated_encoded.push_back(encode_for_distance(set.designs[i], set.columns, st_ptr));
    dataset_encoded.reserve(dataset.designs.size());
    for (const auto& rec : dataset.designs)
      dataset_encoded.push_back(encode_for_distance(rec, dataset.columns, st_ptr));
    detail::fill_block(report.dn, novelty_scores(generated_encoded, dataset_encoded));
  }

  {
    std::vector<double> dtai_values, tsr_values, mtr_values;
    dtai_values.reserve(report.feasible_count);
    for (const auto& pv : feasible_perf) {
      dtai_values.push_back(score(pv, targets, options.form).value);
      tsr_values.push_back(target_success_rate(pv, targets));
      mtr_values.push_back(minimum_target_ratio(pv, targets));
    }
    detail::fill_block(report.dtai, std::move(dtai_values));
    detail::fill_block(report.tsr, std::move(tsr_values));
    detail::fill_block(report.mtr, std::move(mtr_values));
  }

  try {
    report.hv = hypervolume(feasible_perf, reference, options.hv);
  } catch (const error& e) {
    report.hv_omitted = e.code_name();
  }

  const std::array<const metric_block*, 6> blocks = {&report.dsd, &report.psd,
                                                     &report.dn, &report.dtai,
                                                     &report.tsr, &report.mtr};
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const char* name = detail::per_design_metric_names[k];
    if (!blocks[k]->present) {
      report.kde_omitted[name] = blocks[k]->omitted_reason;
      continue;
    }
    try {
      report.kde_curves[name] = kde(blocks[k]->values, options.kde_grid);
    } catch (const error& e) {
      report.kde_omitted[name] = e.code_name();
    }
  }
  return report;
}

namespace detail {

inline ordered_json block_to_json(const metric_block& block) {
  ordered_json j;
  if (block.present) {
    j["mean"] = block.mean;
  } else {
    j["omitted"] = block.omitted_reason;
  }
  return j;
}

inline void block_from_json(const ordered_json& j, metric_block& block) {
  if (j.contains("omitted")) {
    block.present = false;
    block.omitted_reason = j["omitted"].get<std::string>();
  } else {
    block.present = true;
    block.mean = j["mean"].get<double>();
  }
}

}  // namespace detail

inline ordered_json to_json(const evaluation_report& report) {
  ordered_json j;
  j["config"] = report.config.is_null() ? ordered_json::object() : report.config;
  j["counts"] = {{"total", report.total}, {"feasible", report.feasible_count}};
  j["gfr"] = report.gfr;
  j["targets"] = {{"t", report.targets.t},
                  {"alpha", report.targets.alpha},
                  {"beta", report.targets.beta}};
  j["reference"] = report.reference;

  if (report.hv) {
    ordered_json hv;
    hv["value"] = report.hv->value;
    hv["method"] = report.hv->method == hv_method::exact ? "exact" : "monte_carlo";
    if (report.hv->std_error) hv["std_error"] = *report.hv->std_error;
    hv["dropped"] = report.hv->dropped;
    j["hypervolume"] = std::move(hv);
  } else {
    j["hypervolume"] = {{"omitted", report.hv_omitted}};
  }

  const std::array<const metric_block*, 6> blocks = {&report.dsd, &report.psd,
                                                     &report.dn, &report.dtai,
                                                     &report.tsr, &report.mtr};
  ordered_json metrics;
  ordered_json per_design;
  per_design["feasible_indices"] = report.feasible_indices;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const char* name = detail::per_design_metric_names[k];
    metrics[name] = detail::block_to_json(*blocks[k]);
    if (blocks[k]->present) per_design[name] = blocks[k]->values;
  }
  j["metrics"] = std::move(metrics);
  j["per_design"] = std::move(per_design);

  ordered_json kde_json;
  for (const char* name : detail::per_design_metric_names) {
    auto curve = report.kde_curves.find(name);
    if (curve != report.kde_curves.end()) {
      kde_json[name] = {{"bandwidth", curve->second.bandwidth},
                        {"grid", curve->second.grid},
                        {"density", curve->second.density}};
    } else {
      auto omitted = report.kde_omitted.find(name);
      kde_json[name] = {
          {"omitted", omitted != report.kde_omitted.end() ? omitted->second : "Unknown"}};
    }
  }
  j["kde"] = std::move(kde_json);
  return j;
}

inline evaluation_report report_from_json(const ordered_json& j) {
  evaluation_report report;
  report.config = j.at("config");
  report.total = j.at("counts").at("total").get<std::size_t>();
  report.feasible_count = j.at("counts").at("feasible").get<std::size_t>();
  report.gfr = j.at("gfr").get<double>();
  report.targets.t = j.at("targets").at("t").get<std::vector<double>>();
  report.targets.alpha = j.at("targets").at("alpha").get<std::vector<double>>();
  report.targets.beta = j.at("targets").at("beta").get<std::vector<double>>();
  report.reference = j.at("reference").get<std::vector<double>>();

  const auto& hv = j.at("hypervolume");
  if (hv.contains("omitted")) {
    report.hv_omitted = hv["omitted"].get<std::string>();
  } else {
    hypervolume_result result;
    result.value = hv.at("value").get<double>();
    result.method =
        hv.at("method").get<std::string>() == "exact" ? hv_method::exact
                                                      : hv_method::monte_carlo;
    if (hv.contains("std_error")) result.std_error = hv["std_error"].get<double>();
    result.dropped = hv.at("dropped").get<std::size_t>();
    report.hv = result;
  }

  const std::array<metric_block*, 6> blocks = {&report.dsd, &report.psd, &report.dn,
                                               &report.dtai, &report.tsr, &report.mtr};
  const auto& metrics = j.at("metrics");
  const auto& per_design = j.at("per_design");
  report.feasible_indices =
      per_design.at("feasible_indices").get<std::vector<std::size_t>>();
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const char* name = detail::per_design_metric_names[k];
    detail::block_from_json(metrics.at(name), *blocks[k]);
    if (blocks[k]->present)
      blocks[k]->values = per_design.at(name).get<std::vector<double>>();
  }

  for (const char* name : detail::per_design_metric_names) {
    const auto& entry = j.at("kde").at(name);
    if (entry.contains("omitted")) {
      report.kde_omitted[name] = entry["omitted"].get<std::string>();
    } else {
      kde_curve curve;
      curve.bandwidth = entry.at("bandwidth").get<double>();
      curve.grid = entry.at("grid").get<std::vector<double>>();
      curve.density = entry.at("density").get<std::vector<double>>();
      report.kde_curves[name] = std::move(curve);
    }
  }
  return report;
}

inline void write_report_json(const evaluation_report& report,
                              const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), errc::io_error, "cannot write '", path.string(), "'");
  out << to_json(report).dump(2) << '\n';
  require(out.good(), errc::io_error, "write failed for '", path.string(), "'");
}

/// One row per design in the generated set; metric cells are empty for
/// infeasible designs and for metrics that were omitted.
inline void write_scores_csv(const evaluation_report& report,
                             const std::filesystem::path& path) {
  std::vector<std::string> header = {"index", "feasible", "dsd", "psd",
                                     "dn",    "dtai",     "tsr", "mtr"};
  const std::array<const metric_block*, 6> blocks = {&report.dsd, &report.psd,
                                                     &report.dn, &report.dtai,
                                                     &report.tsr, &report.mtr};
  std::vector<std::size_t> rank(report.total, report.total);
  for (std::size_t k = 0; k < report.feasible_indices.size(); ++k)
    rank[report.feasible_indices[k]] = k;

  std::vector<std::vector<std::string>> rows;
  rows.reserve(report.total);
  for (std::size_t i = 0; i < report.total; ++i) {
    std::vector<std::string> cells;
    cells.push_back(std::to_string(i));
    const bool feasible = rank[i] != report.total;
    cells.push_back(feasible ? "true" : "false");
    for (const metric_block* block : blocks) {
      if (feasible && block->present) {
        cells.push_back(format_double(block->values[rank[i]]));
      } else {
        cells.emplace_back();
      }
    }
    rows.push_back(std::move(cells));
  }
  write_csv(path, header, rows);
}

/// Long-format KDE dump: metric,grid,density.
inline void write_kde_csv(const evaluation_report& report,
                          const std::filesystem::path& path) {
  std::vector<std::vector<std::string>> rows;
  for (const char* name : detail::per_design_metric_names) {
    auto curve = report.kde_curves.find(name);
    if (curve == report.kde_curves.end()) continue;
    for (std::size_t g = 0; g < curve->second.grid.size(); ++g)
      rows.push_back({name, format_double(curve->second.grid[g]),
                      format_double(curve->second.density[g])});
  }
  write_csv(path, {"metric", "grid", "density"}, rows);
}

/// Fixed-order human-readable table of the eight headline metrics.
inline std::string format_table(const evaluation_report& report) {
  std::ostringstream out;
  auto print_row = [&out](const std::string& label, const std::string& value) {
    out << std::left << std::setw(46) << label << value << '\n';
  };
  auto number = [](double v) {
    std::ostringstream cell;
    cell << std::setprecision(6) << v;
    return cell.str();
  };
  auto block_cell = [&](const metric_block& block, double scale) {
    return block.present ? number(block.mean * scale)
                         : std::string("n/a (") + block.omitted_reason + ")";
  };
  print_row("Mean Design Space Diversity (DSD)", block_cell(report.dsd, 1.0));
  print_row("Mean Performance Space Diversity (PSD)", block_cell(report.psd, 1.0));
  print_row("Mean Design Novelty (DN)", block_cell(report.dn, 1.0));
  print_row("Geometric Feasibility Rate (GFR) (%)", number(report.gfr * 100.0));
  if (report.hv) {
    std::string cell = number(report.hv->value);
    if (report.hv->std_error)
      cell += " (+/- " + number(*report.hv->std_error) + " MC std err)";
    print_row("Hypervolume (HV)", cell);
  } else {
    print_row("Hypervolume (HV)", "n/a (" + report.hv_omitted + ")");
  }
  print_row("Mean Design Target Achievement Index (DTAI)",
            block_cell(report.dtai, 1.0));
  print_row("Mean Target Success Rate (TSR) (%)", block_cell(report.tsr, 100.0));
  print_row("Mean Minimum Target Ratio (MTR)", block_cell(report.mtr, 1.0));
  return out.str();
}

}  // namespace dtai
