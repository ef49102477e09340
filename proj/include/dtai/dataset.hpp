#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "dtai/csv.hpp"
#include "dtai/types.hpp"

namespace dtai {

/// Loads a tabular design file. The header must contain every schema column
/// and every objective column (any order, extras ignored); objective cells
/// are attached as raw, unadjusted performance. Row order is preserved.
inline design_set ingest_csv(const std::filesystem::path& path, const schema& columns,
                             const std::vector<std::string>& objective_columns) {
  validate_schema(columns);
  const csv_table table = read_csv(path);

  std::unordered_map<std::string, std::size_t> header_index;
  for (std::size_t i = 0; i < table.header.size(); ++i)
    header_index.emplace(table.header[i], i);

  auto column_of = [&](const std::string& name) {
    auto it = header_index.find(name);
    require(it != header_index.end(), errc::missing_column, "column '", name,
            "' missing from '", path.string(), "'");
    return it->second;
  };

  std::vector<std::size_t> value_cols, label_cols, objective_cols;
  std::vector<const column_schema*> label_schemas;
  for (const auto& col : columns) {
    const std::size_t idx = column_of(col.name);
    if (col.kind == column_kind::continuous) {
      value_cols.push_back(idx);
    } else {
      label_cols.push_back(idx);
      label_schemas.push_back(&col);
    }
  }
  for (const auto& name : objective_columns) objective_cols.push_back(column_of(name));

  require(!table.rows.empty(), errc::empty_dataset, "'", path.string(),
          "' contains no data rows");

  design_set set;
  set.columns = columns;
  set.designs.reserve(table.rows.size());
  std::vector<performance_vector> performance;
  performance.reserve(table.rows.size());

  for (std::size_t row = 0; row < table.rows.size(); ++row) {
    const auto& cells = table.rows[row];
    require(cells.size() == table.header.size(), errc::non_numeric_cell, "row ",
            row + 1, " has ", cells.size(), " cells, header has ",
            table.header.size());

    design_record rec;
    rec.values.reserve(value_cols.size());
    for (std::size_t c : value_cols) {
      bool ok = false;
      const double v = parse_double(cells[c], ok);
      require(ok, errc::non_numeric_cell, "row ", row + 1, ", column '",
              table.header[c], "': cannot parse '", cells[c], "'");
      rec.values.push_back(v);
    }
    rec.labels.reserve(label_cols.size());
    for (std::size_t k = 0; k < label_cols.size(); ++k) {
      const auto& cats = label_schemas[k]->categories;
      const std::string& cell = cells[label_cols[k]];
      auto it = std::find(cats.begin(), cats.end(), cell);
      require(it != cats.end(), errc::unknown_category, "row ", row + 1,
              ", column '", label_schemas[k]->name, "': unknown category '", cell,
              "'");
      rec.labels.push_back(static_cast<std::size_t>(it - cats.begin()));
    }
    set.designs.push_back(std::move(rec));

    performance_vector perf;
    perf.p.reserve(objective_cols.size());
    for (std::size_t c : objective_cols) {
      bool ok = false;
      const double v = parse_double(cells[c], ok);
      require(ok, errc::non_numeric_cell, "row ", row + 1, ", column '",
              table.header[c], "': cannot parse '", cells[c], "'");
      perf.p.push_back(v);
    }
    performance.push_back(std::move(perf));
  }

  if (!objective_columns.empty()) set.performance = std::move(performance);
  return set;
}

/// Applies the objective-direction transform: maximize entries pass through,
/// minimize_magnitude entries become 1/(|x| + epsilon). Every output is
/// strictly positive or NonPositiveAdjusted is raised.
inline performance_vector adjust_performance(const std::vector<double>& raw,
                                             const std::vector<objective_spec>& specs) {
  validate_objectives(specs);
  require(raw.size() == specs.size(), errc::dimension_mismatch, "raw vector has ",
          raw.size(), " entries for ", specs.size(), " objectives");
  performance_vector out;
  out.p.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    double adjusted;
    if (specs[i].direction == objective_direction::maximize) {
      adjusted = raw[i];
    } else {
      adjusted = 1.0 / (std::abs(raw[i]) + specs[i].epsilon);
    }
    require(adjusted > 0.0, errc::non_positive_adjusted, "objective '",
            specs[i].name, "' (index ", i, ") adjusts to ", adjusted);
    out.p.push_back(adjusted);
  }
  return out;
}

/// adjust_performance over a whole set; replaces attached raw values.
inline design_set adjust_set_performance(design_set set,
                                         const std::vector<objective_spec>& specs) {
  require(set.performance.has_value(), errc::no_performance,
          "set has no performance attached");
  for (auto& perf : *set.performance) perf = adjust_performance(perf.p, specs);
  return set;
}

namespace detail {

/// Inclusive linear interpolation between closest order statistics.
inline double percentile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = (q / 100.0) * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

inline std::vector<double> percentile_columns(
    const std::vector<performance_vector>& rows, double q) {
  const std::size_t n = rows.front().size();
  std::vector<double> out(n);
  std::vector<double> column(rows.size());
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      require(rows[i].size() == n, errc::dimension_mismatch,
              "performance vectors disagree in length");
      column[i] = rows[i][j];
    }
    std::sort(column.begin(), column.end());
    out[j] = percentile_sorted(column, q);
  }
  return out;
}

}  // namespace detail

inline std::vector<double> percentile_of(const design_set& set, double q) {
  require(q >= 0.0 && q <= 100.0, errc::invalid_parameter, "percentile q = ", q,
          " outside [0, 100]");
  require(set.performance.has_value() && !set.performance->empty(),
          errc::no_performance, "set has no performance attached");
  require(set.performance->size() >= 2, errc::too_few_designs,
          "percentiles need at least 2 designs, set has ", set.performance->size());
  return detail::percentile_columns(*set.performance, q);
}

/// Per-objective q-th percentile of the attached (adjusted) performance.
/// Intended for deriving performance targets, e.g. q = 75.
inline std::vector<double> percentile_targets(const design_set& set, double q) {
  return percentile_of(set, q);
}

/// Identical computation; the returned point is meant as the hypervolume
/// reference, e.g. q = 1.
inline std::vector<double> percentile_reference(const design_set& set, double q) {
  return percentile_of(set, q);
}

/// Per-column mean/std over the continuous columns, for opt-in z-scoring
/// inside encode_for_distance.
struct standardizer {
  std::vector<std::string> column_names;
  std::vector<double> mean;
  std::vector<double> stddev;
};

inline standardizer fit_standardizer(const design_set& set) {
  require(!set.designs.empty(), errc::empty_dataset, "cannot fit standardizer on empty set");
  standardizer st;
  for (const auto& col : set.columns)
    if (col.kind == column_kind::continuous) st.column_names.push_back(col.name);
  const std::size_t n = st.column_names.size();
  st.mean.assign(n, 0.0);
  st.stddev.assign(n, 0.0);
  const double m = static_cast<double>(set.designs.size());
  for (const auto& rec : set.designs)
    for (std::size_t j = 0; j < n; ++j) st.mean[j] += rec.values[j];
  for (double& v : st.mean) v /= m;
  for (const auto& rec : set.designs)
    for (std::size_t j = 0; j < n; ++j) {
      const double d = rec.values[j] - st.mean[j];
      st.stddev[j] += d * d;
    }
  for (double& v : st.stddev) v = std::sqrt(v / m);
  return st;
}

/// Flattens a record to a real vector for Euclidean distances: continuous
/// values first (z-scored when a standardizer is given; zero-variance
/// columns map to 0), then one-hot blocks per categorical column.
inline std::vector<double> encode_for_distance(const design_record& rec,
                                               const schema& columns,
                                               const standardizer* st = nullptr) {
  validate_record(rec, columns);
  if (st != nullptr) {
    std::vector<std::string> names;
    for (const auto& col : columns)
      if (col.kind == column_kind::continuous) names.push_back(col.name);
    require(st->column_names == names, errc::schema_mismatch,
            "standardizer was fit on a different schema");
  }
  std::vector<double> out;
  std::size_t width = rec.values.size();
  for (const auto& col : columns)
    if (col.kind == column_kind::categorical) width += col.categories.size();
  out.reserve(width);
  for (std::size_t j = 0; j < rec.values.size(); ++j) {
    if (st == nullptr) {
      out.push_back(rec.values[j]);
    } else if (st->stddev[j] == 0.0) {
      out.push_back(0.0);
    } else {
      out.push_back((rec.values[j] - st->mean[j]) / st->stddev[j]);
    }
  }
  std::size_t label_pos = 0;
  for (const auto& col : columns) {
    if (col.kind != column_kind::categorical) continue;
    const std::size_t hot = rec.labels[label_pos++];
    for (std::size_t c = 0; c < col.categories.size(); ++c)
      out.push_back(c == hot ? 1.0 : 0.0);
  }
  return out;
}

inline std::vector<std::vector<double>> encode_all(const design_set& set,
                                                   const standardizer* st = nullptr) {
  std::vector<std::vector<double>> out;
  out.reserve(set.designs.size());
  for (const auto& rec : set.designs)
    out.push_back(encode_for_distance(rec, set.columns, st));
  return out;
}

/// Writes a set in the same CSV layout ingest_csv reads. When adjusted
/// performance is attached and objective specs are given, raw objective
/// cells are reconstructed (minimize_magnitude inverts back to a magnitude).
inline void write_design_csv(const design_set& set, const std::filesystem::path& path,
                             const std::vector<objective_spec>* objectives = nullptr) {
  validate_set(set);
  const bool with_perf =
      objectives != nullptr && set.performance.has_value();
  std::vector<std::string> header;
  for (const auto& col : set.columns) header.push_back(col.name);
  if (with_perf)
    for (const auto& spec : *objectives) header.push_back(spec.name);

  std::vector<std::vector<std::string>> rows;
  rows.reserve(set.designs.size());
  for (std::size_t i = 0; i < set.designs.size(); ++i) {
    const auto& rec = set.designs[i];
    std::vector<std::string> cells;
    cells.reserve(header.size());
    std::size_t value_pos = 0, label_pos = 0;
    for (const auto& col : set.columns) {
      if (col.kind == column_kind::continuous) {
        cells.push_back(format_double(rec.values[value_pos++]));
      } else {
        cells.push_back(col.categories[rec.labels[label_pos++]]);
      }
    }
    if (with_perf) {
      const auto& perf = (*set.performance)[i];
      require(perf.size() == objectives->size(), errc::dimension_mismatch,
              "performance width ", perf.size(), " vs ", objectives->size(),
              " objectives");
      for (std::size_t j = 0; j < objectives->size(); ++j) {
        const auto& spec = (*objectives)[j];
        double raw = perf[j];
        if (spec.direction == objective_direction::minimize_magnitude)
          raw = 1.0 / perf[j] - spec.epsilon;
        cells.push_back(format_double(raw));
      }
    }
    rows.push_back(std::move(cells));
  }
  write_csv(path, header, rows);
}

}  // namespace dtai
