#pragma once

#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "dtai/error.hpp"

namespace dtai {

enum class column_kind { continuous, categorical };

/// One column of a tabular design parameterization. Categorical columns
/// carry an ordered category list; continuous columns carry none.
struct column_schema {
  std::string name;
  column_kind kind = column_kind::continuous;
  std::vector<std::string> categories;
};

using schema = std::vector<column_schema>;

inline void validate_schema(const schema& columns) {
  std::unordered_set<std::string> seen;
  for (const auto& col : columns) {
    require(!col.name.empty(), errc::invalid_parameter, "schema column with empty name");
    require(seen.insert(col.name).second, errc::invalid_parameter,
            "duplicate schema column '", col.name, "'");
    if (col.kind == column_kind::categorical) {
      require(!col.categories.empty(), errc::invalid_parameter,
              "categorical column '", col.name, "' declares no categories");
    } else {
      require(col.categories.empty(), errc::invalid_parameter,
              "continuous column '", col.name, "' must not declare categories");
    }
  }
}

inline std::size_t continuous_count(const schema& columns) {
  std::size_t n = 0;
  for (const auto& col : columns)
    if (col.kind == column_kind::continuous) ++n;
  return n;
}

inline std::size_t categorical_count(const schema& columns) {
  return columns.size() - continuous_count(columns);
}

inline bool schemas_equal(const schema& a, const schema& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].name != b[i].name || a[i].kind != b[i].kind ||
        a[i].categories != b[i].categories)
      return false;
  }
  return true;
}

/// One parametric design: continuous values in schema order, then category
/// indices for the categorical columns in schema order.
struct design_record {
  std::vector<double> values;
  std::vector<std::size_t> labels;
};

inline void validate_record(const design_record& rec, const schema& columns) {
  require(rec.values.size() == continuous_count(columns), errc::schema_mismatch,
          "record has ", rec.values.size(), " continuous values, schema expects ",
          continuous_count(columns));
  require(rec.labels.size() == categorical_count(columns), errc::schema_mismatch,
          "record has ", rec.labels.size(), " labels, schema expects ",
          categorical_count(columns));
  std::size_t label_pos = 0;
  for (const auto& col : columns) {
    if (col.kind != column_kind::categorical) continue;
    require(rec.labels[label_pos] < col.categories.size(), errc::schema_mismatch,
            "label index ", rec.labels[label_pos], " out of range for column '",
            col.name, "'");
    ++label_pos;
  }
}

enum class objective_direction { maximize, minimize_magnitude };

/// How a raw objective column becomes an adjusted, strictly-positive,
/// maximized performance value. minimize_magnitude maps x to 1/(|x|+epsilon).
struct objective_spec {
  std::string name;
  objective_direction direction = objective_direction::maximize;
  double epsilon = 1e-9;
};

inline void validate_objectives(const std::vector<objective_spec>& specs) {
  require(!specs.empty(), errc::invalid_parameter, "objective list is empty");
  std::unordered_set<std::string> seen;
  for (const auto& spec : specs) {
    require(!spec.name.empty(), errc::invalid_parameter, "objective with empty name");
    require(seen.insert(spec.name).second, errc::invalid_parameter,
            "duplicate objective '", spec.name, "'");
    require(spec.epsilon > 0.0, errc::invalid_parameter, "objective '", spec.name,
            "' needs epsilon > 0");
  }
}

/// Vector of per-objective performance values, maximization convention.
/// Values straight from ingestion are raw; adjust_performance() makes them
/// strictly positive.
struct performance_vector {
  std::vector<double> p;

  std::size_t size() const noexcept { return p.size(); }
  double operator[](std::size_t i) const { return p[i]; }
};

/// Per-objective target t, importance alpha, and post-target decay beta.
struct target_spec {
  std::vector<double> t;
  std::vector<double> alpha;
  std::vector<double> beta;

  std::size_t size() const noexcept { return t.size(); }
};

/// Targets with alpha = 1 and a common beta everywhere (beta defaults to 4,
/// the midpoint of the recommended 3-5 band).
inline target_spec uniform_targets(std::vector<double> t, double alpha = 1.0,
                                   double beta = 4.0) {
  target_spec spec;
  spec.alpha.assign(t.size(), alpha);
  spec.beta.assign(t.size(), beta);
  spec.t = std::move(t);
  return spec;
}

inline void validate_targets(const target_spec& spec) {
  require(!spec.t.empty(), errc::invalid_parameter, "target spec is empty");
  require(spec.alpha.size() == spec.t.size() && spec.beta.size() == spec.t.size(),
          errc::dimension_mismatch, "target spec vectors disagree: t has ",
          spec.t.size(), ", alpha has ", spec.alpha.size(), ", beta has ",
          spec.beta.size());
  for (std::size_t i = 0; i < spec.t.size(); ++i) {
    require(spec.t[i] > 0.0, errc::non_positive_input, "target ", i, " must be > 0");
    require(spec.alpha[i] > 0.0, errc::invalid_parameter, "alpha ", i, " must be > 0");
    require(spec.beta[i] > 0.0, errc::invalid_parameter, "beta ", i, " must be > 0");
  }
}

/// A collection of designs with optional attached performance and
/// feasibility flags. When present the optional lists hold exactly one
/// entry per design.
struct design_set {
  schema columns;
  std::vector<design_record> designs;
  std::optional<std::vector<performance_vector>> performance;
  std::optional<std::vector<bool>> feasible;

  std::size_t size() const noexcept { return designs.size(); }
};

inline void validate_set(const design_set& set) {
  validate_schema(set.columns);
  for (const auto& rec : set.designs) validate_record(rec, set.columns);
  if (set.performance) {
    require(set.performance->size() == set.designs.size(), errc::dimension_mismatch,
            "performance list has ", set.performance->size(), " entries for ",
            set.designs.size(), " designs");
  }
  if (set.feasible) {
    require(set.feasible->size() == set.designs.size(), errc::dimension_mismatch,
            "feasibility list has ", set.feasible->size(), " entries for ",
            set.designs.size(), " designs");
  }
}

}  // namespace dtai
