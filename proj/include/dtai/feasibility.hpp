#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "dtai/types.hpp"

namespace dtai {

/// Declarative feasibility checks over continuous columns. These stand in
/// for a dataset's known-defect list (negative lengths, impossible
/// triangles, ...) so any tabular dataset can express its rules in config.
struct feasibility_rule {
  enum class rule_kind {
    non_negative,        ///< column >= 0
    lower_bound,         ///< column >= bound
    upper_bound,         ///< column <= bound
    linear_inequality,   ///< sum(coeffs * columns) <= rhs
    triangle_inequality  ///< a, b, c form a strict triangle
  };

  rule_kind kind = rule_kind::non_negative;
  std::string label;
  std::string column;                    // non_negative / lower_bound / upper_bound
  double bound = 0.0;                    // lower_bound / upper_bound
  std::map<std::string, double> coeffs;  // linear_inequality
  double rhs = 0.0;                      // linear_inequality
  std::string a, b, c;                   // triangle_inequality
};

inline feasibility_rule non_negative_rule(std::string column, std::string label) {
  feasibility_rule r;
  r.kind = feasibility_rule::rule_kind::non_negative;
  r.column = std::move(column);
  r.label = std::move(label);
  return r;
}

inline feasibility_rule lower_bound_rule(std::string column, double bound,
                                         std::string label) {
  feasibility_rule r;
  r.kind = feasibility_rule::rule_kind::lower_bound;
  r.column = std::move(column);
  r.bound = bound;
  r.label = std::move(label);
  return r;
}

inline feasibility_rule upper_bound_rule(std::string column, double bound,
                                         std::string label) {
  feasibility_rule r;
  r.kind = feasibility_rule::rule_kind::upper_bound;
  r.column = std::move(column);
  r.bound = bound;
  r.label = std::move(label);
  return r;
}

inline feasibility_rule linear_inequality_rule(std::map<std::string, double> coeffs,
                                               double rhs, std::string label) {
  feasibility_rule r;
  r.kind = feasibility_rule::rule_kind::linear_inequality;
  r.coeffs = std::move(coeffs);
  r.rhs = rhs;
  r.label = std::move(label);
  return r;
}

inline feasibility_rule triangle_rule(std::string a, std::string b, std::string c,
                                      std::string label) {
  feasibility_rule r;
  r.kind = feasibility_rule::rule_kind::triangle_inequality;
  r.a = std::move(a);
  r.b = std::move(b);
  r.c = std::move(c);
  r.label = std::move(label);
  return r;
}

namespace detail {

/// Maps column name -> index into design_record::values. Continuous only.
inline std::unordered_map<std::string, std::size_t> continuous_index(
    const schema& columns) {
  std::unordered_map<std::string, std::size_t> index;
  std::size_t pos = 0;
  for (const auto& col : columns)
    if (col.kind == column_kind::continuous) index.emplace(col.name, pos++);
  return index;
}

inline std::size_t resolve_column(
    const std::unordered_map<std::string, std::size_t>& index,
    const std::string& name, const std::string& label) {
  auto it = index.find(name);
  require(it != index.end(), errc::unknown_column, "rule '", label,
          "' references unknown or non-continuous column '", name, "'");
  return it->second;
}

}  // namespace detail

/// Evaluates every rule; returns the verdict plus the labels of all failing
/// rules, sorted by label so the report is order-independent.
inline std::pair<bool, std::vector<std::string>> check(
    const design_record& design, const schema& columns,
    const std::vector<feasibility_rule>& rules) {
  validate_record(design, columns);
  const auto index = detail::continuous_index(columns);
  std::vector<std::string> violated;
  for (const auto& rule : rules) {
    bool ok = true;
    switch (rule.kind) {
      case feasibility_rule::rule_kind::non_negative: {
        const double v = design.values[detail::resolve_column(index, rule.column, rule.label)];
        ok = v >= 0.0;
        break;
      }
      case feasibility_rule::rule_kind::lower_bound: {
        const double v = design.values[detail::resolve_column(index, rule.column, rule.label)];
        ok = v >= rule.bound;
        break;
      }
      case feasibility_rule::rule_kind::upper_bound: {
        const double v = design.values[detail::resolve_column(index, rule.column, rule.label)];
        ok = v <= rule.bound;
        break;
      }
      case feasibility_rule::rule_kind::linear_inequality: {
        double acc = 0.0;
        for (const auto& [name, coeff] : rule.coeffs)
          acc += coeff * design.values[detail::resolve_column(index, name, rule.label)];
        ok = acc <= rule.rhs;
        break;
      }
      case feasibility_rule::rule_kind::triangle_inequality: {
        require(rule.a != rule.b && rule.b != rule.c && rule.a != rule.c,
                errc::invalid_parameter, "rule '", rule.label,
                "' must reference three distinct columns");
        const double a = design.values[detail::resolve_column(index, rule.a, rule.label)];
        const double b = design.values[detail::resolve_column(index, rule.b, rule.label)];
        const double c = design.values[detail::resolve_column(index, rule.c, rule.label)];
        // Strict: a degenerate (zero-area) triangle is infeasible.
        ok = a < b + c && b < a + c && c < a + b;
        break;
      }
    }
    if (!ok) violated.push_back(rule.label);
  }
  std::sort(violated.begin(), violated.end());
  return {violated.empty(), std::move(violated)};
}

/// Returns the set with feasibility flags populated. Column resolution for
/// every rule happens before any flag is written, so an UnknownColumn error
/// cannot leave a partial result.
inline design_set flag_set(design_set set, const std::vector<feasibility_rule>& rules) {
  const auto index = detail::continuous_index(set.columns);
  for (const auto& rule : rules) {
    switch (rule.kind) {
      case feasibility_rule::rule_kind::non_negative:
      case feasibility_rule::rule_kind::lower_bound:
      case feasibility_rule::rule_kind::upper_bound:
        detail::resolve_column(index, rule.column, rule.label);
        break;
      case feasibility_rule::rule_kind::linear_inequality:
        for (const auto& [name, coeff] : rule.coeffs)
          detail::resolve_column(index, name, rule.label);
        break;
      case feasibility_rule::rule_kind::triangle_inequality:
        detail::resolve_column(index, rule.a, rule.label);
        detail::resolve_column(index, rule.b, rule.label);
        detail::resolve_column(index, rule.c, rule.label);
        break;
    }
  }
  std::vector<bool> flags;
  flags.reserve(set.designs.size());
  for (const auto& rec : set.designs)
    flags.push_back(check(rec, set.columns, rules).first);
  set.feasible = std::move(flags);
  return set;
}

}  // namespace dtai
