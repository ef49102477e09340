#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "dtai/rng.hpp"
#include "dtai/types.hpp"

namespace dtai {

/// Uniform sampling from the dataset with replacement; attached performance
/// (and feasibility flags) are copied alongside each draw.
inline design_set sample_dataset(const design_set& dataset, std::size_t count,
                                 rng_seed seed) {
  require(!dataset.designs.empty(), errc::empty_dataset, "cannot sample an empty dataset");
  require(count > 0, errc::invalid_parameter, "sample count must be positive");
  rng gen(seed);
  design_set out;
  out.columns = dataset.columns;
  out.designs.reserve(count);
  std::vector<performance_vector> perf;
  std::vector<bool> flags;
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t i = gen.index(dataset.designs.size());
    out.designs.push_back(dataset.designs[i]);
    if (dataset.performance) perf.push_back((*dataset.performance)[i]);
    if (dataset.feasible) flags.push_back((*dataset.feasible)[i]);
  }
  if (dataset.performance) out.performance = std::move(perf);
  if (dataset.feasible) out.feasible = std::move(flags);
  return out;
}

/// Random convex blends of dataset pairs: gamma ~ U[0,1], continuous columns
/// interpolate, categorical columns take the nearer parent's label
/// (gamma >= 0.5 picks the first). Performance is not attached; interpolants
/// need re-evaluation.
inline design_set interpolate(const design_set& dataset, std::size_t count,
                              rng_seed seed) {
  require(dataset.designs.size() >= 2, errc::too_few_designs,
          "interpolation needs at least 2 designs, dataset has ",
          dataset.designs.size());
  require(count > 0, errc::invalid_parameter, "interpolation count must be positive");
  rng gen(seed);
  design_set out;
  out.columns = dataset.columns;
  out.designs.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const auto& d1 = dataset.designs[gen.index(dataset.designs.size())];
    const auto& d2 = dataset.designs[gen.index(dataset.designs.size())];
    const double gamma = gen.uniform();
    design_record rec;
    rec.values.reserve(d1.values.size());
    for (std::size_t j = 0; j < d1.values.size(); ++j)
      rec.values.push_back(gamma * d1.values[j] + (1.0 - gamma) * d2.values[j]);
    rec.labels = gamma >= 0.5 ? d1.labels : d2.labels;
    out.designs.push_back(std::move(rec));
  }
  return out;
}

struct minmax_bounds {
  std::vector<double> min;
  std::vector<double> max;
};

/// Per-objective (p - min) / (max - min) over the attached performance.
/// A constant objective has no usable range and raises.
inline std::pair<std::vector<std::vector<double>>, minmax_bounds> normalize_minmax(
    const design_set& dataset) {
  require(dataset.performance.has_value() && !dataset.performance->empty(),
          errc::no_performance, "set has no performance attached");
  const auto& perf = *dataset.performance;
  const std::size_t n = perf.front().size();
  minmax_bounds bounds;
  bounds.min.assign(n, std::numeric_limits<double>::infinity());
  bounds.max.assign(n, -std::numeric_limits<double>::infinity());
  for (const auto& pv : perf) {
    require(pv.size() == n, errc::dimension_mismatch,
            "performance vectors disagree in length");
    for (std::size_t j = 0; j < n; ++j) {
      bounds.min[j] = std::min(bounds.min[j], pv[j]);
      bounds.max[j] = std::max(bounds.max[j], pv[j]);
    }
  }
  for (std::size_t j = 0; j < n; ++j)
    require(bounds.max[j] > bounds.min[j], errc::constant_objective, "objective ", j,
            " is constant at ", bounds.min[j]);
  std::vector<std::vector<double>> normalized;
  normalized.reserve(perf.size());
  for (const auto& pv : perf) {
    std::vector<double> row(n);
    for (std::size_t j = 0; j < n; ++j)
      row[j] = (pv[j] - bounds.min[j]) / (bounds.max[j] - bounds.min[j]);
    normalized.push_back(std::move(row));
  }
  return {std::move(normalized), std::move(bounds)};
}

/// Normalizes one later vector against stored bounds; values outside the
/// fitted range clamp to [0, 1].
inline std::vector<double> normalize_with(const std::vector<double>& p,
                                          const minmax_bounds& bounds) {
  require(p.size() == bounds.min.size(), errc::dimension_mismatch, "vector has ",
          p.size(), " entries, bounds have ", bounds.min.size());
  std::vector<double> out(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double z = (p[j] - bounds.min[j]) / (bounds.max[j] - bounds.min[j]);
    out[j] = std::clamp(z, 0.0, 1.0);
  }
  return out;
}

/// Aggregate score with weights drawn uniformly from the probability
/// simplex (normalized unit-exponential draws): returns sum(w * p). Inputs
/// must already be min-max normalized to [0, 1].
inline double random_weight_score(const std::vector<double>& p_normalized,
                                  rng_seed seed) {
  require(!p_normalized.empty(), errc::empty_input, "empty performance vector");
  for (std::size_t i = 0; i < p_normalized.size(); ++i) {
    require(p_normalized[i] >= -1e-9 && p_normalized[i] <= 1.0 + 1e-9,
            errc::out_of_range, "entry ", i, " = ", p_normalized[i],
            " outside [0, 1]");
  }
  rng gen(seed);
  std::vector<double> w(p_normalized.size());
  double total = 0.0;
  for (double& wi : w) {
    wi = gen.exponential();
    total += wi;
  }
  double score = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i)
    score += (w[i] / total) * p_normalized[i];
  return score;
}

}  // namespace dtai
