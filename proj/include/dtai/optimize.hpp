#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "dtai/csv.hpp"
#include "dtai/dataset.hpp"
#include "dtai/report.hpp"
#include "dtai/rng.hpp"
#include "dtai/score.hpp"
#include "dtai/types.hpp"

namespace dtai {

/// A differentiable test problem: box-bounded design vector in, strictly
/// positive performance vector out, with an analytic Jacobian.
class benchmark_problem {
 public:
  virtual ~benchmark_problem() = default;

  virtual std::size_t dim() const = 0;
  virtual std::size_t objectives() const = 0;
  virtual double lower_bound(std::size_t axis) const = 0;
  virtual double upper_bound(std::size_t axis) const = 0;

  virtual performance_vector evaluate(const std::vector<double>& x) const = 0;

  /// Row k is the gradient of objective k with respect to x.
  virtual std::vector<std::vector<double>> jacobian(
      const std::vector<double>& x) const = 0;
};

/// Each objective is a Gaussian bump around its own random center in
/// [0, 1]^d, floored at 0.1 so performance stays strictly positive:
/// p_k(x) = exp(-||x - c_k||^2) + 0.1.
class gaussian_peaks_problem final : public benchmark_problem {
 public:
  gaussian_peaks_problem(std::size_t dim, std::size_t objectives, rng_seed seed)
      : dim_(dim), centers_(objectives) {
    require(dim >= 1, errc::invalid_dimension, "problem needs dim >= 1");
    require(objectives >= 1, errc::invalid_dimension, "problem needs >= 1 objective");
    rng gen(seed);
    for (auto& center : centers_) {
      center.resize(dim_);
      for (double& c : center) c = gen.uniform();
    }
  }

  std::size_t dim() const override { return dim_; }
  std::size_t objectives() const override { return centers_.size(); }
  double lower_bound(std::size_t) const override { return 0.0; }
  double upper_bound(std::size_t) const override { return 1.0; }

  performance_vector evaluate(const std::vector<double>& x) const override {
    check_point(x);
    performance_vector out;
    out.p.reserve(centers_.size());
    for (const auto& center : centers_)
      out.p.push_back(std::exp(-sq_dist(x, center)) + 0.1);
    return out;
  }

  std::vector<std::vector<double>> jacobian(
      const std::vector<double>& x) const override {
    check_point(x);
    std::vector<std::vector<double>> rows(centers_.size(),
                                          std::vector<double>(dim_));
    for (std::size_t k = 0; k < centers_.size(); ++k) {
      const double bump = std::exp(-sq_dist(x, centers_[k]));
      for (std::size_t j = 0; j < dim_; ++j)
        rows[k][j] = -2.0 * (x[j] - centers_[k][j]) * bump;
    }
    return rows;
  }

  const std::vector<std::vector<double>>& centers() const { return centers_; }

 private:
  void check_point(const std::vector<double>& x) const {
    require(x.size() == dim_, errc::dimension_mismatch, "point has ", x.size(),
            " coordinates, problem expects ", dim_);
  }

  static double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      const double d = a[j] - b[j];
      acc += d * d;
    }
    return acc;
  }

  std::size_t dim_;
  std::vector<std::vector<double>> centers_;
};

struct optimizer_config {
  std::size_t population = 64;
  std::size_t max_iters = 500;
  double learning_rate = 0.1;
  /// Stop once mean index improvement over the trailing window drops below
  /// this; 0 disables early stopping.
  double tolerance = 1e-7;
  std::size_t window = 10;
  std::size_t max_backtracks = 20;
  rng_seed seed{2024};
};

inline void validate_optimizer_config(const optimizer_config& config) {
  require(config.population >= 1, errc::invalid_parameter, "population must be >= 1");
  require(config.max_iters >= 1, errc::invalid_parameter, "max_iters must be >= 1");
  require(config.learning_rate > 0.0, errc::invalid_parameter,
          "learning_rate must be > 0");
  require(config.tolerance >= 0.0, errc::invalid_parameter, "tolerance must be >= 0");
  require(config.window >= 1, errc::invalid_parameter, "window must be >= 1");
}

/// Population summary after one ascent step. Rates are fractions in [0, 1].
struct iteration_stats {
  std::size_t iteration = 0;
  double mean_dtai = 0.0;
  double mean_tsr = 0.0;
  double mean_mtr = 0.0;
};

/// Full record of a gradient ascent run: initial and final populations with
/// their performance, per-iteration population summaries (index 0 is the
/// initial population), and the per-member index series used to check the
/// monotone ascent guarantee.
struct optimization_trajectory {
  std::size_t dim = 0;
  std::size_t n_obj = 0;
  std::vector<double> lower;
  std::vector<double> upper;

  std::vector<std::vector<double>> initial_x;
  std::vector<performance_vector> initial_p;
  std::vector<std::vector<double>> final_x;
  std::vector<performance_vector> final_p;

  std::vector<iteration_stats> stats;
  std::vector<std::vector<double>> member_dtai;  ///< [iteration][member]
  std::size_t iterations_run = 0;
  bool converged = false;
};

namespace detail {

inline iteration_stats population_stats(std::size_t iteration,
                                        const std::vector<score_breakdown>& scores,
                                        const std::vector<performance_vector>& perf,
                                        const target_spec& targets) {
  iteration_stats out;
  out.iteration = iteration;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out.mean_dtai += scores[i].value;
    out.mean_tsr += target_success_rate(perf[i], targets);
    out.mean_mtr += minimum_target_ratio(perf[i], targets);
  }
  const double n = static_cast<double>(scores.size());
  out.mean_dtai /= n;
  out.mean_tsr /= n;
  out.mean_mtr /= n;
  return out;
}

}  // namespace detail

/// Projected gradient ascent of the achievement index over a population of
/// random starts. The chain rule turns the analytic index gradient in
/// performance space into a design space direction through the problem
/// Jacobian; steps are clipped to the box and halved until the index does
/// not decrease, so every member's index series is non-decreasing.
inline optimization_trajectory ascend_dtai(const benchmark_problem& problem,
                                           const target_spec& targets,
                                           const optimizer_config& config = {}) {
  validate_optimizer_config(config);
  validate_targets(targets);
  require(targets.size() == problem.objectives(), errc::dimension_mismatch,
          "target spec has ", targets.size(), " objectives, problem has ",
          problem.objectives());

  const std::size_t d = problem.dim();
  optimization_trajectory traj;
  traj.dim = d;
  traj.n_obj = problem.objectives();
  traj.lower.resize(d);
  traj.upper.resize(d);
  for (std::size_t j = 0; j < d; ++j) {
    traj.lower[j] = problem.lower_bound(j);
    traj.upper[j] = problem.upper_bound(j);
    require(traj.lower[j] < traj.upper[j], errc::invalid_parameter, "axis ", j,
            " has an empty bound interval");
  }

  rng gen(config.seed);
  std::vector<std::vector<double>> x(config.population, std::vector<double>(d));
  for (auto& member : x)
    for (std::size_t j = 0; j < d; ++j)
      member[j] = gen.uniform(traj.lower[j], traj.upper[j]);

  std::vector<performance_vector> perf(config.population);
  std::vector<score_breakdown> scores(config.population);
  for (std::size_t i = 0; i < config.population; ++i) {
    perf[i] = problem.evaluate(x[i]);
    scores[i] = score(perf[i], targets);
  }

  traj.initial_x = x;
  traj.initial_p = perf;
  traj.stats.push_back(detail::population_stats(0, scores, perf, targets));
  {
    std::vector<double> row(config.population);
    for (std::size_t i = 0; i < config.population; ++i) row[i] = scores[i].value;
    traj.member_dtai.push_back(std::move(row));
  }

  std::vector<double> direction(d);
  std::vector<double> candidate(d);
  for (std::size_t iter = 1; iter <= config.max_iters; ++iter) {
    for (std::size_t i = 0; i < config.population; ++i) {
      const auto jac = problem.jacobian(x[i]);
      for (std::size_t j = 0; j < d; ++j) {
        double g = 0.0;
        for (std::size_t k = 0; k < traj.n_obj; ++k)
          g += jac[k][j] * scores[i].grad_p[k];
        direction[j] = g;
      }

      double step = config.learning_rate;
      for (std::size_t attempt = 0; attempt <= config.max_backtracks; ++attempt) {
        for (std::size_t j = 0; j < d; ++j)
          candidate[j] = std::clamp(x[i][j] + step * direction[j], traj.lower[j],
                                    traj.upper[j]);
        performance_vector cp = problem.evaluate(candidate);
        score_breakdown cs = score(cp, targets);
        if (cs.value >= scores[i].value) {
          x[i] = candidate;
          perf[i] = std::move(cp);
          scores[i] = std::move(cs);
          break;
        }
        step *= 0.5;
      }
    }

    traj.stats.push_back(detail::population_stats(iter, scores, perf, targets));
    {
      std::vector<double> row(config.population);
      for (std::size_t i = 0; i < config.population; ++i) row[i] = scores[i].value;
      traj.member_dtai.push_back(std::move(row));
    }
    traj.iterations_run = iter;

    if (config.tolerance > 0.0 && iter >= config.window) {
      const double gain = traj.stats[iter].mean_dtai -
                          traj.stats[iter - config.window].mean_dtai;
      if (gain < config.tolerance) {
        traj.converged = true;
        break;
      }
    }
  }

  traj.final_x = std::move(x);
  traj.final_p = std::move(perf);
  return traj;
}

namespace detail {

inline schema axis_schema(std::size_t dim) {
  schema columns;
  columns.reserve(dim);
  for (std::size_t j = 0; j < dim; ++j)
    columns.push_back({"x" + std::to_string(j), column_kind::continuous, {}});
  return columns;
}

inline design_set population_set(const schema& columns,
                                 const std::vector<std::vector<double>>& points,
                                 const std::vector<performance_vector>* perf) {
  design_set set;
  set.columns = columns;
  set.designs.reserve(points.size());
  for (const auto& point : points) set.designs.push_back({point, {}});
  if (perf) set.performance = *perf;
  return set;
}

}  // namespace detail

/// Scores the final population like any generated set: the initial random
/// population plays the dataset role (novelty baseline and 1st percentile
/// hypervolume reference) and feasibility means staying inside the box.
inline evaluation_report evaluate_trajectory(const optimization_trajectory& traj,
                                             const target_spec& targets,
                                             const evaluate_options& options = {}) {
  require(!traj.final_x.empty(), errc::empty_input, "trajectory has no population");
  const schema columns = detail::axis_schema(traj.dim);

  design_set initial = detail::population_set(columns, traj.initial_x, &traj.initial_p);
  const std::vector<double> reference = percentile_reference(initial, 1.0);

  design_set final_set = detail::population_set(columns, traj.final_x, &traj.final_p);
  std::vector<bool> feasible(final_set.size(), false);
  for (std::size_t i = 0; i < final_set.size(); ++i) {
    bool inside = true;
    for (std::size_t j = 0; j < traj.dim; ++j) {
      const double v = traj.final_x[i][j];
      if (v < traj.lower[j] || v > traj.upper[j]) {
        inside = false;
        break;
      }
    }
    feasible[i] = inside;
  }
  final_set.feasible = std::move(feasible);

  return evaluate_set(final_set, targets, reference, initial, options);
}

inline void write_trajectory_csv(const optimization_trajectory& traj,
                                 const std::filesystem::path& path) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(traj.stats.size());
  for (const auto& stat : traj.stats)
    rows.push_back({std::to_string(stat.iteration), format_double(stat.mean_dtai),
                    format_double(stat.mean_tsr), format_double(stat.mean_mtr)});
  write_csv(path, {"iteration", "mean_dtai", "mean_tsr", "mean_mtr"}, rows);
}

}  // namespace dtai
