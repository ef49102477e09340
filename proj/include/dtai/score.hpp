#pragma once

#include <cmath>
#include <vector>

#include "dtai/types.hpp"

namespace dtai {

/// Shape of the scoring branch below the target (r <= 1).
///
/// `penalty` is the default: s = alpha * (r - 1), a negative penalty that
/// rises linearly to 0 as performance reaches the target. This keeps the
/// aggregate index inside [0, 1) and the derivative continuous at r = 1.
///
/// `inverted` flips that branch to s = alpha * (1 - r). It rewards moving
/// *away* from the target, pushes the aggregate outside [0, 1], and exists
/// only so the breakage is demonstrable in tests. Never use it to score.
enum class below_target_form { penalty, inverted };

/// r_i = p_i / t_i elementwise. Both sides must be strictly positive.
inline std::vector<double> target_ratios(const performance_vector& p,
                                         const target_spec& targets) {
  validate_targets(targets);
  require(p.size() == targets.size(), errc::dimension_mismatch,
          "performance has ", p.size(), " entries for ", targets.size(),
          " targets");
  std::vector<double> r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    require(p[i] > 0.0, errc::non_positive_input, "performance ", i, " = ", p[i],
            " must be > 0");
    r[i] = p[i] / targets.t[i];
  }
  return r;
}

/// Per-objective target achievement score:
///   s = alpha * (r - 1)                      for r <= 1
///   s = (alpha / beta) * (1 - e^{beta(1-r)}) for r >  1
/// Continuous at r = 1 with continuous derivative (both branches give alpha).
/// For r > 1 the exponent beta*(1-r) is negative, so no overflow guard is
/// needed on that branch.
inline double objective_score(double r, double alpha, double beta,
                              below_target_form form = below_target_form::penalty) {
  require(alpha > 0.0 && beta > 0.0, errc::invalid_parameter,
          "objective_score needs alpha > 0 and beta > 0");
  require(r >= 0.0, errc::non_positive_input, "ratio r = ", r, " must be >= 0");
  if (r <= 1.0) {
    const double slope = form == below_target_form::penalty ? (r - 1.0) : (1.0 - r);
    return alpha * slope;
  }
  return (alpha / beta) * (1.0 - std::exp(beta * (1.0 - r)));
}

/// ds/dr of objective_score. At exactly r = 1 both one-sided derivatives of
/// the penalty form equal alpha, so alpha is returned without a tie-break.
inline double objective_score_derivative(
    double r, double alpha, double beta,
    below_target_form form = below_target_form::penalty) {
  require(alpha > 0.0 && beta > 0.0, errc::invalid_parameter,
          "objective_score_derivative needs alpha > 0 and beta > 0");
  if (r <= 1.0) return form == below_target_form::penalty ? alpha : -alpha;
  return alpha * std::exp(beta * (1.0 - r));
}

/// Full evaluation of the design target achievement index at one point:
/// ratios, per-objective scores, theoretical bounds, the index itself, and
/// the analytic gradient with respect to the performance values.
struct score_breakdown {
  std::vector<double> r;
  std::vector<double> s;
  double s_min = 0.0;  ///< -sum(alpha): every ratio at 0
  double s_max = 0.0;  ///< sum(alpha/beta): every ratio at +inf
  /// (sum(s) - s_min) / (s_max - s_min). Strictly below 1 in exact
  /// arithmetic; rounds to exactly 1 once every e^{beta(1-r)} term is too
  /// small to matter next to 1.
  double value = 0.0;
  std::vector<double> grad_p;
};

inline score_breakdown score(const performance_vector& p, const target_spec& targets,
                             below_target_form form = below_target_form::penalty) {
  score_breakdown out;
  out.r = target_ratios(p, targets);
  const std::size_t n = out.r.size();
  out.s.resize(n);
  out.grad_p.resize(n);
  double sum_s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out.s[i] = objective_score(out.r[i], targets.alpha[i], targets.beta[i], form);
    sum_s += out.s[i];
    out.s_min -= targets.alpha[i];
    out.s_max += targets.alpha[i] / targets.beta[i];
  }
  const double span = out.s_max - out.s_min;
  out.value = (sum_s - out.s_min) / span;
  for (std::size_t i = 0; i < n; ++i) {
    const double ds_dr =
        objective_score_derivative(out.r[i], targets.alpha[i], targets.beta[i], form);
    out.grad_p[i] = ds_dr / (targets.t[i] * span);
  }
  return out;
}

/// Elementwise score() over a set's attached performance; order preserved.
inline std::vector<score_breakdown> score_batch(
    const design_set& set, const target_spec& targets,
    below_target_form form = below_target_form::penalty) {
  require(set.performance.has_value() && !set.performance->empty(),
          errc::no_performance, "set has no performance attached");
  std::vector<score_breakdown> out;
  out.reserve(set.performance->size());
  for (const auto& perf : *set.performance) out.push_back(score(perf, targets, form));
  return out;
}

}  // namespace dtai
