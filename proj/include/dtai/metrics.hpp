#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <thread>
#include <vector>

#include "dtai/dataset.hpp"
#include "dtai/rng.hpp"
#include "dtai/types.hpp"

namespace dtai {

enum class hv_method { exact, monte_carlo };
enum class hv_mode { automatic, exact, monte_carlo };

/// Exact computation is used for n <= 6 objectives and at most 300 points;
/// larger inputs fall back to Monte Carlo over the bounding box. Monte Carlo
/// always requires an explicit seed and reports a standard error.
struct hv_options {
  hv_mode mode = hv_mode::automatic;
  std::size_t mc_samples = 1'000'000;
  rng_seed seed;
  int threads = 1;
};

struct hypervolume_result {
  double value = 0.0;
  hv_method method = hv_method::exact;
  std::optional<double> std_error;  ///< Monte Carlo only
  std::size_t dropped = 0;          ///< points not strictly above the reference
};

namespace detail {

constexpr std::size_t hv_exact_max_dim = 6;
constexpr std::size_t hv_exact_max_points = 300;

using point = std::vector<double>;

inline bool dominates_eq(const point& a, const point& b) {
  for (std::size_t d = 0; d < a.size(); ++d)
    if (a[d] < b[d]) return false;
  return true;
}

/// Nondominated subset under maximization; keeps one copy of duplicates.
inline std::vector<point> nondominated(std::vector<point> pts) {
  const std::size_t n = pts.size();
  std::vector<bool> dominated(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n && !dominated[i]; ++j) {
      if (i == j) continue;
      if (dominates_eq(pts[j], pts[i])) {
        // Strictly dominated, or a duplicate we keep only once (j < i).
        dominated[i] = !dominates_eq(pts[i], pts[j]) || j < i;
      }
    }
  }
  std::vector<point> front;
  for (std::size_t i = 0; i < n; ++i)
    if (!dominated[i]) front.push_back(std::move(pts[i]));
  return front;
}

inline double inclusive_volume(const point& p) {
  double v = 1.0;
  for (double c : p) v *= c;
  return v;
}

/// Recursive objective-slicing hypervolume with the reference at the
/// origin: sort on the last objective, then sum each point's exclusive
/// contribution (its box minus the volume of the limited remainder).
inline double wfg_volume(std::vector<point> pts) {
  if (pts.empty()) return 0.0;
  const std::size_t dim = pts.front().size();
  if (dim == 1) {
    double best = 0.0;
    for (const auto& p : pts) best = std::max(best, p[0]);
    return best;
  }
  if (pts.size() == 1) return inclusive_volume(pts.front());
  if (dim == 2) {
    auto front = nondominated(std::move(pts));
    std::sort(front.begin(), front.end(),
              [](const point& a, const point& b) { return a[0] > b[0]; });
    double volume = 0.0;
    double prev_y = 0.0;
    for (const auto& p : front) {
      volume += p[0] * (p[1] - prev_y);
      prev_y = p[1];
    }
    return volume;
  }

  std::sort(pts.begin(), pts.end(),
            [dim](const point& a, const point& b) { return a[dim - 1] > b[dim - 1]; });
  double volume = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    std::vector<point> limited;
    limited.reserve(pts.size() - k - 1);
    for (std::size_t j = k + 1; j < pts.size(); ++j) {
      point q(dim);
      for (std::size_t d = 0; d < dim; ++d) q[d] = std::min(pts[k][d], pts[j][d]);
      limited.push_back(std::move(q));
    }
    volume += inclusive_volume(pts[k]) - wfg_volume(nondominated(std::move(limited)));
  }
  return volume;
}

struct mc_stratum_result {
  std::uint64_t hits = 0;
  std::uint64_t samples = 0;
};

inline mc_stratum_result mc_stratum(const std::vector<point>& pts, const point& box,
                                    std::size_t samples, rng_seed seed) {
  rng gen(seed);
  const std::size_t dim = box.size();
  point sample(dim);
  mc_stratum_result result;
  result.samples = samples;
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t d = 0; d < dim; ++d) sample[d] = gen.uniform() * box[d];
    for (const auto& p : pts) {
      bool covered = true;
      for (std::size_t d = 0; d < dim; ++d) {
        if (sample[d] >= p[d]) {
          covered = false;
          break;
        }
      }
      if (covered) {
        ++result.hits;
        break;
      }
    }
  }
  return result;
}

}  // namespace detail

/// Hypervolume of the union of axis-aligned boxes spanned by each point and
/// the reference (maximization). Points not strictly above the reference in
/// every coordinate are dropped and counted, not raised on.
inline hypervolume_result hypervolume(const std::vector<performance_vector>& points,
                                      const std::vector<double>& reference,
                                      const hv_options& options = {}) {
  const std::size_t dim = reference.size();
  require(dim >= 1, errc::dimension_mismatch, "reference point is empty");

  std::vector<detail::point> shifted;
  shifted.reserve(points.size());
  std::size_t dropped = 0;
  for (const auto& pv : points) {
    require(pv.size() == dim, errc::dimension_mismatch, "point has ", pv.size(),
            " coordinates, reference has ", dim);
    detail::point q(dim);
    bool keep = true;
    for (std::size_t d = 0; d < dim; ++d) {
      q[d] = pv[d] - reference[d];
      if (q[d] <= 0.0) keep = false;
    }
    if (keep) {
      shifted.push_back(std::move(q));
    } else {
      ++dropped;
    }
  }
  require(!shifted.empty(), errc::empty_front,
          "no point strictly dominates the reference (", dropped, " dropped)");

  bool exact = true;
  switch (options.mode) {
    case hv_mode::exact: exact = true; break;
    case hv_mode::monte_carlo: exact = false; break;
    case hv_mode::automatic:
      exact = dim <= detail::hv_exact_max_dim &&
              shifted.size() <= detail::hv_exact_max_points;
      break;
  }

  hypervolume_result result;
  result.dropped = dropped;
  if (exact) {
    result.method = hv_method::exact;
    result.value = detail::wfg_volume(detail::nondominated(std::move(shifted)));
    return result;
  }

  require(options.mc_samples > 0, errc::invalid_parameter,
          "mc_samples must be positive");
  detail::point box(dim, 0.0);
  for (const auto& p : shifted)
    for (std::size_t d = 0; d < dim; ++d) box[d] = std::max(box[d], p[d]);
  double box_volume = 1.0;
  for (double c : box) box_volume *= c;

  // Fixed-size strata with per-stratum seeds: the estimate is bitwise
  // identical for any thread count.
  constexpr std::size_t stratum_size = 1 << 16;
  const std::size_t n_strata = (options.mc_samples + stratum_size - 1) / stratum_size;
  std::vector<detail::mc_stratum_result> strata(n_strata);
  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const std::size_t count =
          std::min(stratum_size, options.mc_samples - i * stratum_size);
      strata[i] = detail::mc_stratum(shifted, box, count, mix_seed(options.seed, i));
    }
  };
  const int threads = std::max(1, options.threads);
  if (threads == 1 || n_strata == 1) {
    run_range(0, n_strata);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (n_strata + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const std::size_t begin = static_cast<std::size_t>(t) * chunk;
      if (begin >= n_strata) break;
      pool.emplace_back(run_range, begin, std::min(begin + chunk, n_strata));
    }
    for (auto& th : pool) th.join();
  }

  std::uint64_t hits = 0, samples = 0;
  for (const auto& s : strata) {
    hits += s.hits;
    samples += s.samples;
  }
  const double fraction = static_cast<double>(hits) / static_cast<double>(samples);
  result.method = hv_method::monte_carlo;
  result.value = box_volume * fraction;
  result.std_error = box_volume * std::sqrt(fraction * (1.0 - fraction) /
                                            static_cast<double>(samples));
  return result;
}

/// Mean Euclidean distance from each vector to the others:
/// s_i = (1/(m-1)) * sum_{j != i} ||v_i - v_j||. Larger means more diverse.
inline std::vector<double> diversity_scores(
    const std::vector<std::vector<double>>& vectors) {
  require(vectors.size() >= 2, errc::too_few_designs,
          "diversity needs at least 2 vectors, got ", vectors.size());
  const std::size_t dim = vectors.front().size();
  for (const auto& v : vectors)
    require(v.size() == dim, errc::dimension_mismatch, "vector length ", v.size(),
            " differs from ", dim);
  const std::size_t m = vectors.size();
  std::vector<double> sums(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      double sq = 0.0;
      for (std::size_t d = 0; d < dim; ++d) {
        const double diff = vectors[i][d] - vectors[j][d];
        sq += diff * diff;
      }
      const double dist = std::sqrt(sq);
      sums[i] += dist;
      sums[j] += dist;
    }
  }
  const double denom = static_cast<double>(m - 1);
  for (double& s : sums) s /= denom;
  return sums;
}

/// Distance from each generated vector to its nearest neighbor in the
/// original dataset: s_i = min_j ||y_i - x_j||.
inline std::vector<double> novelty_scores(
    const std::vector<std::vector<double>>& generated,
    const std::vector<std::vector<double>>& dataset) {
  require(!generated.empty(), errc::empty_input, "no generated vectors");
  require(!dataset.empty(), errc::empty_dataset, "no dataset vectors");
  const std::size_t dim = generated.front().size();
  for (const auto& v : generated)
    require(v.size() == dim, errc::dimension_mismatch, "generated vector length ",
            v.size(), " differs from ", dim);
  for (const auto& v : dataset)
    require(v.size() == dim, errc::dimension_mismatch, "dataset vector length ",
            v.size(), " differs from ", dim);
  std::vector<double> out;
  out.reserve(generated.size());
  for (const auto& y : generated) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& x : dataset) {
      double sq = 0.0;
      for (std::size_t d = 0; d < dim && sq < best; ++d) {
        const double diff = y[d] - x[d];
        sq += diff * diff;
      }
      best = std::min(best, sq);
    }
    out.push_back(std::sqrt(best));
  }
  return out;
}

/// Fraction of true flags.
inline double feasibility_rate(const std::vector<bool>& flags) {
  require(!flags.empty(), errc::empty_input, "feasibility_rate of empty list");
  std::size_t feasible = 0;
  for (bool f : flags)
    if (f) ++feasible;
  return static_cast<double>(feasible) / static_cast<double>(flags.size());
}

/// Unweighted fraction of targets met or exceeded; ties count as met.
inline double target_success_rate(const performance_vector& p,
                                  const target_spec& targets) {
  validate_targets(targets);
  require(p.size() == targets.size(), errc::dimension_mismatch, "performance has ",
          p.size(), " entries for ", targets.size(), " targets");
  std::size_t met = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    require(p[i] > 0.0, errc::non_positive_input, "performance ", i, " = ", p[i],
            " must be > 0");
    if (p[i] >= targets.t[i]) ++met;
  }
  return static_cast<double>(met) / static_cast<double>(p.size());
}

/// min_i(p_i / t_i): >= 1 iff every target is met.
inline double minimum_target_ratio(const performance_vector& p,
                                   const target_spec& targets) {
  validate_targets(targets);
  require(p.size() == targets.size(), errc::dimension_mismatch, "performance has ",
          p.size(), " entries for ", targets.size(), " targets");
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i) {
    require(p[i] > 0.0, errc::non_positive_input, "performance ", i, " = ", p[i],
            " must be > 0");
    worst = std::min(worst, p[i] / targets.t[i]);
  }
  return worst;
}

/// Gaussian kernel density estimate on a uniform grid.
struct kde_curve {
  std::vector<double> grid;
  std::vector<double> density;
  double bandwidth = 0.0;
};

/// Bandwidth by Silverman's rule, h = 0.9 * min(sigma, IQR/1.34) * m^(-1/5),
/// falling back to sigma alone when the IQR is zero. The grid spans
/// [min - 3h, max + 3h].
inline kde_curve kde(const std::vector<double>& samples, std::size_t grid_size = 256) {
  require(samples.size() >= 2, errc::degenerate_samples,
          "kde needs at least 2 samples, got ", samples.size());
  require(grid_size >= 2, errc::invalid_parameter, "kde grid_size must be >= 2");
  const double m = static_cast<double>(samples.size());
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= m;
  double var = 0.0;
  for (double x : samples) var += (x - mean) * (x - mean);
  var /= (m - 1.0);
  const double sigma = std::sqrt(var);
  require(sigma > 0.0, errc::degenerate_samples, "kde samples are constant");

  std::vector<double> sorted(samples);
  std::sort(sorted.begin(), sorted.end());
  const double iqr = detail::percentile_sorted(sorted, 75.0) -
                     detail::percentile_sorted(sorted, 25.0);
  double spread = sigma;
  if (iqr > 0.0) spread = std::min(sigma, iqr / 1.34);
  const double h = 0.9 * spread * std::pow(m, -0.2);

  kde_curve curve;
  curve.bandwidth = h;
  const double lo = sorted.front() - 3.0 * h;
  const double hi = sorted.back() + 3.0 * h;
  const double step = (hi - lo) / static_cast<double>(grid_size - 1);
  curve.grid.resize(grid_size);
  curve.density.resize(grid_size);
  constexpr double inv_sqrt_2pi = 0.3989422804014326779;
  for (std::size_t g = 0; g < grid_size; ++g) {
    const double x = lo + static_cast<double>(g) * step;
    curve.grid[g] = x;
    double acc = 0.0;
    for (double s : sorted) {
      const double z = (x - s) / h;
      acc += std::exp(-0.5 * z * z);
    }
    curve.density[g] = acc * inv_sqrt_2pi / (m * h);
  }
  return curve;
}

/// Trapezoidal integral of a curve; the density should integrate to ~1.
inline double kde_integral(const kde_curve& curve) {
  double total = 0.0;
  for (std::size_t g = 0; g + 1 < curve.grid.size(); ++g) {
    total += 0.5 * (curve.density[g] + curve.density[g + 1]) *
             (curve.grid[g + 1] - curve.grid[g]);
  }
  return total;
}

}  // namespace dtai
