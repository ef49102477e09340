// Acceptance gate for the shipped library and CLI. Each criterion prints
// exactly one pass/fail line; the process exit code is the failure count.
// Tolerances are part of the contract and are pinned next to each check.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "dtai/dtai.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

#ifndef DTAI_CLI_PATH
#error "DTAI_CLI_PATH must point at the built CLI binary"
#endif

namespace {

struct criterion_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <typename... Parts>
void expect(bool ok, Parts&&... parts) {
  if (ok) return;
  std::ostringstream msg;
  (msg << ... << parts);
  throw criterion_failure(msg.str());
}

bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

// 1. At-target, single-objective, and limit values of the index match the
//    closed forms: value = sum(alpha) / (sum(alpha) + sum(alpha/beta)) when
//    every ratio is 1 (tol 1e-12), 0.5 for n=1 alpha=beta=1, and the r -> 0
//    and r -> inf limits reach 0 and 1 within 1e-6.
void criterion_closed_form() {
  dtai::rng gen(dtai::rng_seed{101});
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(gen.uniform(0.0, 7.99));
    dtai::target_spec spec;
    double sum_alpha = 0.0, sum_ab = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      spec.t.push_back(gen.uniform(0.2, 20.0));
      spec.alpha.push_back(gen.uniform(0.3, 5.0));
      spec.beta.push_back(gen.uniform(0.8, 9.0));
      sum_alpha += spec.alpha[i];
      sum_ab += spec.alpha[i] / spec.beta[i];
    }
    const auto at_target = dtai::score(dtai::performance_vector{spec.t}, spec);
    const double want = sum_alpha / (sum_alpha + sum_ab);
    expect(std::abs(at_target.value - want) <= 1e-12, "at-target value ",
           at_target.value, " != ", want, " (trial ", trial, ")");
  }

  const auto single = dtai::score(dtai::performance_vector{{3.0}},
                                  dtai::uniform_targets({3.0}, 1.0, 1.0));
  expect(std::abs(single.value - 0.5) <= 1e-12, "n=1 alpha=beta=1 at target gives ",
         single.value, ", want 0.5");

  const auto targets = dtai::uniform_targets({2.0, 0.5, 7.0});
  dtai::performance_vector lo, hi;
  for (double t : targets.t) {
    lo.p.push_back(1e-7 * t);
    hi.p.push_back(60.0 * t);
  }
  const double at_zero = dtai::score(lo, targets).value;
  const double at_inf = dtai::score(hi, targets).value;
  expect(std::abs(at_zero - 0.0) <= 1e-6, "r->0 limit gives ", at_zero);
  expect(std::abs(at_inf - 1.0) <= 1e-6, "r->inf limit gives ", at_inf);
}

// 2. On 1000 random (p, t, alpha, beta) tuples with every |r_i - 1| > 1e-3
//    the analytic gradient matches central differences to relative error
//    1e-5; at r = 1 both one-sided quotients land on alpha/(t * span)
//    within 1e-4.
void criterion_gradient() {
  dtai::rng gen(dtai::rng_seed{202});
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(gen.uniform(0.0, 5.99));
    dtai::target_spec spec;
    dtai::performance_vector p;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = gen.uniform(0.5, 10.0);
      const double beta = gen.uniform(1.0, 8.0);
      spec.t.push_back(t);
      spec.alpha.push_back(gen.uniform(0.5, 5.0));
      spec.beta.push_back(beta);
      // Keep beta*(r-1) <= 5 so the gradient stays far above the noise floor
      // of the finite difference itself.
      double r = 0.0;
      do {
        r = gen.uniform(0.05, 1.0 + 5.0 / beta);
      } while (std::abs(r - 1.0) <= 1e-3);
      p.p.push_back(r * t);
    }
    const auto full = dtai::score(p, spec);
    for (std::size_t i = 0; i < n; ++i) {
      const double h = 1e-6 * spec.t[i];
      dtai::performance_vector up = p, down = p;
      up.p[i] += h;
      down.p[i] -= h;
      const double fd =
          (dtai::score(up, spec).value - dtai::score(down, spec).value) / (2.0 * h);
      const double rel = std::abs(full.grad_p[i] - fd) / std::abs(fd);
      expect(rel <= 1e-5, "gradient mismatch at trial ", trial, " coord ", i,
             ": analytic ", full.grad_p[i], " vs fd ", fd, " (rel ", rel, ")");
    }
  }

  for (int trial = 0; trial < 10; ++trial) {
    dtai::target_spec spec;
    dtai::performance_vector p;
    for (std::size_t i = 0; i < 3; ++i) {
      spec.t.push_back(gen.uniform(0.5, 10.0));
      spec.alpha.push_back(gen.uniform(0.5, 5.0));
      spec.beta.push_back(gen.uniform(1.0, 8.0));
      p.p.push_back(spec.t[i] * gen.uniform(1.1, 2.0));
    }
    p.p[0] = spec.t[0];  // exactly on target
    const auto full = dtai::score(p, spec);
    const double span = full.s_max - full.s_min;
    const double want = spec.alpha[0] / (spec.t[0] * span);
    const double h = 1e-6 * spec.t[0];
    dtai::performance_vector up = p, down = p;
    up.p[0] += h;
    down.p[0] -= h;
    const double forward = (dtai::score(up, spec).value - full.value) / h;
    const double backward = (full.value - dtai::score(down, spec).value) / h;
    expect(std::abs(forward - want) / want <= 1e-4, "forward quotient ", forward,
           " vs ", want);
    expect(std::abs(backward - want) / want <= 1e-4, "backward quotient ", backward,
           " vs ", want);
    expect(full.grad_p[0] == want, "analytic gradient at r=1 is ", full.grad_p[0],
           ", want exactly ", want);
  }
}

// 3. Exact hypervolume matches inclusion-exclusion to 1e-12 on 200 random
//    fronts (2-4 objectives, <= 6 points); Monte Carlo with 1e6 samples
//    lands within 3 reported standard errors of exact on >= 195 of 200
//    twenty-point 3-D fronts.
void criterion_hypervolume() {
  dtai::rng gen(dtai::rng_seed{303});
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t dim = 2 + static_cast<std::size_t>(gen.uniform(0.0, 2.99));
    const std::size_t count = 1 + static_cast<std::size_t>(gen.uniform(0.0, 5.99));
    std::vector<double> reference(dim);
    for (double& c : reference) c = gen.uniform(0.0, 1.0);
    std::vector<dtai::performance_vector> points(count);
    std::vector<std::vector<double>> shifted(count, std::vector<double>(dim));
    for (std::size_t i = 0; i < count; ++i) {
      points[i].p.resize(dim);
      for (std::size_t d = 0; d < dim; ++d) {
        shifted[i][d] = gen.uniform(0.05, 2.0);
        points[i].p[d] = reference[d] + shifted[i][d];
      }
    }
    dtai::hv_options opts;
    opts.mode = dtai::hv_mode::exact;
    const double got = dtai::hypervolume(points, reference, opts).value;
    const double want = oracle::hypervolume_ie(shifted);
    expect(close(got, want, 1e-12), "exact hypervolume ", got,
           " != inclusion-exclusion ", want, " (trial ", trial, ")");
  }

  int within = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t dim = 3;
    std::vector<double> reference(dim, 0.0);
    std::vector<dtai::performance_vector> points(20);
    for (auto& pt : points) {
      pt.p.resize(dim);
      for (std::size_t d = 0; d < dim; ++d) pt.p[d] = gen.uniform(0.05, 1.25);
    }
    dtai::hv_options exact_opts;
    exact_opts.mode = dtai::hv_mode::exact;
    const double exact = dtai::hypervolume(points, reference, exact_opts).value;

    dtai::hv_options mc_opts;
    mc_opts.mode = dtai::hv_mode::monte_carlo;
    mc_opts.mc_samples = 1'000'000;
    mc_opts.seed = dtai::rng_seed{9000 + static_cast<std::uint64_t>(trial)};
    mc_opts.threads = 8;
    const auto mc = dtai::hypervolume(points, reference, mc_opts);
    expect(mc.std_error.has_value() && *mc.std_error > 0.0,
           "monte carlo estimate carries no standard error");
    if (std::abs(mc.value - exact) <= 3.0 * *mc.std_error) ++within;
  }
  expect(within >= 195, "monte carlo within 3 standard errors on only ", within,
         "/200 fronts");
}

// 4. Diversity, novelty, TSR, and MTR match exhaustive oracles to 1e-12 on
//    100 random instances each (<= 50 designs, <= 10 dims).
void criterion_metric_oracles() {
  dtai::rng gen(dtai::rng_seed{404});
  auto random_vectors = [&](std::size_t m, std::size_t dim) {
    std::vector<std::vector<double>> v(m, std::vector<double>(dim));
    for (auto& row : v)
      for (double& c : row) c = gen.uniform(-5.0, 5.0);
    return v;
  };

  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t dim = 1 + static_cast<std::size_t>(gen.uniform(0.0, 9.99));
    const std::size_t m = 2 + static_cast<std::size_t>(gen.uniform(0.0, 47.99));
    const auto vectors = random_vectors(m, dim);
    const auto got = dtai::diversity_scores(vectors);
    const auto want = oracle::diversity(vectors);
    for (std::size_t i = 0; i < m; ++i)
      expect(close(got[i], want[i], 1e-12), "diversity[", i, "] = ", got[i],
             " != ", want[i], " (trial ", trial, ")");
  }

  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t dim = 1 + static_cast<std::size_t>(gen.uniform(0.0, 9.99));
    const std::size_t m = 1 + static_cast<std::size_t>(gen.uniform(0.0, 48.99));
    const std::size_t nd = 1 + static_cast<std::size_t>(gen.uniform(0.0, 48.99));
    const auto generated = random_vectors(m, dim);
    const auto dataset = random_vectors(nd, dim);
    const auto got = dtai::novelty_scores(generated, dataset);
    const auto want = oracle::novelty(generated, dataset);
    for (std::size_t i = 0; i < m; ++i)
      expect(close(got[i], want[i], 1e-12), "novelty[", i, "] = ", got[i],
             " != ", want[i], " (trial ", trial, ")");
  }

  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(gen.uniform(0.0, 9.99));
    dtai::target_spec spec;
    dtai::performance_vector p;
    for (std::size_t i = 0; i < n; ++i) {
      spec.t.push_back(gen.uniform(0.1, 5.0));
      spec.alpha.push_back(1.0);
      spec.beta.push_back(4.0);
      p.p.push_back(gen.uniform(0.01, 10.0));
    }
    std::size_t met = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (p.p[i] >= spec.t[i]) ++met;
      worst = std::min(worst, p.p[i] / spec.t[i]);
    }
    const double tsr_want = static_cast<double>(met) / static_cast<double>(n);
    expect(close(dtai::target_success_rate(p, spec), tsr_want, 1e-12),
           "tsr mismatch at trial ", trial);
    expect(close(dtai::minimum_target_ratio(p, spec), worst, 1e-12),
           "mtr mismatch at trial ", trial);
  }
}

// 5. With percentile targets proven reachable by a 1e-3 grid search, at
//    least 90% of a 64-member population reaches MTR >= 1 within 500
//    gradient ascent iterations, and every member's index series is
//    non-decreasing.
void criterion_optimizer() {
  const dtai::gaussian_peaks_problem problem(2, 2, dtai::rng_seed{5});

  dtai::rng gen(dtai::rng_seed{71});
  std::vector<std::vector<double>> samples(2);
  for (int s = 0; s < 10'000; ++s) {
    const std::vector<double> x{gen.uniform(), gen.uniform()};
    const auto p = problem.evaluate(x);
    for (std::size_t k = 0; k < 2; ++k) samples[k].push_back(p[k]);
  }
  const std::vector<double> t{oracle::percentile(samples[0], 75.0),
                              oracle::percentile(samples[1], 75.0)};

  double best = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    for (int j = 0; j <= 1000; ++j) {
      const std::vector<double> x{i / 1000.0, j / 1000.0};
      const auto p = problem.evaluate(x);
      best = std::max(best, std::min(p[0] / t[0], p[1] / t[1]));
    }
  }
  expect(best >= 1.0, "grid search finds no point meeting both targets (best ",
         best, ")");

  dtai::optimizer_config config;
  config.population = 64;
  config.max_iters = 500;
  config.seed = dtai::rng_seed{2024};
  const auto traj = dtai::ascend_dtai(problem, dtai::uniform_targets(t), config);

  std::size_t reached = 0;
  for (const auto& p : traj.final_p)
    if (dtai::minimum_target_ratio(p, dtai::uniform_targets(t)) >= 1.0) ++reached;
  expect(reached * 10 >= config.population * 9, "only ", reached, "/",
         config.population, " members reach MTR >= 1 after ", traj.iterations_run,
         " iterations");

  for (std::size_t it = 1; it < traj.member_dtai.size(); ++it)
    for (std::size_t m = 0; m < config.population; ++m)
      expect(traj.member_dtai[it][m] >= traj.member_dtai[it - 1][m],
             "member ", m, " index decreased at iteration ", it);
}

// 6. On the shipped 5000-row synthetic study (5 continuous + 1 categorical
//    columns, 4 objectives) the interpolation baseline's mean index beats
//    the dataset baseline's, and the ascent population's mean success rate
//    beats both baselines'. Strict ordering only; magnitudes are not
//    asserted.
void criterion_study_ordering() {
  testutil::temp_dir dir;
  dtai::write_demo_files(dir.path);
  const auto config_path = dir.path / "config.json";

  const auto dataset_run = dtai::run_evaluate(dtai::load_config(config_path, {}));
  const auto interp_run = dtai::run_evaluate(
      dtai::load_config(config_path, {"generator.kind=interpolation"}));
  const auto ascent = dtai::run_optimize(dtai::load_config(config_path, {}));

  expect(dataset_run.dtai.present && interp_run.dtai.present,
         "baseline index missing from a report");
  expect(interp_run.dtai.mean > dataset_run.dtai.mean,
         "interpolation mean index ", interp_run.dtai.mean,
         " does not beat dataset mean index ", dataset_run.dtai.mean);

  expect(ascent.report.tsr.present, "ascent success rate missing");
  expect(ascent.report.tsr.mean > interp_run.tsr.mean &&
             ascent.report.tsr.mean > dataset_run.tsr.mean,
         "ascent mean TSR ", ascent.report.tsr.mean, " does not beat baselines (",
         dataset_run.tsr.mean, ", ", interp_run.tsr.mean, ")");
}

// 7. The inverted below-target branch (score alpha*(1-r) instead of
//    alpha*(r-1)) pushes sum(s) past s_max and the index out of [0, 1],
//    which is why the corrected branch is the default.
void criterion_inverted_branch() {
  const auto targets = dtai::uniform_targets({1.0, 1.0});
  const dtai::performance_vector p{{0.05, 0.10}};

  const auto broken = dtai::score(p, targets, dtai::below_target_form::inverted);
  double sum_s = 0.0;
  for (double s : broken.s) sum_s += s;
  expect(sum_s > broken.s_max, "inverted branch sum ", sum_s,
         " does not exceed s_max ", broken.s_max);
  expect(broken.value > 1.0, "inverted branch index ", broken.value,
         " stays inside [0, 1]");

  const auto fixed = dtai::score(p, targets);
  expect(fixed.value >= 0.0 && fixed.value < 1.0,
         "default branch index out of range: ", fixed.value);
}

// 8. Two CLI runs with the same config and seed produce byte-identical
//    report.json, scores.csv, kde.csv, and trajectory.csv.
void criterion_cli_determinism() {
  testutil::temp_dir dir;
  const std::string cli = DTAI_CLI_PATH;
  auto run = [&](const std::string& args) {
    const std::string cmd = "\"" + cli + "\" " + args + " > /dev/null";
    const int status = std::system(cmd.c_str());
    expect(status != -1 && WIFEXITED(status) && WEXITSTATUS(status) == 0,
           "command failed: ", cmd);
  };

  run("demo --out \"" + (dir.path / "demo").string() + "\"");
  const std::string config = (dir.path / "demo" / "config.json").string();

  run("evaluate \"" + config + "\" --out \"" + (dir.path / "e1").string() + "\"");
  run("evaluate \"" + config + "\" --out \"" + (dir.path / "e2").string() + "\"");
  for (const char* name : {"report.json", "scores.csv", "kde.csv"})
    expect(testutil::read_file(dir.path / "e1" / name) ==
               testutil::read_file(dir.path / "e2" / name),
           "evaluate output ", name, " differs between runs");

  const std::string cap = " --set optimizer.max_iters=80";
  run("optimize \"" + config + "\"" + cap + " --out \"" +
      (dir.path / "o1").string() + "\"");
  run("optimize \"" + config + "\"" + cap + " --out \"" +
      (dir.path / "o2").string() + "\"");
  for (const char* name : {"report.json", "scores.csv", "kde.csv", "trajectory.csv"})
    expect(testutil::read_file(dir.path / "o1" / name) ==
               testutil::read_file(dir.path / "o2" / name),
           "optimize output ", name, " differs between runs");
}

struct criterion {
  int number;
  const char* name;
  double budget_seconds;
  std::function<void()> run;
};

}  // namespace

int main() {
  const std::vector<criterion> criteria{
      {1, "index closed-form values", 1.0, criterion_closed_form},
      {2, "analytic gradient vs finite differences", 5.0, criterion_gradient},
      {3, "hypervolume exact and monte carlo oracles", 60.0, criterion_hypervolume},
      {4, "diversity, novelty, TSR, MTR oracles", 5.0, criterion_metric_oracles},
      {5, "gradient ascent reaches verified targets", 30.0, criterion_optimizer},
      {6, "synthetic study metric ordering", 120.0, criterion_study_ordering},
      {7, "inverted below-target branch breaks bounds", 1.0,
       criterion_inverted_branch},
      {8, "CLI byte determinism", 60.0, criterion_cli_determinism},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string failure;
    try {
      c.run();
    } catch (const std::exception& e) {
      failure = e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (failure.empty() && elapsed > c.budget_seconds) {
      std::ostringstream msg;
      msg << "exceeded the " << c.budget_seconds << " s budget";
      failure = msg.str();
    }
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(2);
    if (failure.empty()) {
      line << "PASS  " << c.number << ". " << c.name << "  (" << elapsed << " s)";
    } else {
      line << "FAIL  " << c.number << ". " << c.name << "  (" << elapsed
           << " s): " << failure;
      ++failures;
    }
    std::cout << line.str() << std::endl;
  }
  return failures;
}
