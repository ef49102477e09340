#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "dtai/optimize.hpp"
#include "dtai/rng.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace dtai;

TEST_CASE("gaussian peaks evaluates to exp(-||x - c||^2) + 0.1") {
  const gaussian_peaks_problem problem(3, 2, rng_seed{5});
  REQUIRE(problem.dim() == 3);
  REQUIRE(problem.objectives() == 2);
  const auto& centers = problem.centers();
  for (const auto& c : centers)
    for (double v : c) {
      CHECK(v >= 0.0);
      CHECK(v < 1.0);
    }

  const std::vector<double> x = {0.3, 0.6, 0.9};
  const auto p = problem.evaluate(x);
  for (std::size_t k = 0; k < 2; ++k) {
    double sq = 0.0;
    for (std::size_t j = 0; j < 3; ++j)
      sq += (x[j] - centers[k][j]) * (x[j] - centers[k][j]);
    CHECK(p[k] == Catch::Approx(std::exp(-sq) + 0.1).epsilon(1e-14));
    CHECK(p[k] > 0.1);  // floor keeps performance strictly positive
    CHECK(p[k] <= 1.1);
  }

  // Evaluating at a center yields the peak value 1.1.
  CHECK(problem.evaluate(centers[0])[0] == Catch::Approx(1.1).epsilon(1e-14));
  CHECK_THROWS_AS(problem.evaluate({0.1, 0.2}), error);
}

TEST_CASE("gaussian peaks jacobian matches finite differences") {
  const gaussian_peaks_problem problem(4, 3, rng_seed{19});
  rng gen(rng_seed{20});
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<double> x(4);
    for (auto& v : x) v = gen.uniform();
    const auto jac = problem.jacobian(x);
    REQUIRE(jac.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
      for (std::size_t j = 0; j < 4; ++j) {
        auto slice = [&](double v) {
          auto q = x;
          q[j] = v;
          return problem.evaluate(q)[k];
        };
        const double fd = oracle::central_diff(slice, x[j], 1e-6);
        CHECK(jac[k][j] == Catch::Approx(fd).epsilon(1e-6).margin(1e-10));
      }
    }
  }
}

TEST_CASE("ascent never decreases any member's index") {
  const gaussian_peaks_problem problem(2, 2, rng_seed{23});
  const auto targets = uniform_targets({0.8, 0.8});
  optimizer_config config;
  config.population = 16;
  config.max_iters = 60;
  config.tolerance = 0.0;  // run every iteration
  config.seed = rng_seed{24};

  const auto traj = ascend_dtai(problem, targets, config);
  REQUIRE(traj.member_dtai.size() == traj.stats.size());
  REQUIRE(traj.stats.size() == config.max_iters + 1);  // iteration 0 included
  for (std::size_t it = 1; it < traj.member_dtai.size(); ++it)
    for (std::size_t i = 0; i < config.population; ++i)
      CHECK(traj.member_dtai[it][i] >= traj.member_dtai[it - 1][i]);

  // Mean index is therefore monotone too.
  for (std::size_t it = 1; it < traj.stats.size(); ++it)
    CHECK(traj.stats[it].mean_dtai >= traj.stats[it - 1].mean_dtai);
}

TEST_CASE("ascent respects the box bounds") {
  const gaussian_peaks_problem problem(3, 2, rng_seed{29});
  optimizer_config config;
  config.population = 12;
  config.max_iters = 80;
  config.learning_rate = 0.5;  // aggressive steps still clip to the box
  config.seed = rng_seed{30};
  const auto traj = ascend_dtai(problem, uniform_targets({0.9, 0.9}), config);
  for (const auto& member : traj.final_x)
    for (double v : member) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
}

TEST_CASE("ascent climbs to a single peak when one objective dominates") {
  // One objective, target above the floor: the optimum is the center itself.
  const gaussian_peaks_problem problem(2, 1, rng_seed{31});
  optimizer_config config;
  config.population = 8;
  config.max_iters = 300;
  config.seed = rng_seed{32};
  const auto traj = ascend_dtai(problem, uniform_targets({1.0}), config);
  const auto& center = problem.centers()[0];
  for (const auto& member : traj.final_x) {
    double sq = 0.0;
    for (std::size_t j = 0; j < 2; ++j)
      sq += (member[j] - center[j]) * (member[j] - center[j]);
    CHECK(std::sqrt(sq) < 0.02);
  }
  CHECK(traj.stats.back().mean_mtr == Catch::Approx(1.1).epsilon(1e-3));
}

TEST_CASE("the convergence window stops stalled runs early") {
  const gaussian_peaks_problem problem(2, 2, rng_seed{37});
  optimizer_config config;
  config.population = 8;
  config.max_iters = 500;
  config.tolerance = 1e-7;
  config.window = 10;
  config.seed = rng_seed{38};
  const auto traj = ascend_dtai(problem, uniform_targets({0.7, 0.7}), config);
  CHECK(traj.converged);
  CHECK(traj.iterations_run < config.max_iters);
  // The gain over the final window really is below tolerance.
  const auto& stats = traj.stats;
  const double gain = stats.back().mean_dtai -
                      stats[stats.size() - 1 - config.window].mean_dtai;
  CHECK(gain < config.tolerance);
}

TEST_CASE("trajectory evaluation scores the final population") {
  const gaussian_peaks_problem problem(2, 2, rng_seed{41});
  optimizer_config config;
  config.population = 24;
  config.max_iters = 200;
  config.seed = rng_seed{42};
  const auto targets = uniform_targets({0.6, 0.6});
  const auto traj = ascend_dtai(problem, targets, config);
  const auto report = evaluate_trajectory(traj, targets);

  CHECK(report.total == 24);
  CHECK(report.gfr == 1.0);  // projection keeps everyone inside the box
  REQUIRE(report.dtai.present);
  CHECK(report.dtai.mean == Catch::Approx(traj.stats.back().mean_dtai).epsilon(1e-12));
  REQUIRE(report.mtr.present);
  CHECK(report.mtr.mean == Catch::Approx(traj.stats.back().mean_mtr).epsilon(1e-12));
  REQUIRE(report.dn.present);
  for (double d : report.dn.values) CHECK(d >= 0.0);
}

TEST_CASE("trajectory csv has one row per recorded iteration") {
  const gaussian_peaks_problem problem(2, 2, rng_seed{43});
  optimizer_config config;
  config.population = 4;
  config.max_iters = 10;
  config.tolerance = 0.0;
  config.seed = rng_seed{44};
  const auto traj = ascend_dtai(problem, uniform_targets({0.5, 0.5}), config);

  testutil::temp_dir dir;
  write_trajectory_csv(traj, dir.path / "t.csv");
  const auto text = testutil::read_file(dir.path / "t.csv");
  CHECK(text.rfind("iteration,mean_dtai,mean_tsr,mean_mtr\n", 0) == 0);
  const auto rows = std::count(text.begin(), text.end(), '\n');
  CHECK(rows == static_cast<long>(traj.stats.size()) + 1);
}

TEST_CASE("optimizer validates its configuration and shapes") {
  const gaussian_peaks_problem problem(2, 2, rng_seed{47});
  optimizer_config config;
  config.population = 0;
  CHECK_THROWS_AS(ascend_dtai(problem, uniform_targets({1.0, 1.0}), config), error);
  config.population = 4;
  config.learning_rate = 0.0;
  CHECK_THROWS_AS(ascend_dtai(problem, uniform_targets({1.0, 1.0}), config), error);
  config.learning_rate = 0.1;
  CHECK_THROWS_AS(ascend_dtai(problem, uniform_targets({1.0}), config), error);
  CHECK_THROWS_AS(gaussian_peaks_problem(0, 2, rng_seed{1}), error);
  CHECK_THROWS_AS(gaussian_peaks_problem(2, 0, rng_seed{1}), error);
}

TEST_CASE("same seed reproduces the whole trajectory") {
  const gaussian_peaks_problem problem(2, 2, rng_seed{53});
  optimizer_config config;
  config.population = 8;
  config.max_iters = 40;
  config.seed = rng_seed{54};
  const auto a = ascend_dtai(problem, uniform_targets({0.8, 0.8}), config);
  const auto b = ascend_dtai(problem, uniform_targets({0.8, 0.8}), config);
  REQUIRE(a.final_x.size() == b.final_x.size());
  for (std::size_t i = 0; i < a.final_x.size(); ++i)
    CHECK(a.final_x[i] == b.final_x[i]);
  CHECK(a.stats.back().mean_dtai == b.stats.back().mean_dtai);
}
