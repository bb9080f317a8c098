// Copyright 2026 The acam Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "doctest.h"

#include <random>

#include "acam/error.hpp"
#include "acam/study.hpp"
#include "fixtures.hpp"

namespace {

acam::StudyConfig small_config(std::size_t q) {
  acam::StudyConfig config;
  config.q = q;
  config.k_values = {-0.05, 0.0, 0.05};
  return config;
}

// Independent Monte Carlo estimate of the study error for one (k, order).
double monte_carlo_error(double k, int order, std::size_t q, std::uint64_t seed) {
  const auto geometry = acam::nominal_square_geometry();
  const acam::CameraModel camera(320, 240, k);
  const auto model = acam::testing::calibrated_model(geometry, camera, order);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> lateral(-1.0, 1.0);
  double sum = 0.0;
  std::size_t kept = 0;
  for (std::size_t i = 0; i < q; ++i) {
    const Eigen::Vector3d point(lateral(rng), lateral(rng), 1.0);
    const auto pixel = acam::project(camera, point);
    if (!acam::inside_image(camera, pixel.u, pixel.v)) continue;
    sum += (acam::freefield_tdoas(geometry, point) - model.predict(pixel.u, pixel.v)).norm();
    ++kept;
  }
  return sum / (double(kept) * double(geometry.pair_count()));
}

}  // namespace

TEST_CASE("target grid") {
  const auto grid = acam::target_grid(320, 240, 5);
  REQUIRE(grid.size() == 25);
  CHECK(grid.front().u == doctest::Approx(32.9));
  CHECK(grid.front().v == doctest::Approx(24.9));
  CHECK(grid.back().u == doctest::Approx(288.1));
  CHECK(grid.back().v == doctest::Approx(216.1));
  CHECK(grid[1].v == grid[0].v);
  CHECK(grid[1].u > grid[0].u);
  CHECK(grid[5].v > grid[0].v);
  CHECK_THROWS_AS(acam::target_grid(320, 240, 1), acam::Error);
  CHECK_THROWS_AS(acam::target_grid(320, 240, 5, 0.5), acam::Error);
}

TEST_CASE("study orderings and retention") {
  const auto report = acam::run_simulation_study(small_config(10000));
  CHECK(report.q == 10000u);
  CHECK(report.pair_count == 6u);
  CHECK(report.entries.size() == 12u);
  for (double k : {-0.05, 0.05}) {
    CAPTURE(k);
    CHECK(report.rmse(k, 3) < report.rmse(k, 2));
    CHECK(report.rmse(k, 2) < report.rmse(k, 1));
    CHECK(report.rmse(k, 3) <= report.rmse(k, 1) / 5);
    CHECK(report.rmse(k, 4) <= report.rmse(k, 2));
  }
  for (const auto& e : report.entries) CHECK(e.rmse >= 0.0);
  REQUIRE(report.retained.size() == 3u);
  for (const auto& r : report.retained) {
    CHECK(r.count > 5000u);
    CHECK(r.count <= 10000u);
  }
  CHECK_THROWS_AS(report.rmse(0.01, 3), acam::Error);
}

TEST_CASE("study agrees with an independent Monte Carlo estimate") {
  acam::StudyConfig config = small_config(40000);
  config.k_values = {0.05};
  config.orders = {1, 3};
  const auto report = acam::run_simulation_study(config);
  for (int order : {1, 3}) {
    const double oracle = monte_carlo_error(0.05, order, 40000, 12345);
    CHECK(report.rmse(0.05, order) == doctest::Approx(oracle).epsilon(0.05));
  }
}

TEST_CASE("study estimate is stable in Q") {
  auto config = small_config(10000);
  config.k_values = {-0.05};
  const auto coarse = acam::run_simulation_study(config);
  config.q = 100000;
  const auto fine = acam::run_simulation_study(config);
  for (int order = 1; order <= 4; ++order)
    CHECK(coarse.rmse(-0.05, order) == doctest::Approx(fine.rmse(-0.05, order)).epsilon(0.05));
}

TEST_CASE("study is deterministic") {
  auto config = small_config(5000);
  const auto a = acam::run_simulation_study(config);
  const auto b = acam::run_simulation_study(config);
  REQUIRE(a.entries.size() == b.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) CHECK(a.entries[i].rmse == b.entries[i].rmse);
  config.seed = 2;
  const auto c = acam::run_simulation_study(config);
  CHECK(c.entries[0].rmse != a.entries[0].rmse);
}

TEST_CASE("study rejects bad configuration") {
  auto config = small_config(100);
  config.q = 0;
  CHECK_THROWS_AS(acam::run_simulation_study(config), acam::Error);
  config = small_config(100);
  config.orders = {5};
  CHECK_THROWS_AS(acam::run_simulation_study(config), acam::Error);
  config = small_config(100);
  config.plane_z = -1.0;
  CHECK_THROWS_AS(acam::run_simulation_study(config), acam::Error);
}
