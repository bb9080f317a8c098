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

#include <cmath>
#include <random>
#include <sstream>

#include "acam/error.hpp"
#include "acam/regression.hpp"
#include "acam/study.hpp"

using acam::PixelCoord;

namespace {

constexpr int kU = 320;
constexpr int kV = 240;

// Straight transcription of the double sum, independent of the basis layout
// used by design_matrix / predict.
double naive_eval(const Eigen::MatrixXd& coeffs, int order, double u, double v, Eigen::Index pair) {
  const double x = (2 * u - kU - 1) / double(kU - 1);
  const double y = (2 * v - kV - 1) / double(kV - 1);
  double sum = 0.0;
  for (int a = 0; a <= order; ++a)
    for (int b = 0; b <= order; ++b) sum += std::pow(x, a) * std::pow(y, b) * coeffs(a * (order + 1) + b, pair);
  return sum;
}

acam::TargetSet synthetic_set(const std::vector<PixelCoord>& targets, const Eigen::MatrixXd& coeffs,
                              int order) {
  acam::TargetSet set;
  set.targets = targets;
  set.tdoas.resize(static_cast<Eigen::Index>(targets.size()), coeffs.cols());
  for (std::size_t t = 0; t < targets.size(); ++t)
    for (Eigen::Index p = 0; p < coeffs.cols(); ++p)
      set.tdoas(static_cast<Eigen::Index>(t), p) = naive_eval(coeffs, order, targets[t].u, targets[t].v, p);
  return set;
}

Eigen::MatrixXd random_coeffs(int order, int pairs, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Eigen::MatrixXd c(static_cast<Eigen::Index>(acam::basis_size(order)), pairs);
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = d(rng);
  return c;
}

}  // namespace

TEST_CASE("normalize_pixel") {
  CHECK(acam::normalize_pixel(1, 320) == -1.0);
  CHECK(acam::normalize_pixel(320, 320) == 1.0);
  CHECK(acam::normalize_pixel(160.5, 320) == 0.0);
}

TEST_CASE("design_matrix") {
  SUBCASE("image center kills all non-constant terms") {
    const std::vector<PixelCoord> center{{160.5, 120.5}};
    for (int order = 0; order <= 4; ++order) {
      const auto a = acam::design_matrix(center, order, kU, kV);
      REQUIRE(a.cols() == static_cast<Eigen::Index>(acam::basis_size(order)));
      CHECK(a(0, 0) == 1.0);
      CHECK(a.row(0).tail(a.cols() - 1).cwiseAbs().maxCoeff() == 0.0);
    }
  }
  SUBCASE("L = 1 at the top-left corner") {
    const std::vector<PixelCoord> corner{{1, 1}};
    const auto a = acam::design_matrix(corner, 1, kU, kV);
    CHECK(a.row(0).isApprox(Eigen::RowVector4d(1, -1, -1, 1)));
  }
  SUBCASE("L = 3 has 16 columns and a ones column") {
    const auto grid = acam::target_grid(kU, kV, 5);
    const auto a = acam::design_matrix(grid, 3, kU, kV);
    CHECK(a.cols() == 16);
    CHECK(a.rows() == 25);
    CHECK(a.col(0).isOnes());
  }
}

TEST_CASE("fit recovers exact polynomial fields") {
  std::mt19937_64 rng(11);
  for (int order = 0; order <= 4; ++order) {
    CAPTURE(order);
    const Eigen::MatrixXd truth = random_coeffs(order, 6, rng);
    // T = (L+1)^2 distinct targets on an (L+1) x (L+1) grid.
    const auto targets = acam::target_grid(kU, kV, order + 1 < 2 ? 2 : order + 1, 0.05);
    const auto set = synthetic_set(targets, truth, order);
    const auto model = acam::fit(set, order, kU, kV);
    CHECK((model.coeffs() - truth).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("fit of constant TDOAs") {
  Eigen::RowVectorXd tau0(6);
  tau0 << 0.5, -1.25, 2.0, 0.0, 3.5, -0.75;
  acam::TargetSet set;
  set.targets = acam::target_grid(kU, kV, 5);
  set.tdoas = tau0.replicate(25, 1);
  const auto model = acam::fit(set, 3, kU, kV);
  CHECK((model.coeffs().row(0) - tau0).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(model.coeffs().bottomRows(15).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((model.predict(17.0, 203.5).transpose() - tau0).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("fit satisfies the normal equations") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> noise(-3.0, 3.0);
  acam::TargetSet set;
  set.targets = acam::target_grid(kU, kV, 5);
  set.tdoas.resize(25, 6);
  for (Eigen::Index i = 0; i < set.tdoas.size(); ++i) set.tdoas(i) = noise(rng);
  for (int order = 1; order <= 4; ++order) {
    const auto model = acam::fit(set, order, kU, kV);
    const Eigen::MatrixXd a = acam::design_matrix(set.targets, order, kU, kV);
    const Eigen::MatrixXd rhs = a.transpose() * set.tdoas;
    const double residual = (a.transpose() * a * model.coeffs() - rhs).norm();
    CHECK(residual <= 1e-8 * rhs.norm());
  }
}

TEST_CASE("predict matches the naive evaluator and the design matrix") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> pos(-5.0, 330.0);
  for (int order = 1; order <= 4; ++order) {
    const Eigen::MatrixXd c = random_coeffs(order, 3, rng);
    const acam::RegressionModel model(order, c, kU, kV);
    std::vector<PixelCoord> points;
    for (int i = 0; i < 50; ++i) points.push_back({pos(rng), pos(rng) * 0.75});
    const Eigen::MatrixXd by_matrix = acam::design_matrix(points, order, kU, kV) * c;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto p = model.predict(points[i].u, points[i].v);
      for (Eigen::Index k = 0; k < 3; ++k) {
        CHECK(std::abs(p[k] - naive_eval(c, order, points[i].u, points[i].v, k)) <= 1e-12 * (1 + std::abs(p[k])));
        CHECK(std::abs(p[k] - by_matrix(static_cast<Eigen::Index>(i), k)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("predict at a fitted target reproduces the measurement") {
  std::mt19937_64 rng(8);
  const Eigen::MatrixXd truth = random_coeffs(3, 6, rng);
  const auto targets = acam::target_grid(kU, kV, 5);
  const auto set = synthetic_set(targets, truth, 3);
  const auto model = acam::fit(set, 3, kU, kV);
  for (std::size_t t = 0; t < targets.size(); ++t)
    CHECK((model.predict(targets[t].u, targets[t].v).transpose() - set.tdoas.row(static_cast<Eigen::Index>(t)))
              .cwiseAbs()
              .maxCoeff() < 1e-9);
}

TEST_CASE("higher orders still recover lower-order data") {
  std::mt19937_64 rng(13);
  const auto targets = acam::target_grid(kU, kV, 5);
  for (int order = 1; order <= 3; ++order) {
    const auto set = synthetic_set(targets, random_coeffs(order, 6, rng), order);
    for (int fitted = order; fitted <= 4; ++fitted) {
      const auto model = acam::fit(set, fitted, kU, kV);
      CHECK(acam::fit_residual_rms(model, set) <= 1e-9);
    }
  }
}

TEST_CASE("left-right mirror flips parity in the x index") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  acam::TargetSet set, mirrored;
  set.targets = acam::target_grid(kU, kV, 5);
  set.tdoas.resize(25, 6);
  for (Eigen::Index i = 0; i < set.tdoas.size(); ++i) set.tdoas(i) = d(rng);
  for (const auto& t : set.targets) mirrored.targets.push_back({kU + 1 - t.u, t.v});
  mirrored.tdoas = -set.tdoas;
  const int order = 3;
  const auto a = acam::fit(set, order, kU, kV);
  const auto b = acam::fit(mirrored, order, kU, kV);
  for (int i = 0; i <= order; ++i)
    for (int j = 0; j <= order; ++j) {
      const double sign = (i % 2 == 0) ? -1.0 : 1.0;
      const auto row = i * (order + 1) + j;
      CHECK((b.coeffs().row(row) - sign * a.coeffs().row(row)).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("fit error paths") {
  acam::TargetSet set;
  set.targets = acam::target_grid(kU, kV, 3);
  set.tdoas = Eigen::MatrixXd::Zero(9, 6);

  SUBCASE("underdetermined") {
    try {
      acam::fit(set, 3, kU, kV);
      FAIL("expected underdetermined");
    } catch (const acam::Error& e) {
      CHECK(e.code() == acam::Errc::underdetermined);
    }
  }
  SUBCASE("collinear targets are a singular design") {
    acam::TargetSet line;
    for (int i = 0; i < 30; ++i) line.targets.push_back({10.0 + 10 * i, 100.0});
    line.tdoas = Eigen::MatrixXd::Zero(30, 6);
    try {
      acam::fit(line, 2, kU, kV);
      FAIL("expected singular design");
    } catch (const acam::Error& e) {
      CHECK(e.code() == acam::Errc::singular_design);
      CHECK(std::string(e.what()).find("rank 3 of 9") != std::string::npos);
    }
  }
  SUBCASE("duplicate targets are accepted") {
    acam::TargetSet dup = set;
    dup.targets.push_back(dup.targets.front());
    dup.tdoas = Eigen::MatrixXd::Ones(10, 6);
    CHECK_NOTHROW(acam::fit(dup, 2, kU, kV));
  }
  SUBCASE("targets outside the image") {
    set.targets[0] = {0.0, 5.0};
    CHECK_THROWS_AS(acam::fit(set, 1, kU, kV), acam::Error);
  }
  SUBCASE("row count mismatch") {
    set.tdoas = Eigen::MatrixXd::Zero(8, 6);
    CHECK_THROWS_AS(acam::fit(set, 1, kU, kV), acam::Error);
  }
  SUBCASE("tau_max check") {
    set.tdoas(2, 3) = 5.0;
    CHECK_THROWS_AS(acam::validate_targets(set, kU, kV, 4.0), acam::Error);
    CHECK_NOTHROW(acam::validate_targets(set, kU, kV, 5.5));
  }
}

TEST_CASE("ridge shrinks coefficients") {
  std::mt19937_64 rng(2);
  const auto targets = acam::target_grid(kU, kV, 5);
  const auto set = synthetic_set(targets, random_coeffs(3, 6, rng), 3);
  acam::FitOptions ridge;
  ridge.ridge = 10.0;
  CHECK(acam::fit(set, 3, kU, kV, ridge).coeffs().norm() < acam::fit(set, 3, kU, kV).coeffs().norm());
}

TEST_CASE("model file keeps every digit") {
  std::mt19937_64 rng(4);
  const acam::RegressionModel model(3, random_coeffs(3, 6, rng), kU, kV);
  std::stringstream buffer;
  acam::save_regression(model, buffer);
  std::string header;
  std::getline(buffer, header);
  CHECK(header == "3 4 6 320 240");
  buffer.seekg(0);
  const auto loaded = acam::load_regression(buffer);
  CHECK(loaded.order() == 3);
  CHECK(loaded.mic_count() == 4);
  CHECK(loaded.width() == kU);
  CHECK(loaded.height() == kV);
  CHECK((loaded.coeffs() - model.coeffs()).cwiseAbs().maxCoeff() == 0.0);

  std::stringstream truncated("3 4 6 320 240\n1 2 3\n");
  CHECK_THROWS_AS(acam::load_regression(truncated), acam::Error);
  std::stringstream inconsistent("3 4 5 320 240\n");
  CHECK_THROWS_AS(acam::load_regression(inconsistent), acam::Error);
}
