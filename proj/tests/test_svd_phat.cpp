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
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/SVD>

#include "acam/error.hpp"
#include "acam/svd_phat.hpp"
#include "fixtures.hpp"

using cd = std::complex<double>;

namespace {

struct Instance {
  acam::ArrayGeometry geometry;
  acam::RegressionModel model;
  int frame_size;
};

Instance small_instance(std::uint64_t seed, int width = 24, int height = 18, std::size_t mics = 4,
                        int frame_size = 32) {
  std::mt19937_64 rng(seed);
  auto geometry = acam::testing::random_geometry(mics, rng);
  const acam::CameraModel camera(width, height, -0.05);
  auto model = acam::testing::calibrated_model(geometry, camera, 3);
  return {geometry, model, frame_size};
}

Eigen::VectorXcd random_phasors(Eigen::Index size, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
  Eigen::VectorXcd x(size);
  for (Eigen::Index i = 0; i < size; ++i) x[i] = std::polar(1.0, phase(rng));
  return x;
}

}  // namespace

TEST_CASE("steering matrix entries") {
  const auto inst = small_instance(1);
  const auto w = acam::build_steering(inst.model, inst.frame_size);
  const Eigen::Index bins = inst.frame_size / 2 + 1;
  REQUIRE(w.data.rows() == 24 * 18);
  REQUIRE(w.data.cols() == 6 * bins);
  CHECK((w.data.array().abs() - 1.0).abs().maxCoeff() < 1e-12);
  for (Eigen::Index p = 0; p < 6; ++p) CHECK(w.data.col(p * bins).isOnes(0.0));
  for (int v = 1; v <= 18; v += 5)
    for (int u = 1; u <= 24; u += 7) {
      const auto tau = inst.model.predict(u, v);
      const auto row = acam::pixel_index(u, v, 24);
      for (Eigen::Index p = 0; p < 6; ++p)
        for (Eigen::Index f = 0; f < bins; ++f) {
          const cd expected = std::exp(cd(0.0, 2.0 * std::numbers::pi * double(f) * tau[p] / inst.frame_size));
          CHECK(std::abs(w.data(row, p * bins + f) - expected) < 1e-12);
        }
    }
  CHECK((acam::steering_rows(inst.model, inst.frame_size, 100, 50) - w.data.middleRows(100, 50)).cwiseAbs().maxCoeff() <
        1e-14);
}

TEST_CASE("zero prediction row is all ones") {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(4, 3);
  c(1, 0) = 1.0;  // tau_0 = y, zero on the middle row
  const acam::RegressionModel model(1, c, 9, 9);
  const auto w = acam::build_steering(model, 16);
  CHECK(w.data.row(acam::pixel_index(3, 5, 9)).isOnes(1e-15));
}

TEST_CASE("truncation") {
  SUBCASE("delta close to one keeps one component") {
    const auto inst = small_instance(2);
    CHECK(acam::truncate(acam::build_steering(inst.model, inst.frame_size), 0.999).rank() == 1);
  }
  SUBCASE("rank-one steering matrix") {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(4, 6);
    c.row(0) << 0.5, -1.0, 2.0, 1.5, -0.25, 3.0;
    const acam::RegressionModel model(1, c, 12, 10);
    const auto svd = acam::truncate(acam::build_steering(model, 32), 1e-5);
    CHECK(svd.rank() == 1);
    CHECK(svd.energy_kept() == doctest::Approx(1.0));
  }
  SUBCASE("bad delta") {
    const auto inst = small_instance(3, 8, 8, 3, 16);
    const auto w = acam::build_steering(inst.model, 16);
    CHECK_THROWS_AS(acam::truncate(w, 0.0), acam::Error);
    CHECK_THROWS_AS(acam::truncate(w, 1.0), acam::Error);
  }
}

TEST_CASE("truncation agrees with a direct SVD and is tight") {
  for (std::uint64_t seed = 10; seed < 14; ++seed) {
    const auto inst = small_instance(seed, 20, 16, seed % 2 ? 3 : 4, seed % 2 ? 64 : 32);
    const auto w = acam::build_steering(inst.model, inst.frame_size);
    const double delta = 1e-5;
    const auto svd = acam::truncate(w, delta);

    Eigen::JacobiSVD<Eigen::MatrixXcd> oracle(w.data);
    const Eigen::VectorXd s2 = oracle.singularValues().array().square();
    const double total = double(w.data.rows()) * double(w.data.cols());
    CHECK(s2.sum() == doctest::Approx(total).epsilon(1e-10));
    CHECK(svd.total_energy() == total);
    REQUIRE(svd.energies().size() == s2.size());
    CHECK((svd.energies() - s2).cwiseAbs().maxCoeff() <= 1e-8 * total);

    const Eigen::Index k = svd.rank();
    CHECK(k >= 1);
    CHECK(s2.head(k).sum() >= (1 - delta) * total);
    if (k > 1) CHECK(s2.head(k - 1).sum() < (1 - delta) * total);
    CHECK(svd.energy_kept() >= 1 - delta);

    const double rel = (w.data - svd.left() * svd.right()).norm() / w.data.norm();
    CHECK(rel <= std::sqrt(delta) * (1 + 1e-6));
  }
}

TEST_CASE("select_rank") {
  const Eigen::Vector4d e(5.0, 3.0, 1.5, 0.5);
  CHECK(acam::select_rank(e, 10.0, 0.5) == 1);
  CHECK(acam::select_rank(e, 10.0, 0.2) == 2);
  CHECK(acam::select_rank(e, 10.0, 0.15) == 3);
  CHECK(acam::select_rank(e, 10.0, 0.05) == 3);
  CHECK(acam::select_rank(e, 10.0, 0.04) == 4);
}

TEST_CASE("streamed and dense paths agree") {
  const auto inst = small_instance(20, 28, 20);
  const auto w = acam::build_steering(inst.model, inst.frame_size);
  const auto dense = acam::truncate(w, 1e-5);
  const auto streamed = acam::truncate(inst.model, inst.frame_size, 1e-5);
  CHECK(dense.rank() == streamed.rank());
  std::mt19937_64 rng(3);
  const auto x = random_phasors(w.data.cols(), rng);
  CHECK((acam::image_brute(w, x).values - acam::image_brute(inst.model, inst.frame_size, x).values)
            .cwiseAbs()
            .maxCoeff() < 1e-9);
  CHECK((acam::image_fast(dense, x).values - acam::image_fast(streamed, x).values).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("images") {
  const auto inst = small_instance(30);
  const auto w = acam::build_steering(inst.model, inst.frame_size);
  const auto svd = acam::truncate(w, 1e-5);
  const double bound = double(w.data.cols());

  SUBCASE("zero supervector") {
    const Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(w.data.cols());
    CHECK(acam::image_brute(w, zero).values.isZero(0.0));
    CHECK(acam::image_fast(svd, zero).values.isZero(0.0));
  }
  SUBCASE("conjugate steering row peaks at its pixel") {
    const auto row = acam::pixel_index(7, 11, 24);
    const Eigen::VectorXcd x = w.data.row(row).conjugate().transpose();
    const auto image = acam::image_brute(w, x);
    CHECK(image.at(7, 11) == doctest::Approx(bound));
    CHECK(image.values.maxCoeff() <= bound * (1 + 1e-12));
    const auto peak = image.argmax();
    CHECK(peak.u == 7);
    CHECK(peak.v == 11);
  }
  SUBCASE("energy bound and fast agreement for unit phasors") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 5; ++trial) {
      const auto x = random_phasors(w.data.cols(), rng);
      const auto brute = acam::image_brute(w, x);
      const auto fast = acam::image_fast(svd, x);
      CHECK(brute.values.cwiseAbs().maxCoeff() <= bound);
      CHECK((fast.values - brute.values).cwiseAbs().maxCoeff() <= 1e-2 * bound);
    }
  }
  SUBCASE("synthetic source peaks within a pixel") {
    const auto geometry = acam::nominal_square_geometry();
    const acam::CameraModel camera(40, 30, -0.05);
    const auto model = acam::testing::calibrated_model(geometry, camera, 3);
    for (auto pixel : acam::target_grid(40, 30, 5)) {
      const auto source = acam::unproject(camera, pixel, 1.0);
      const auto x = acam::testing::source_supervector(geometry, source, 512, 5);
      const auto peak = acam::image_brute(model, 512, x).argmax();
      CAPTURE(pixel.u);
      CAPTURE(pixel.v);
      CHECK(std::abs(peak.u - std::round(pixel.u)) <= 1);
      CHECK(std::abs(peak.v - std::round(pixel.v)) <= 1);
    }
  }
  SUBCASE("dimension mismatch") {
    const Eigen::VectorXcd wrong = Eigen::VectorXcd::Ones(w.data.cols() - 1);
    CHECK_THROWS_AS(acam::image_brute(w, wrong), acam::Error);
    CHECK_THROWS_AS(acam::image_fast(svd, wrong), acam::Error);
  }
}

TEST_CASE("op counts") {
  auto oracle = [](std::uint64_t u, std::uint64_t v, std::uint64_t m, std::uint64_t n, std::uint64_t k) {
    const unsigned __int128 p = m * (m - 1) / 2;
    const unsigned __int128 cols = p * (n / 2 + 1);
    const unsigned __int128 brute = static_cast<unsigned __int128>(u) * v * cols;
    const unsigned __int128 fast = static_cast<unsigned __int128>(u) * v * k + k * cols;
    return std::pair{static_cast<std::uint64_t>(brute), static_cast<std::uint64_t>(fast)};
  };
  const auto full_size = acam::op_counts(320, 240, 4, 512, 32);
  CHECK(full_size.brute == 118425600u);
  CHECK(full_size.fast == 2506944u);
  CHECK(full_size.ratio == doctest::Approx(47.239).epsilon(1e-4));

  const auto tiny = acam::op_counts(1, 1, 2, 64, 3);
  CHECK(tiny.brute == 33u);
  CHECK(tiny.fast == 3u + 3u * 33u);

  std::mt19937_64 rng(40);
  std::uniform_int_distribution<std::uint64_t> dim(1, 2000), mics(2, 16), half(4, 1024), rank(1, 500);
  for (int i = 0; i < 200; ++i) {
    const auto u = dim(rng), v = dim(rng), m = mics(rng), n = 2 * half(rng), k = rank(rng);
    const auto got = acam::op_counts(u, v, m, n, k);
    const auto [brute, fast] = oracle(u, v, m, n, k);
    CHECK(got.brute == brute);
    CHECK(got.fast == fast);
    CHECK(got.ratio == doctest::Approx(double(brute) / double(fast)));
  }
  // No truncation benefit: K equal to the column count never wins.
  const auto full = acam::op_counts(32, 32, 4, 64, 6 * 33);
  CHECK(full.ratio < 1.0);
  CHECK_THROWS_AS(acam::op_counts(0, 240, 4, 512, 32), acam::Error);
}

TEST_CASE("model file round trip") {
  const auto inst = small_instance(50, 10, 8, 3, 16);
  const auto svd = acam::truncate(inst.model, 16, 1e-5);
  std::stringstream buffer(std::ios::in | std::ios::out | std::ios::binary);
  acam::save_svd_phat(svd, buffer);
  const auto loaded = acam::load_svd_phat(buffer);
  CHECK(loaded.width() == 10);
  CHECK(loaded.height() == 8);
  CHECK(loaded.frame_size() == 16);
  CHECK(loaded.pair_count() == 3u);
  CHECK(loaded.delta() == 1e-5);
  CHECK(loaded.rank() == svd.rank());
  CHECK(loaded.left() == svd.left());
  CHECK(loaded.right() == svd.right());
  CHECK(loaded.energies() == svd.energies());

  std::stringstream garbage("not a model");
  CHECK_THROWS_AS(acam::load_svd_phat(garbage), acam::Error);
}
