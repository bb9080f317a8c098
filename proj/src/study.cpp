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

#include "acam/study.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "acam/error.hpp"
#include "acam/regression.hpp"

namespace acam {

std::vector<PixelCoord> target_grid(int width, int height, int per_axis, double margin) {
  if (per_axis < 2) throw Error(Errc::invalid_argument, "target grid needs at least 2 per axis");
  if (!(margin >= 0.0 && margin < 0.5)) throw Error(Errc::invalid_argument, "margin must be in [0, 0.5)");
  auto axis = [&](int extent, int i) {
    const double span = extent - 1.0;
    return 1.0 + margin * span + (1.0 - 2.0 * margin) * span * i / (per_axis - 1);
  };
  std::vector<PixelCoord> grid;
  grid.reserve(static_cast<std::size_t>(per_axis * per_axis));
  for (int j = 0; j < per_axis; ++j)
    for (int i = 0; i < per_axis; ++i) grid.push_back({axis(width, i), axis(height, j)});
  return grid;
}

double RmseReport::rmse(double k, int order) const {
  for (const auto& e : entries)
    if (e.k == k && e.order == order) return e.rmse;
  std::ostringstream msg;
  msg << "no RMSE entry for k=" << k << ", L=" << order;
  throw Error(Errc::invalid_argument, msg.str());
}

namespace {

void validate(const StudyConfig& cfg) {
  if (cfg.q < 1) throw Error(Errc::invalid_argument, "Q must be >= 1");
  if (cfg.orders.empty() || cfg.k_values.empty())
    throw Error(Errc::invalid_argument, "study needs at least one order and one k");
  if (!(cfg.plane_z > 0.0)) throw Error(Errc::invalid_argument, "plane_z must be positive");
  for (int order : cfg.orders) {
    if (order < 0) throw Error(Errc::invalid_argument, "orders must be non-negative");
    if (cfg.grid < order + 1) {
      std::ostringstream msg;
      msg << "a " << cfg.grid << "x" << cfg.grid << " grid cannot determine order " << order;
      throw Error(Errc::underdetermined, msg.str());
    }
  }
}

}  // namespace

RmseReport run_simulation_study(const StudyConfig& cfg) {
  validate(cfg);
  const auto& geometry = cfg.geometry;
  const auto pairs = static_cast<Eigen::Index>(geometry.pair_count());
  const auto grid = target_grid(cfg.width, cfg.height, cfg.grid, cfg.margin);

  RmseReport report;
  report.q = cfg.q;
  report.pair_count = geometry.pair_count();

  for (double k : cfg.k_values) {
    const CameraModel camera(cfg.width, cfg.height, k);

    // Steps 1-3: targets -> plane points -> exact TDOAs.
    TargetSet set;
    set.targets = grid;
    set.tdoas.resize(static_cast<Eigen::Index>(grid.size()), pairs);
    for (std::size_t t = 0; t < grid.size(); ++t) {
      Eigen::Vector3d point;
      try {
        point = unproject(camera, grid[t], cfg.plane_z);
      } catch (const Error& e) {
        std::ostringstream msg;
        msg << "target " << t + 1 << " of the " << cfg.grid << "x" << cfg.grid
            << " grid: " << e.what();
        throw Error(e.code(), msg.str());
      }
      set.tdoas.row(static_cast<Eigen::Index>(t)) = freefield_tdoas(geometry, point).transpose();
    }

    // Steps 5-6 and 8: sample the plane, keep points inside the image.
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> coord(-cfg.plane_z, cfg.plane_z);
    std::vector<PixelCoord> pixels;
    std::vector<Eigen::Vector3d> points;
    for (std::size_t q = 0; q < cfg.q; ++q) {
      const double x = coord(rng);
      const double y = coord(rng);
      const Eigen::Vector3d p(x, y, cfg.plane_z);
      const PixelCoord px = project(camera, p);
      if (!inside_image(camera, px.u, px.v)) continue;
      pixels.push_back(px);
      points.push_back(p);
    }
    report.retained.push_back({k, pixels.size()});
    Eigen::MatrixXd truth(static_cast<Eigen::Index>(points.size()), pairs);
    for (std::size_t q = 0; q < points.size(); ++q)
      truth.row(static_cast<Eigen::Index>(q)) = freefield_tdoas(geometry, points[q]).transpose();

    // Steps 4 and 7 for each order, then the error sum.
    for (int order : cfg.orders) {
      const RegressionModel model = fit(set, order, cfg.width, cfg.height);
      double sum = 0.0;
      constexpr std::size_t kChunk = 1 << 15;
      for (std::size_t first = 0; first < pixels.size(); first += kChunk) {
        const std::size_t count = std::min(kChunk, pixels.size() - first);
        const Eigen::MatrixXd predicted =
            design_matrix(std::span(pixels).subspan(first, count), order, cfg.width, cfg.height) *
            model.coeffs();
        const auto rows = truth.middleRows(static_cast<Eigen::Index>(first),
                                           static_cast<Eigen::Index>(count));
        sum += (rows - predicted).rowwise().norm().sum();
      }
      const double denom = static_cast<double>(pixels.size()) * static_cast<double>(pairs);
      report.entries.push_back({k, order, pixels.empty() ? 0.0 : sum / denom});
    }
  }
  return report;
}

}  // namespace acam
