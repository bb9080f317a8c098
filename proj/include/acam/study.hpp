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

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "acam/camera.hpp"
#include "acam/geometry.hpp"

namespace acam {

// per_axis x per_axis calibration targets with `margin` (fraction of U-1 and
// V-1) left on each side; ordered v-major, then u.
std::vector<PixelCoord> target_grid(int width, int height, int per_axis, double margin = 0.1);

struct StudyConfig {
  int width = 320;
  int height = 240;
  ArrayGeometry geometry = nominal_square_geometry();
  std::vector<int> orders{1, 2, 3, 4};
  std::vector<double> k_values{-0.05, -0.025, 0.0, 0.025, 0.05};
  int grid = 5;
  double margin = 0.1;
  std::size_t q = 1'000'000;
  // Distance of the calibration and evaluation plane, meters.
  double plane_z = 1.0;
  std::uint64_t seed = 1;
};

struct RmseReport {
  struct Entry {
    double k;
    int order;
    double rmse;
  };
  struct Retained {
    double k;
    std::size_t count;
  };
  std::size_t q = 0;
  std::size_t pair_count = 0;
  std::vector<Entry> entries;
  std::vector<Retained> retained;

  // Throws Error(Errc::invalid_argument) if (k, order) was not studied.
  double rmse(double k, int order) const;
};

/// Distortion study. For every k: unproject the target grid onto the plane,
/// take free-field TDOAs as measurements, fit each order, then score the fit
/// on Q uniform plane points that land inside the image with
/// (1 / (Q' P)) sum_q |h_s(p_q) - g(h_c(p_q))|_2.
///
/// The evaluation rectangle is |x|, |y| <= plane_z, which covers the image at
/// k = 0. Every k reuses the same point sample (same seed).
RmseReport run_simulation_study(const StudyConfig& config);

}  // namespace acam
