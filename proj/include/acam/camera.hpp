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

#include <Eigen/Core>

namespace acam {

// Real-valued pixel coordinates, 1-based: (1, 1) is the first pixel center and
// (U, V) the last. Conversion to 0-based indices happens only at raster I/O.
struct PixelCoord {
  double u = 0.0;
  double v = 0.0;
};

/// Pinhole camera with a single radial distortion coefficient k.
/// k > 0 gives pincushion distortion, k < 0 barrel, k = 0 none.
class CameraModel {
 public:
  CameraModel(int width, int height, double k);

  int width() const { return width_; }
  int height() const { return height_; }
  double k() const { return k_; }

 private:
  int width_;
  int height_;
  double k_;
};

// u = (U/2)(x/z)(1 + k(x^2+y^2)/z^2) + U/2, same for v with V. Not clamped.
// Throws Error(Errc::domain) for z <= 0.
PixelCoord project(const CameraModel& camera, const Eigen::Vector3d& point);

// 1 <= u <= U and 1 <= v <= V.
bool inside_image(const CameraModel& camera, double u, double v);

struct UnprojectOptions {
  double damping = 0.8;
  double tolerance_px = 1e-10;
  int max_iterations = 100;
};

/// Finds the point on the plane z = depth that projects onto `pixel`, by
/// damped fixed-point iteration on the normalized image-plane coordinates.
/// Throws Error(Errc::not_converged) if the residual stays above the
/// tolerance, and Error(Errc::domain) for depth <= 0.
Eigen::Vector3d unproject(const CameraModel& camera, PixelCoord pixel, double depth,
                          const UnprojectOptions& options = {});

}  // namespace acam
