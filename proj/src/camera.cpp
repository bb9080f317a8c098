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

#include "acam/camera.hpp"

#include <cmath>
#include <sstream>

#include "acam/error.hpp"

namespace acam {

CameraModel::CameraModel(int width, int height, double k) : width_(width), height_(height), k_(k) {
  if (width_ < 2 || height_ < 2)
    throw Error(Errc::invalid_argument, "camera dimensions must be at least 2x2");
  if (!std::isfinite(k_)) throw Error(Errc::invalid_argument, "distortion k must be finite");
}

namespace {

PixelCoord project_normalized(const CameraModel& camera, double xn, double yn) {
  const double scale = 1.0 + camera.k() * (xn * xn + yn * yn);
  const double half_u = 0.5 * camera.width();
  const double half_v = 0.5 * camera.height();
  return {half_u * xn * scale + half_u, half_v * yn * scale + half_v};
}

}  // namespace

PixelCoord project(const CameraModel& camera, const Eigen::Vector3d& point) {
  if (!(point.z() > 0.0)) throw Error(Errc::domain, "point is not in front of the camera");
  return project_normalized(camera, point.x() / point.z(), point.y() / point.z());
}

bool inside_image(const CameraModel& camera, double u, double v) {
  return u >= 1.0 && u <= camera.width() && v >= 1.0 && v <= camera.height();
}

Eigen::Vector3d unproject(const CameraModel& camera, PixelCoord pixel, double depth,
                          const UnprojectOptions& options) {
  if (!(depth > 0.0)) throw Error(Errc::domain, "unprojection depth must be positive");
  const double half_u = 0.5 * camera.width();
  const double half_v = 0.5 * camera.height();
  // Undistorted targets: what x/z, y/z would be with k = 0.
  const double tx = (pixel.u - half_u) / half_u;
  const double ty = (pixel.v - half_v) / half_v;
  double xn = tx;
  double yn = ty;
  double residual = 0.0;
  for (int it = 0; it < options.max_iterations; ++it) {
    const PixelCoord p = project_normalized(camera, xn, yn);
    residual = std::hypot(p.u - pixel.u, p.v - pixel.v);
    if (residual <= options.tolerance_px) return {xn * depth, yn * depth, depth};
    const double scale = 1.0 + camera.k() * (xn * xn + yn * yn);
    if (!(scale > 0.0)) break;
    xn += options.damping * (tx / scale - xn);
    yn += options.damping * (ty / scale - yn);
  }
  std::ostringstream msg;
  msg << "unprojection of pixel (" << pixel.u << ", " << pixel.v << ") with k=" << camera.k()
      << " did not converge; residual " << residual << " px after " << options.max_iterations
      << " iterations";
  throw Error(Errc::not_converged, msg.str());
}

}  // namespace acam
