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

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "acam/camera.hpp"
#include "acam/geometry.hpp"
#include "acam/phat.hpp"
#include "acam/regression.hpp"
#include "acam/study.hpp"
#include "acam/synth.hpp"

namespace acam::testing {

// Planar array with `mics` elements scattered inside a 4 cm radius.
inline ArrayGeometry random_geometry(std::size_t mics, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> radius(0.01, 0.04);
  std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
  std::vector<Eigen::Vector3d> positions;
  for (std::size_t m = 0; m < mics; ++m) {
    const double r = radius(rng);
    const double a = angle(rng);
    positions.emplace_back(r * std::cos(a), r * std::sin(a), 0.0);
  }
  return ArrayGeometry(positions, 16000.0, 343.0);
}

// Free-field TDOAs of the points seen at each pixel at `depth`.
inline TargetSet simulated_targets(const ArrayGeometry& geometry, const CameraModel& camera,
                                   const std::vector<PixelCoord>& pixels, double depth = 1.0) {
  TargetSet set;
  set.targets = pixels;
  set.tdoas.resize(static_cast<Eigen::Index>(pixels.size()), static_cast<Eigen::Index>(geometry.pair_count()));
  for (std::size_t t = 0; t < pixels.size(); ++t)
    set.tdoas.row(static_cast<Eigen::Index>(t)) =
        freefield_tdoas(geometry, unproject(camera, pixels[t], depth)).transpose();
  return set;
}

inline RegressionModel calibrated_model(const ArrayGeometry& geometry, const CameraModel& camera, int order,
                                        int grid = 5) {
  const auto targets = target_grid(camera.width(), camera.height(), grid);
  return fit(simulated_targets(geometry, camera, targets), order, camera.width(), camera.height());
}

// A white-noise burst from `source`, one frame of `frame_size` samples taken
// from its middle.
inline Eigen::MatrixXd source_block(const ArrayGeometry& geometry, const Eigen::Vector3d& source, int frame_size,
                                    std::uint64_t seed) {
  SourceEvent burst;
  burst.kind = SourceEvent::Kind::white;
  burst.duration_s = 4.0 * frame_size / geometry.sample_rate();
  burst.position = source;
  burst.amplitude = kDefaultWhiteAmplitude;
  const std::vector<SourceEvent> events{burst};
  const auto audio = synthesize(geometry, events, seed);
  return audio.samples.middleCols(frame_size, frame_size);
}

inline Eigen::VectorXcd source_supervector(const ArrayGeometry& geometry, const Eigen::Vector3d& source,
                                           int frame_size, std::uint64_t seed) {
  return phat_supervector(stft_frame(source_block(geometry, source, frame_size, seed), Window::hann));
}

}  // namespace acam::testing
