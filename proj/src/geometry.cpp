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

#include "acam/geometry.hpp"

#include <cmath>
#include <string>

#include "acam/error.hpp"

namespace acam {

std::vector<MicPair> canonical_pairs(std::size_t mic_count) {
  std::vector<MicPair> pairs;
  if (mic_count < 2) return pairs;
  pairs.reserve(mic_count * (mic_count - 1) / 2);
  for (std::size_t i = 0; i < mic_count; ++i)
    for (std::size_t j = i + 1; j < mic_count; ++j) pairs.push_back({i, j});
  return pairs;
}

std::size_t mic_count_for_pairs(std::size_t pair_count) {
  for (std::size_t m = 2; m * (m - 1) / 2 <= pair_count; ++m)
    if (m * (m - 1) / 2 == pair_count) return m;
  return 0;
}

ArrayGeometry::ArrayGeometry(std::vector<Eigen::Vector3d> mics, double sample_rate,
                             double speed_of_sound, double rho)
    : mics_(std::move(mics)),
      sample_rate_(sample_rate),
      speed_of_sound_(speed_of_sound),
      rho_(rho) {
  if (mics_.size() < 2)
    throw Error(Errc::invalid_argument, "array geometry needs at least 2 microphones");
  bool distinct = false;
  for (const auto& r : mics_) {
    if (!r.allFinite()) throw Error(Errc::invalid_argument, "microphone position is not finite");
    if (r != mics_.front()) distinct = true;
  }
  if (!distinct)
    throw Error(Errc::invalid_argument, "all microphone positions coincide");
  if (!(sample_rate_ > 0.0) || !std::isfinite(sample_rate_))
    throw Error(Errc::invalid_argument, "sample rate must be positive");
  if (!(speed_of_sound_ > 0.0) || !std::isfinite(speed_of_sound_))
    throw Error(Errc::invalid_argument, "speed of sound must be positive");
  if (!(rho_ >= 0.0) || !std::isfinite(rho_))
    throw Error(Errc::invalid_argument, "rho must be non-negative");
  pairs_ = canonical_pairs(mics_.size());
}

double tau_max(const ArrayGeometry& geometry) {
  double widest = 0.0;
  for (const auto& [i, j] : geometry.pairs())
    widest = std::max(widest, (geometry.mics()[i] - geometry.mics()[j]).norm());
  return (1.0 + geometry.rho()) * geometry.samples_per_meter() * widest;
}

Eigen::VectorXd freefield_tdoas(const ArrayGeometry& geometry, const Eigen::Vector3d& source) {
  if (!source.allFinite()) throw Error(Errc::domain, "source position is not finite");
  const auto& mics = geometry.mics();
  std::vector<double> dist(mics.size());
  for (std::size_t m = 0; m < mics.size(); ++m) {
    dist[m] = (source - mics[m]).norm();
    if (dist[m] == 0.0)
      throw Error(Errc::domain, "source coincides with microphone " + std::to_string(m));
  }
  Eigen::VectorXd tdoas(geometry.pair_count());
  const double scale = geometry.samples_per_meter();
  for (std::size_t p = 0; p < geometry.pair_count(); ++p) {
    const auto& [i, j] = geometry.pairs()[p];
    tdoas[p] = scale * (dist[i] - dist[j]);
  }
  return tdoas;
}

ArrayGeometry nominal_square_geometry() {
  constexpr double h = 0.057 / 2.0;
  return ArrayGeometry({{-h, -h, 0.0}, {h, -h, 0.0}, {h, h, 0.0}, {-h, h, 0.0}}, 16000.0, 343.0,
                       ArrayGeometry::kDefaultRho);
}

}  // namespace acam
