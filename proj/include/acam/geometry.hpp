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
#include <vector>

#include <Eigen/Core>

namespace acam {

// Canonical microphone pair (first < second). Pairs are enumerated
// lexicographically and every P-vector in the library follows that order.
struct MicPair {
  std::size_t first;
  std::size_t second;

  bool operator==(const MicPair&) const = default;
};

std::vector<MicPair> canonical_pairs(std::size_t mic_count);

// Number of microphones M such that M(M-1)/2 == pair_count, or 0 if none.
std::size_t mic_count_for_pairs(std::size_t pair_count);

/// Planar (or arbitrary) microphone array with the constants needed to turn
/// path differences into sample delays.
///
/// Immutable after construction. Construction validates: at least two mics,
/// finite positions with at least two distinct, positive sample rate and
/// speed of sound, non-negative overestimation factor rho.
class ArrayGeometry {
 public:
  static constexpr double kDefaultRho = 0.1;

  ArrayGeometry(std::vector<Eigen::Vector3d> mics, double sample_rate, double speed_of_sound,
                double rho = kDefaultRho);

  std::size_t mic_count() const { return mics_.size(); }
  std::size_t pair_count() const { return pairs_.size(); }
  const std::vector<Eigen::Vector3d>& mics() const { return mics_; }
  const std::vector<MicPair>& pairs() const { return pairs_; }
  double sample_rate() const { return sample_rate_; }
  double speed_of_sound() const { return speed_of_sound_; }
  double rho() const { return rho_; }

  // Samples per meter of path difference (f_S / c).
  double samples_per_meter() const { return sample_rate_ / speed_of_sound_; }

 private:
  std::vector<Eigen::Vector3d> mics_;
  std::vector<MicPair> pairs_;
  double sample_rate_;
  double speed_of_sound_;
  double rho_;
};

// Largest admissible |TDOA| in samples: (1 + rho) * max_pairs (f_S/c)|r_i - r_j|.
double tau_max(const ArrayGeometry& geometry);

/// Free-field (spherical wavefront) TDOAs for a point source, in samples.
/// Element for pair (i, j) is (f_S/c)(|s - r_i| - |s - r_j|), i.e. the arrival
/// time at mic i minus the arrival time at mic j.
///
/// Throws Error(Errc::domain) when the source is not finite or coincides with
/// a microphone.
Eigen::VectorXd freefield_tdoas(const ArrayGeometry& geometry, const Eigen::Vector3d& source);

// Square 4-mic array in the z = 0 plane, side 0.057 m, centered on the camera,
// 16 kHz, c = 343 m/s, rho = 0.1. Mic order is counter-clockwise from (-,-).
ArrayGeometry nominal_square_geometry();

}  // namespace acam
