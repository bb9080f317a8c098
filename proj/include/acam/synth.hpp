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
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "acam/audio.hpp"
#include "acam/geometry.hpp"

namespace acam {

struct SourceEvent {
  enum class Kind { white, tone, silence };

  Kind kind = Kind::silence;
  double duration_s = 0.0;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  double frequency_hz = 0.0;
  // White: standard deviation. Tone: peak amplitude.
  double amplitude = 0.0;
};

inline constexpr double kDefaultWhiteAmplitude = 0.25;
inline constexpr double kDefaultToneAmplitude = 0.5;

/// Source script, one event per line ('#' comments):
///
///   white   <seconds> <x> <y> <z> [amplitude]
///   tone    <seconds> <x> <y> <z> <hz> [amplitude]
///   silence <seconds>
///
/// Throws Error(Errc::format) with the offending line.
std::vector<SourceEvent> parse_source_script(std::istream& in);
std::vector<SourceEvent> load_source_script(const std::string& path);
void save_source_script(std::span<const SourceEvent> events, std::ostream& out);

// Delays `signal` by `delay` samples (may be fractional) with a
// frequency-domain phase ramp over a zero-padded buffer; returns `length`
// samples.
Eigen::VectorXd fractional_delay(const Eigen::VectorXd& signal, double delay, Eigen::Index length);

/// Renders events back to back into an M-channel signal at the geometry's
/// sample rate. Each mic receives the source delayed by its free-field path
/// length (relative to the nearest mic). Deterministic for a given seed.
MultichannelAudio synthesize(const ArrayGeometry& geometry, std::span<const SourceEvent> events,
                             std::uint64_t seed);

}  // namespace acam
