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

#include <string>

#include <Eigen/Core>

namespace acam {

// Channel-major multichannel signal: samples(m, n) is channel m at time n,
// nominally in [-1, 1].
struct MultichannelAudio {
  int sample_rate = 0;
  Eigen::MatrixXd samples;

  Eigen::Index channels() const { return samples.rows(); }
  Eigen::Index frames() const { return samples.cols(); }
};

enum class WavEncoding { pcm16, float32 };

// RIFF/WAVE reader for 16-bit PCM and 32-bit IEEE float, including the
// WAVE_FORMAT_EXTENSIBLE wrapper. Throws Error(Errc::io / Errc::format).
MultichannelAudio read_wav(const std::string& path);

// PCM16 output clips to [-1, 1].
void write_wav(const std::string& path, const MultichannelAudio& audio,
               WavEncoding encoding = WavEncoding::pcm16);

}  // namespace acam
