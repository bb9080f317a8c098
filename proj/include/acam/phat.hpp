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

#include "acam/audio.hpp"
#include "acam/geometry.hpp"

namespace acam {

enum class Window { hann, rectangular };

// Periodic Hann (0.5 - 0.5 cos(2 pi n / N)) or all ones.
Eigen::VectorXd make_window(Window window, int frame_size);

// Half spectra of one frame: bins(f, m) = X_m(f) for f in [0, N/2].
struct FrameSpectra {
  int frame_size = 0;
  Eigen::MatrixXcd bins;

  Eigen::Index bin_count() const { return bins.rows(); }
  Eigen::Index channels() const { return bins.cols(); }
};

// Smallest accepted frame size. Frames must also be even.
inline constexpr int kMinFrameSize = 8;

// Bins below this |X_i X_j| are treated as silent and zeroed.
inline constexpr double kPhatSilenceGuard = 1e-12;

/// Windows each channel of `block` (M x N) and takes its real DFT.
/// Throws Error(Errc::invalid_argument) on NaN/Inf input or a bad N.
FrameSpectra stft_frame(const Eigen::Ref<const Eigen::MatrixXd>& block, Window window);

/// PHAT-normalized cross spectra X_i X_j^* / |X_i X_j|, pair-major then
/// frequency-minor: element p * (N/2 + 1) + f.
Eigen::VectorXcd phat_supervector(const FrameSpectra& frames);

// Length of the supervector for M mics and frame size N: P (N/2 + 1).
std::size_t supervector_size(std::size_t mic_count, int frame_size);

struct GccOptions {
  // Zero-padding factor for the inverse transform; the peak search and the
  // 3-point parabolic refinement run on a lag grid of step 1/upsample.
  int upsample = 4;
};

// Circular PHAT correlation for lags 0..N*upsample-1 (negative lags wrap to
// the end). Lag index l corresponds to l / upsample samples.
Eigen::VectorXd gcc_phat_correlation(const FrameSpectra& frames, MicPair pair,
                                     const GccOptions& options = {});

/// Fractional TDOA (arrival at pair.first minus arrival at pair.second), in
/// samples, searched over |lag| <= ceil(tau_max).
/// Throws Error(Errc::configuration) when tau_max >= N/2.
double gcc_phat_tdoa(const FrameSpectra& frames, MicPair pair, double tau_max,
                     const GccOptions& options = {});

struct DetectOptions {
  int frame_size = 512;
  Window window = Window::hann;
  // Frame RMS (over all channels) that opens a segment; a segment closes when
  // RMS drops below on_threshold * off_ratio.
  double on_threshold = 0.01;
  double off_ratio = 0.5;
  // Per-pair median is taken over at most this many frames from the middle
  // of each segment.
  int frames_per_target = 20;
  // Segments shorter than this are discarded as clicks.
  int min_segment_frames = 2;
  GccOptions gcc;
};

struct Segment {
  Eigen::Index first_frame = 0;
  Eigen::Index frame_count = 0;
};

// Energy-detector segmentation with hysteresis on non-overlapping frames.
std::vector<Segment> detect_segments(const MultichannelAudio& audio, const DetectOptions& options);

/// One P-vector (row) of median GCC-PHAT TDOAs per detected segment.
///
/// Throws Error(Errc::calibration_incomplete) when fewer than
/// `expected_targets` segments are found and Error(Errc::dimension_mismatch)
/// when more are found. Pass expected_targets = 0 to accept any count >= 1.
Eigen::MatrixXd measure_targets(const MultichannelAudio& audio, const ArrayGeometry& geometry,
                                const DetectOptions& options, std::size_t expected_targets);

}  // namespace acam
