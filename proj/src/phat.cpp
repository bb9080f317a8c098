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

#include "acam/phat.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "acam/error.hpp"
#include "fft.hpp"

namespace acam {

namespace {

void check_frame_size(int n) {
  if (n < kMinFrameSize || n % 2 != 0) {
    std::ostringstream msg;
    msg << "frame size must be even and >= " << kMinFrameSize << ", got " << n;
    throw Error(Errc::invalid_argument, msg.str());
  }
}

double median(std::vector<double> v) {
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

}  // namespace

Eigen::VectorXd make_window(Window window, int frame_size) {
  check_frame_size(frame_size);
  if (window == Window::rectangular) return Eigen::VectorXd::Ones(frame_size);
  Eigen::VectorXd w(frame_size);
  for (int n = 0; n < frame_size; ++n)
    w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / frame_size);
  return w;
}

FrameSpectra stft_frame(const Eigen::Ref<const Eigen::MatrixXd>& block, Window window) {
  const int n = static_cast<int>(block.cols());
  check_frame_size(n);
  if (block.rows() < 1) throw Error(Errc::invalid_argument, "frame block has no channels");
  if (!block.allFinite()) throw Error(Errc::invalid_argument, "frame block contains NaN or Inf");
  const Eigen::VectorXd w = make_window(window, n);

  FrameSpectra out;
  out.frame_size = n;
  out.bins.resize(n / 2 + 1, block.rows());
  std::vector<double> time(static_cast<std::size_t>(n));
  std::vector<std::complex<double>> freq;
  for (Eigen::Index m = 0; m < block.rows(); ++m) {
    for (int t = 0; t < n; ++t) time[static_cast<std::size_t>(t)] = block(m, t) * w[t];
    detail::rfft(time, freq);
    for (int f = 0; f <= n / 2; ++f) out.bins(f, m) = freq[static_cast<std::size_t>(f)];
  }
  return out;
}

std::size_t supervector_size(std::size_t mic_count, int frame_size) {
  return mic_count * (mic_count - 1) / 2 * static_cast<std::size_t>(frame_size / 2 + 1);
}

Eigen::VectorXcd phat_supervector(const FrameSpectra& frames) {
  const auto pairs = canonical_pairs(static_cast<std::size_t>(frames.channels()));
  const Eigen::Index bins = frames.bin_count();
  Eigen::VectorXcd x(static_cast<Eigen::Index>(pairs.size()) * bins);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto i = static_cast<Eigen::Index>(pairs[p].first);
    const auto j = static_cast<Eigen::Index>(pairs[p].second);
    for (Eigen::Index f = 0; f < bins; ++f) {
      const std::complex<double> cross = frames.bins(f, i) * std::conj(frames.bins(f, j));
      const double mag = std::abs(frames.bins(f, i)) * std::abs(frames.bins(f, j));
      x[static_cast<Eigen::Index>(p) * bins + f] =
          mag < kPhatSilenceGuard ? std::complex<double>{} : cross / std::abs(cross);
    }
  }
  return x;
}

Eigen::VectorXd gcc_phat_correlation(const FrameSpectra& frames, MicPair pair,
                                     const GccOptions& options) {
  if (options.upsample < 1) throw Error(Errc::invalid_argument, "upsample factor must be >= 1");
  if (pair.first >= static_cast<std::size_t>(frames.channels()) ||
      pair.second >= static_cast<std::size_t>(frames.channels()) || pair.first == pair.second)
    throw Error(Errc::invalid_argument, "microphone pair out of range");
  const int n = frames.frame_size;
  const int padded = n * options.upsample;
  std::vector<std::complex<double>> spec(static_cast<std::size_t>(padded / 2 + 1));
  const auto i = static_cast<Eigen::Index>(pair.first);
  const auto j = static_cast<Eigen::Index>(pair.second);
  for (int f = 0; f <= n / 2; ++f) {
    const std::complex<double> cross = frames.bins(f, i) * std::conj(frames.bins(f, j));
    const double mag = std::abs(frames.bins(f, i)) * std::abs(frames.bins(f, j));
    if (mag >= kPhatSilenceGuard) spec[static_cast<std::size_t>(f)] = cross / std::abs(cross);
  }
  // Split the Nyquist bin so zero padding keeps the interpolant real-symmetric.
  if (options.upsample > 1) spec[static_cast<std::size_t>(n / 2)] *= 0.5;
  std::vector<double> lag;
  detail::irfft(spec, lag, padded);
  return Eigen::Map<Eigen::VectorXd>(lag.data(), padded);
}

double gcc_phat_tdoa(const FrameSpectra& frames, MicPair pair, double tau_max,
                     const GccOptions& options) {
  const int n = frames.frame_size;
  if (!(tau_max >= 0.0) || tau_max >= n / 2.0) {
    std::ostringstream msg;
    msg << "tau_max " << tau_max << " must be below N/2 = " << n / 2 << " to avoid lag aliasing";
    throw Error(Errc::configuration, msg.str());
  }
  const Eigen::VectorXd r = gcc_phat_correlation(frames, pair, options);
  const int up = options.upsample;
  const int len = static_cast<int>(r.size());
  const int reach = static_cast<int>(std::ceil(tau_max)) * up;
  auto at = [&](int lag) { return r[((lag % len) + len) % len]; };

  int best = 0;
  for (int lag = -reach; lag <= reach; ++lag)
    if (at(lag) > at(best)) best = lag;

  const double y0 = at(best - 1);
  const double y1 = at(best);
  const double y2 = at(best + 1);
  const double denom = y0 - 2.0 * y1 + y2;
  double offset = 0.0;
  if (denom < 0.0) offset = std::clamp(0.5 * (y0 - y2) / denom, -0.5, 0.5);
  return (best + offset) / up;
}

std::vector<Segment> detect_segments(const MultichannelAudio& audio, const DetectOptions& options) {
  check_frame_size(options.frame_size);
  if (!(options.on_threshold > 0.0))
    throw Error(Errc::invalid_argument, "detection threshold must be positive");
  if (!(options.off_ratio > 0.0 && options.off_ratio <= 1.0))
    throw Error(Errc::invalid_argument, "off_ratio must be in (0, 1]");
  const Eigen::Index n = options.frame_size;
  const Eigen::Index count = audio.frames() / n;
  const double off = options.on_threshold * options.off_ratio;

  std::vector<Segment> segments;
  bool active = false;
  Segment current;
  auto close = [&] {
    if (current.frame_count >= options.min_segment_frames) segments.push_back(current);
    active = false;
  };
  for (Eigen::Index k = 0; k < count; ++k) {
    const double rms =
        std::sqrt(audio.samples.middleCols(k * n, n).squaredNorm() /
                  static_cast<double>(n * audio.channels()));
    if (!active && rms >= options.on_threshold) {
      active = true;
      current = {k, 0};
    } else if (active && rms < off) {
      close();
    }
    if (active) ++current.frame_count;
  }
  if (active) close();
  return segments;
}

Eigen::MatrixXd measure_targets(const MultichannelAudio& audio, const ArrayGeometry& geometry,
                                const DetectOptions& options, std::size_t expected_targets) {
  if (audio.channels() != static_cast<Eigen::Index>(geometry.mic_count())) {
    std::ostringstream msg;
    msg << "audio has " << audio.channels() << " channels but the geometry has "
        << geometry.mic_count() << " microphones";
    throw Error(Errc::dimension_mismatch, msg.str());
  }
  if (options.frames_per_target < 1)
    throw Error(Errc::invalid_argument, "frames_per_target must be >= 1");
  const auto segments = detect_segments(audio, options);
  if (segments.empty() || segments.size() < expected_targets) {
    std::ostringstream msg;
    msg << "detected " << segments.size() << " sound segments but " << expected_targets
        << " targets were requested";
    throw Error(Errc::calibration_incomplete, msg.str());
  }
  if (expected_targets != 0 && segments.size() > expected_targets) {
    std::ostringstream msg;
    msg << "detected " << segments.size() << " sound segments for " << expected_targets
        << " targets";
    throw Error(Errc::dimension_mismatch, msg.str());
  }

  const double bound = tau_max(geometry);
  const Eigen::Index n = options.frame_size;
  const auto& pairs = geometry.pairs();
  Eigen::MatrixXd tdoas(static_cast<Eigen::Index>(segments.size()),
                        static_cast<Eigen::Index>(pairs.size()));
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const Eigen::Index used = std::min<Eigen::Index>(segments[s].frame_count, options.frames_per_target);
    const Eigen::Index first = segments[s].first_frame + (segments[s].frame_count - used) / 2;
    std::vector<std::vector<double>> per_pair(pairs.size());
    for (Eigen::Index k = first; k < first + used; ++k) {
      const FrameSpectra spectra = stft_frame(audio.samples.middleCols(k * n, n), options.window);
      for (std::size_t p = 0; p < pairs.size(); ++p)
        per_pair[p].push_back(gcc_phat_tdoa(spectra, pairs[p], bound, options.gcc));
    }
    for (std::size_t p = 0; p < pairs.size(); ++p)
      tdoas(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(p)) = median(per_pair[p]);
  }
  return tdoas;
}

}  // namespace acam
