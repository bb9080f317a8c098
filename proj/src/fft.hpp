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

#include <complex>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace acam::detail {

// Thin per-thread wrapper over Eigen's FFT so plans are cached between calls.
inline Eigen::FFT<double>& half_spectrum_fft() {
  thread_local Eigen::FFT<double> fft = [] {
    Eigen::FFT<double> f;
    f.SetFlag(Eigen::FFT<double>::HalfSpectrum);
    return f;
  }();
  return fft;
}

// Real forward DFT, returns n/2 + 1 bins (unscaled).
inline void rfft(const std::vector<double>& in, std::vector<std::complex<double>>& out) {
  half_spectrum_fft().fwd(out, in);
}

// Inverse of rfft for length n, scaled by 1/n.
inline void irfft(const std::vector<std::complex<double>>& in, std::vector<double>& out, int n) {
  half_spectrum_fft().inv(out, in, n);
}

}  // namespace acam::detail
