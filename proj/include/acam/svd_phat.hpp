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
#include <cstdint>
#include <iosfwd>
#include <string>

#include <Eigen/Core>

#include "acam/regression.hpp"

namespace acam {

// Pixel layout shared by steering rows and acoustic images: row index
// (v - 1) * U + (u - 1), i.e. image rows (constant v) stored contiguously.
inline Eigen::Index pixel_index(int u, int v, int width) {
  return static_cast<Eigen::Index>(v - 1) * width + (u - 1);
}

// Per-pixel phase-transform energy, pixel layout as above.
struct AcousticImage {
  int width = 0;
  int height = 0;
  Eigen::VectorXd values;

  double at(int u, int v) const { return values[pixel_index(u, v, width)]; }
  // 1-based (u, v) of the maximum; first in layout order on ties.
  PixelCoord argmax() const;
};

/// Dense steering matrix W: UV rows, P (N/2 + 1) columns laid out like the
/// PHAT supervector. Entry exp(2 pi i f tau_{u,v,p} / N).
struct SteeringMatrix {
  int width = 0;
  int height = 0;
  int frame_size = 0;
  std::size_t pair_count = 0;
  Eigen::MatrixXcd data;
};

SteeringMatrix build_steering(const RegressionModel& model, int frame_size);

// Rows [first_row, first_row + rows) of W without materializing the rest.
Eigen::MatrixXcd steering_rows(const RegressionModel& model, int frame_size, Eigen::Index first_row,
                               Eigen::Index rows);

/// Rank-K factorization W ~ left * right with left = U S (UV x K) and
/// right = V^H (K x P(N/2+1)). K is the smallest rank whose squared singular
/// values reach (1 - delta) Tr{W W^H}.
class SvdPhatModel {
 public:
  SvdPhatModel() = default;
  SvdPhatModel(int width, int height, int frame_size, std::size_t pair_count, double delta,
               Eigen::MatrixXcd left, Eigen::MatrixXcd right, Eigen::VectorXd energies);

  int width() const { return width_; }
  int height() const { return height_; }
  int frame_size() const { return frame_size_; }
  std::size_t pair_count() const { return pair_count_; }
  Eigen::Index rank() const { return right_.rows(); }
  double delta() const { return delta_; }
  const Eigen::MatrixXcd& left() const { return left_; }
  const Eigen::MatrixXcd& right() const { return right_; }
  // All squared singular values of W, descending.
  const Eigen::VectorXd& energies() const { return energies_; }
  // Tr{W W^H} = UV * P * (N/2 + 1).
  double total_energy() const;
  // Sum of the first `rank` energies over total_energy().
  double energy_kept(Eigen::Index rank) const;
  double energy_kept() const { return energy_kept(rank()); }

 private:
  int width_ = 0;
  int height_ = 0;
  int frame_size_ = 0;
  std::size_t pair_count_ = 0;
  double delta_ = 0.0;
  Eigen::MatrixXcd left_;
  Eigen::MatrixXcd right_;
  Eigen::VectorXd energies_;
};

// Smallest K with sum_{k<K} energies[k] >= (1 - delta) * total.
Eigen::Index select_rank(const Eigen::VectorXd& energies, double total, double delta);

/// Truncated factorization from the eigendecomposition of the Gram matrix
/// W^H W. Throws Error(Errc::invalid_argument) unless 0 < delta < 1 and
/// Error(Errc::numeric) if the eigensolver fails.
SvdPhatModel truncate(const SteeringMatrix& w, double delta);

// Same factorization, with W generated in row blocks from the model so it is
// never held in memory at once.
SvdPhatModel truncate(const RegressionModel& model, int frame_size, double delta);

/// Y = Re{W X}. Throws Error(Errc::dimension_mismatch).
AcousticImage image_brute(const SteeringMatrix& w, const Eigen::VectorXcd& x);

// Re{W X} with W streamed from the model in row blocks.
AcousticImage image_brute(const RegressionModel& model, int frame_size, const Eigen::VectorXcd& x);

/// Y = Re{(U S)(V^H X)}. Throws Error(Errc::dimension_mismatch).
AcousticImage image_fast(const SvdPhatModel& model, const Eigen::VectorXcd& x);

// Complex multiplication counts for one image.
struct OpCounts {
  std::uint64_t brute = 0;  // U V P (N/2 + 1)
  std::uint64_t fast = 0;   // U V K + K P (N/2 + 1)
  double ratio = 0.0;
};

OpCounts op_counts(std::uint64_t width, std::uint64_t height, std::uint64_t mic_count,
                   std::uint64_t frame_size, std::uint64_t rank);

// Binary model file: see docs/file-formats.md.
void save_svd_phat(const SvdPhatModel& model, std::ostream& out);
SvdPhatModel load_svd_phat(std::istream& in);
void save_svd_phat(const SvdPhatModel& model, const std::string& path);
SvdPhatModel load_svd_phat(const std::string& path);

}  // namespace acam
