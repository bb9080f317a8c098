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
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "acam/camera.hpp"

namespace acam {

// Maps pixel index u in [1, U] to [-1, 1]: (2u - U - 1) / (U - 1).
inline double normalize_pixel(double u, int extent) {
  return (2.0 * u - extent - 1.0) / (extent - 1.0);
}

// Number of tensor-product basis terms, (L + 1)^2.
inline std::size_t basis_size(int order) {
  return static_cast<std::size_t>(order + 1) * static_cast<std::size_t>(order + 1);
}

/// Rows hold x(u_t)^a * y(v_t)^b for the tensor-product basis, column index
/// a * (L + 1) + b. Column 0 is all ones.
Eigen::MatrixXd design_matrix(std::span<const PixelCoord> pixels, int order, int width,
                              int height);

// Calibration measurements: one TDOA row (P values, canonical pair order) per
// target pixel.
struct TargetSet {
  std::vector<PixelCoord> targets;
  Eigen::MatrixXd tdoas;  // T x P
};

// Throws if targets are empty, outside the image, mis-sized, or if any TDOA
// exceeds tau_max (skip that check with tau_max <= 0).
void validate_targets(const TargetSet& set, int width, int height, double tau_max);

/// Polynomial pixel -> TDOA map of order L. Immutable.
class RegressionModel {
 public:
  RegressionModel(int order, Eigen::MatrixXd coeffs, int width, int height);

  int order() const { return order_; }
  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pair_count() const { return static_cast<std::size_t>(coeffs_.cols()); }
  std::size_t mic_count() const { return mic_count_; }
  // (L+1)^2 x P, row a*(L+1)+b.
  const Eigen::MatrixXd& coeffs() const { return coeffs_; }

  Eigen::VectorXd predict(double u, double v) const;

  // TDOAs for every integer pixel, rows in image layout (v-1)*U + (u-1).
  Eigen::MatrixXd predict_all_pixels() const;

 private:
  int order_;
  Eigen::MatrixXd coeffs_;
  int width_;
  int height_;
  std::size_t mic_count_;
};

struct FitOptions {
  // Tikhonov term added to A^T A. Zero reproduces the plain pseudoinverse.
  double ridge = 0.0;
  // Above this condition number the Cholesky solve is replaced by a
  // column-pivoted QR of A.
  double qr_fallback_condition = 1e8;
  // Above this the design is rejected as singular.
  double singular_condition = 1e12;
};

/// Least-squares fit c = (A^T A)^{-1} A^T tau.
///
/// Throws Error(Errc::underdetermined) when T < (L+1)^2 and
/// Error(Errc::singular_design) when A^T A is numerically rank deficient.
RegressionModel fit(const TargetSet& set, int order, int width, int height,
                    const FitOptions& options = {});

// Condition number of A^T A for the given targets (eigenvalue ratio).
double design_condition(std::span<const PixelCoord> pixels, int order, int width, int height);

// RMS over all entries of (A c - tau).
double fit_residual_rms(const RegressionModel& model, const TargetSet& set);

// Plain-text model file: "L M P U V" header line then (L+1)^2 rows of P
// coefficients, 17 significant digits.
void save_regression(const RegressionModel& model, std::ostream& out);
RegressionModel load_regression(std::istream& in);
void save_regression(const RegressionModel& model, const std::string& path);
RegressionModel load_regression(const std::string& path);

}  // namespace acam
