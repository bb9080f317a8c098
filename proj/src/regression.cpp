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

#include "acam/regression.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "acam/error.hpp"
#include "acam/geometry.hpp"

namespace acam {

namespace {

// Fills `row` with x^a y^b, a-major.
void basis_row(double x, double y, int order, double* row) {
  double xa = 1.0;
  for (int a = 0; a <= order; ++a) {
    double yb = 1.0;
    for (int b = 0; b <= order; ++b) {
      row[a * (order + 1) + b] = xa * yb;
      yb *= y;
    }
    xa *= x;
  }
}

void check_order(int order) {
  if (order < 0) throw Error(Errc::invalid_argument, "polynomial order must be non-negative");
}

}  // namespace

Eigen::MatrixXd design_matrix(std::span<const PixelCoord> pixels, int order, int width,
                              int height) {
  check_order(order);
  if (width < 2 || height < 2) throw Error(Errc::invalid_argument, "image must be at least 2x2");
  const auto cols = static_cast<Eigen::Index>(basis_size(order));
  // Row-major scratch so basis_row can write contiguous rows.
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> a(
      static_cast<Eigen::Index>(pixels.size()), cols);
  for (std::size_t t = 0; t < pixels.size(); ++t)
    basis_row(normalize_pixel(pixels[t].u, width), normalize_pixel(pixels[t].v, height), order,
              a.row(static_cast<Eigen::Index>(t)).data());
  return a;
}

void validate_targets(const TargetSet& set, int width, int height, double tau_max) {
  if (set.targets.empty()) throw Error(Errc::invalid_argument, "target set is empty");
  if (set.tdoas.rows() != static_cast<Eigen::Index>(set.targets.size()))
    throw Error(Errc::dimension_mismatch, "TDOA row count does not match target count");
  if (set.tdoas.cols() < 1) throw Error(Errc::dimension_mismatch, "TDOA matrix has no pairs");
  const CameraModel frame(width, height, 0.0);
  for (std::size_t t = 0; t < set.targets.size(); ++t) {
    if (!inside_image(frame, set.targets[t].u, set.targets[t].v)) {
      std::ostringstream msg;
      msg << "target " << t + 1 << " (" << set.targets[t].u << ", " << set.targets[t].v
          << ") is outside the " << width << "x" << height << " image";
      throw Error(Errc::invalid_argument, msg.str());
    }
  }
  if (!set.tdoas.allFinite()) throw Error(Errc::invalid_argument, "TDOA matrix is not finite");
  if (tau_max > 0.0 && set.tdoas.cwiseAbs().maxCoeff() > tau_max) {
    std::ostringstream msg;
    msg << "measured TDOA " << set.tdoas.cwiseAbs().maxCoeff() << " exceeds tau_max " << tau_max;
    throw Error(Errc::invalid_argument, msg.str());
  }
}

RegressionModel::RegressionModel(int order, Eigen::MatrixXd coeffs, int width, int height)
    : order_(order), coeffs_(std::move(coeffs)), width_(width), height_(height) {
  check_order(order_);
  if (width_ < 2 || height_ < 2) throw Error(Errc::invalid_argument, "image must be at least 2x2");
  if (coeffs_.rows() != static_cast<Eigen::Index>(basis_size(order_)))
    throw Error(Errc::dimension_mismatch, "coefficient matrix must have (L+1)^2 rows");
  mic_count_ = mic_count_for_pairs(static_cast<std::size_t>(coeffs_.cols()));
  if (mic_count_ == 0)
    throw Error(Errc::dimension_mismatch, "coefficient column count is not M(M-1)/2");
}

Eigen::VectorXd RegressionModel::predict(double u, double v) const {
  Eigen::VectorXd basis(coeffs_.rows());
  basis_row(normalize_pixel(u, width_), normalize_pixel(v, height_), order_, basis.data());
  return coeffs_.transpose() * basis;
}

Eigen::MatrixXd RegressionModel::predict_all_pixels() const {
  std::vector<PixelCoord> pixels;
  pixels.reserve(static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_));
  for (int v = 1; v <= height_; ++v)
    for (int u = 1; u <= width_; ++u) pixels.push_back({double(u), double(v)});
  return design_matrix(pixels, order_, width_, height_) * coeffs_;
}

double design_condition(std::span<const PixelCoord> pixels, int order, int width, int height) {
  const Eigen::MatrixXd a = design_matrix(pixels, order, width, height);
  const Eigen::MatrixXd gram = a.transpose() * a;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const double hi = eig.eigenvalues().maxCoeff();
  const double lo = eig.eigenvalues().minCoeff();
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

RegressionModel fit(const TargetSet& set, int order, int width, int height,
                    const FitOptions& options) {
  check_order(order);
  validate_targets(set, width, height, 0.0);
  if (options.ridge < 0.0) throw Error(Errc::invalid_argument, "ridge must be non-negative");
  const std::size_t terms = basis_size(order);
  if (set.targets.size() < terms) {
    std::ostringstream msg;
    msg << "order " << order << " needs at least " << terms << " targets, got "
        << set.targets.size();
    throw Error(Errc::underdetermined, msg.str());
  }

  const Eigen::MatrixXd a = design_matrix(set.targets, order, width, height);
  Eigen::MatrixXd normal = a.transpose() * a;
  normal.diagonal().array() += options.ridge;
  const Eigen::MatrixXd rhs = a.transpose() * set.tdoas;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(normal, Eigen::EigenvaluesOnly);
  const double hi = eig.eigenvalues().maxCoeff();
  const double lo = eig.eigenvalues().minCoeff();
  const double condition = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();

  if (condition > options.singular_condition) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    std::ostringstream msg;
    msg << "design matrix for order " << order << " has numerical rank " << qr.rank() << " of "
        << terms << " (condition of A^T A " << condition
        << "); targets do not span the image in both axes";
    throw Error(Errc::singular_design, msg.str());
  }

  Eigen::MatrixXd coeffs;
  if (condition > options.qr_fallback_condition) {
    if (options.ridge > 0.0) {
      coeffs = normal.colPivHouseholderQr().solve(rhs);
    } else {
      coeffs = a.colPivHouseholderQr().solve(set.tdoas);
    }
  } else {
    Eigen::LLT<Eigen::MatrixXd> llt(normal);
    if (llt.info() != Eigen::Success)
      throw Error(Errc::singular_design, "normal matrix is not positive definite");
    coeffs = llt.solve(rhs);
  }
  if (!coeffs.allFinite()) throw Error(Errc::numeric, "regression produced non-finite coefficients");
  return RegressionModel(order, std::move(coeffs), width, height);
}

double fit_residual_rms(const RegressionModel& model, const TargetSet& set) {
  const Eigen::MatrixXd a =
      design_matrix(set.targets, model.order(), model.width(), model.height());
  const Eigen::MatrixXd r = a * model.coeffs() - set.tdoas;
  return std::sqrt(r.squaredNorm() / static_cast<double>(r.size()));
}

void save_regression(const RegressionModel& model, std::ostream& out) {
  out << model.order() << ' ' << model.mic_count() << ' ' << model.pair_count() << ' '
      << model.width() << ' ' << model.height() << '\n';
  out << std::setprecision(17);
  const auto& c = model.coeffs();
  for (Eigen::Index r = 0; r < c.rows(); ++r) {
    for (Eigen::Index p = 0; p < c.cols(); ++p) out << (p ? " " : "") << c(r, p);
    out << '\n';
  }
  if (!out) throw Error(Errc::io, "failed to write regression model");
}

RegressionModel load_regression(std::istream& in) {
  long order = -1, mics = 0, pairs = 0, width = 0, height = 0;
  if (!(in >> order >> mics >> pairs >> width >> height))
    throw Error(Errc::format, "regression model header must be 'L M P U V'");
  if (order < 0 || order > 64 || mics < 2 || pairs != mics * (mics - 1) / 2)
    throw Error(Errc::format, "regression model header is inconsistent");
  Eigen::MatrixXd coeffs(static_cast<Eigen::Index>(basis_size(static_cast<int>(order))), pairs);
  for (Eigen::Index r = 0; r < coeffs.rows(); ++r)
    for (Eigen::Index p = 0; p < coeffs.cols(); ++p)
      if (!(in >> coeffs(r, p)))
        throw Error(Errc::format, "regression model has too few coefficients");
  std::string extra;
  if (in >> extra) throw Error(Errc::format, "regression model has trailing data");
  return RegressionModel(static_cast<int>(order), std::move(coeffs), static_cast<int>(width),
                         static_cast<int>(height));
}

void save_regression(const RegressionModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io, "cannot open " + path + " for writing");
  save_regression(model, out);
}

RegressionModel load_regression(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open " + path);
  return load_regression(in);
}

}  // namespace acam
