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

#include "acam/svd_phat.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "acam/error.hpp"

namespace acam {

namespace {

constexpr Eigen::Index kRowBlock = 2048;

std::size_t column_count(std::size_t pairs, int frame_size) {
  return pairs * static_cast<std::size_t>(frame_size / 2 + 1);
}

void check_frame(int frame_size) {
  if (frame_size < 2 || frame_size % 2 != 0)
    throw Error(Errc::invalid_argument, "frame size must be even");
}

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw Error(Errc::invalid_argument, "delta must lie in (0, 1)");
}

// Calls visit(first_row, block) for consecutive row blocks of W.
template <typename Source, typename Visit>
void for_each_block(Eigen::Index rows, Source&& source, Visit&& visit) {
  for (Eigen::Index first = 0; first < rows; first += kRowBlock) {
    const Eigen::Index count = std::min(kRowBlock, rows - first);
    visit(first, source(first, count));
  }
}

template <typename Source>
SvdPhatModel factorize(int width, int height, int frame_size, std::size_t pairs, double delta,
                       Source&& source) {
  check_delta(delta);
  const auto rows = static_cast<Eigen::Index>(width) * height;
  const auto cols = static_cast<Eigen::Index>(column_count(pairs, frame_size));

  Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(cols, cols);
  for_each_block(rows, source, [&](Eigen::Index, const Eigen::MatrixXcd& block) {
    gram.selfadjointView<Eigen::Lower>().rankUpdate(block.adjoint());
  });

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram);
  if (eig.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "Hermitian eigensolver failed on the " << cols << "x" << cols << " Gram matrix of W";
    throw Error(Errc::numeric, msg.str());
  }
  // Eigen sorts ascending; singular values are wanted descending.
  const Eigen::VectorXd energies = eig.eigenvalues().reverse().cwiseMax(0.0);
  const double total = static_cast<double>(rows) * static_cast<double>(cols);
  const Eigen::Index rank = select_rank(energies, total, delta);
  const Eigen::MatrixXcd basis = eig.eigenvectors().rowwise().reverse().leftCols(rank);

  Eigen::MatrixXcd left(rows, rank);
  for_each_block(rows, source, [&](Eigen::Index first, const Eigen::MatrixXcd& block) {
    left.middleRows(first, block.rows()).noalias() = block * basis;
  });
  return SvdPhatModel(width, height, frame_size, pairs, delta, std::move(left), basis.adjoint(),
                      energies);
}

template <typename T>
void write_raw(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof value);
}

template <typename T>
T read_raw(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof value);
  if (!in) throw Error(Errc::format, "SVD-PHAT model file is truncated");
  return value;
}

constexpr std::array<char, 8> kMagic = {'A', 'C', 'A', 'M', 'S', 'V', 'D', '\0'};
constexpr std::uint32_t kVersion = 1;

}  // namespace

PixelCoord AcousticImage::argmax() const {
  Eigen::Index best = 0;
  values.maxCoeff(&best);
  return {static_cast<double>(best % width + 1), static_cast<double>(best / width + 1)};
}

Eigen::MatrixXcd steering_rows(const RegressionModel& model, int frame_size, Eigen::Index first_row,
                               Eigen::Index rows) {
  check_frame(frame_size);
  const int width = model.width();
  std::vector<PixelCoord> pixels;
  pixels.reserve(static_cast<std::size_t>(rows));
  for (Eigen::Index r = first_row; r < first_row + rows; ++r)
    pixels.push_back({static_cast<double>(r % width + 1), static_cast<double>(r / width + 1)});
  const Eigen::MatrixXd tdoas =
      design_matrix(pixels, model.order(), model.width(), model.height()) * model.coeffs();

  const int bins = frame_size / 2 + 1;
  const auto pairs = static_cast<Eigen::Index>(model.pair_count());
  Eigen::MatrixXcd out(rows, pairs * bins);
  const double step = 2.0 * std::numbers::pi / frame_size;
  for (Eigen::Index p = 0; p < pairs; ++p)
    for (int f = 0; f < bins; ++f)
      for (Eigen::Index r = 0; r < rows; ++r)
        out(r, p * bins + f) = std::polar(1.0, step * f * tdoas(r, p));
  return out;
}

SteeringMatrix build_steering(const RegressionModel& model, int frame_size) {
  SteeringMatrix w;
  w.width = model.width();
  w.height = model.height();
  w.frame_size = frame_size;
  w.pair_count = model.pair_count();
  w.data = steering_rows(model, frame_size, 0, static_cast<Eigen::Index>(w.width) * w.height);
  return w;
}

SvdPhatModel::SvdPhatModel(int width, int height, int frame_size, std::size_t pair_count,
                           double delta, Eigen::MatrixXcd left, Eigen::MatrixXcd right,
                           Eigen::VectorXd energies)
    : width_(width),
      height_(height),
      frame_size_(frame_size),
      pair_count_(pair_count),
      delta_(delta),
      left_(std::move(left)),
      right_(std::move(right)),
      energies_(std::move(energies)) {
  const auto rows = static_cast<Eigen::Index>(width_) * height_;
  const auto cols = static_cast<Eigen::Index>(column_count(pair_count_, frame_size_));
  if (right_.rows() < 1 || left_.cols() != right_.rows() || left_.rows() != rows ||
      right_.cols() != cols)
    throw Error(Errc::dimension_mismatch, "SVD-PHAT factors do not match the image layout");
}

double SvdPhatModel::total_energy() const {
  return static_cast<double>(width_) * height_ *
         static_cast<double>(column_count(pair_count_, frame_size_));
}

double SvdPhatModel::energy_kept(Eigen::Index rank) const {
  const Eigen::Index n = std::min(rank, energies_.size());
  return energies_.head(n).sum() / total_energy();
}

Eigen::Index select_rank(const Eigen::VectorXd& energies, double total, double delta) {
  check_delta(delta);
  const double target = (1.0 - delta) * total;
  double kept = 0.0;
  for (Eigen::Index k = 0; k < energies.size(); ++k) {
    kept += energies[k];
    if (kept >= target) return k + 1;
  }
  return std::max<Eigen::Index>(energies.size(), 1);
}

SvdPhatModel truncate(const SteeringMatrix& w, double delta) {
  const auto rows = static_cast<Eigen::Index>(w.width) * w.height;
  if (w.data.rows() != rows ||
      w.data.cols() != static_cast<Eigen::Index>(column_count(w.pair_count, w.frame_size)))
    throw Error(Errc::dimension_mismatch, "steering matrix shape does not match its metadata");
  return factorize(w.width, w.height, w.frame_size, w.pair_count, delta,
                   [&](Eigen::Index first, Eigen::Index count) -> Eigen::MatrixXcd {
                     return w.data.middleRows(first, count);
                   });
}

SvdPhatModel truncate(const RegressionModel& model, int frame_size, double delta) {
  check_frame(frame_size);
  return factorize(model.width(), model.height(), frame_size, model.pair_count(), delta,
                   [&](Eigen::Index first, Eigen::Index count) {
                     return steering_rows(model, frame_size, first, count);
                   });
}

AcousticImage image_brute(const SteeringMatrix& w, const Eigen::VectorXcd& x) {
  if (x.size() != w.data.cols()) {
    std::ostringstream msg;
    msg << "supervector has " << x.size() << " entries, steering matrix has " << w.data.cols()
        << " columns";
    throw Error(Errc::dimension_mismatch, msg.str());
  }
  return {w.width, w.height, (w.data * x).real()};
}

AcousticImage image_brute(const RegressionModel& model, int frame_size, const Eigen::VectorXcd& x) {
  const auto rows = static_cast<Eigen::Index>(model.width()) * model.height();
  const auto cols = static_cast<Eigen::Index>(column_count(model.pair_count(), frame_size));
  if (x.size() != cols) throw Error(Errc::dimension_mismatch, "supervector length mismatch");
  AcousticImage image{model.width(), model.height(), Eigen::VectorXd(rows)};
  for_each_block(
      rows, [&](Eigen::Index first, Eigen::Index count) {
        return steering_rows(model, frame_size, first, count);
      },
      [&](Eigen::Index first, const Eigen::MatrixXcd& block) {
        image.values.segment(first, block.rows()) = (block * x).real();
      });
  return image;
}

AcousticImage image_fast(const SvdPhatModel& model, const Eigen::VectorXcd& x) {
  if (x.size() != model.right().cols()) {
    std::ostringstream msg;
    msg << "supervector has " << x.size() << " entries, model expects " << model.right().cols();
    throw Error(Errc::dimension_mismatch, msg.str());
  }
  const Eigen::VectorXcd projected = model.right() * x;
  return {model.width(), model.height(), (model.left() * projected).real()};
}

OpCounts op_counts(std::uint64_t width, std::uint64_t height, std::uint64_t mic_count,
                   std::uint64_t frame_size, std::uint64_t rank) {
  if (width == 0 || height == 0 || mic_count < 2 || frame_size == 0 || rank == 0)
    throw Error(Errc::invalid_argument, "op_counts arguments must be positive (M >= 2)");
  const std::uint64_t pairs = mic_count * (mic_count - 1) / 2;
  const std::uint64_t cols = pairs * (frame_size / 2 + 1);
  OpCounts counts;
  counts.brute = width * height * cols;
  counts.fast = width * height * rank + rank * cols;
  counts.ratio = static_cast<double>(counts.brute) / static_cast<double>(counts.fast);
  return counts;
}

void save_svd_phat(const SvdPhatModel& model, std::ostream& out) {
  out.write(kMagic.data(), kMagic.size());
  write_raw(out, kVersion);
  write_raw(out, static_cast<std::uint32_t>(model.width()));
  write_raw(out, static_cast<std::uint32_t>(model.height()));
  write_raw(out, static_cast<std::uint32_t>(model.frame_size()));
  write_raw(out, static_cast<std::uint32_t>(model.pair_count()));
  write_raw(out, static_cast<std::uint32_t>(model.rank()));
  write_raw(out, static_cast<std::uint32_t>(model.energies().size()));
  write_raw(out, model.delta());
  // Row-major complex doubles, (re, im) interleaved.
  auto write_matrix = [&](const Eigen::MatrixXcd& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        write_raw(out, m(r, c).real());
        write_raw(out, m(r, c).imag());
      }
  };
  write_matrix(model.left());
  write_matrix(model.right());
  for (Eigen::Index k = 0; k < model.energies().size(); ++k) write_raw(out, model.energies()[k]);
  if (!out) throw Error(Errc::io, "failed to write SVD-PHAT model");
}

SvdPhatModel load_svd_phat(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw Error(Errc::format, "not an SVD-PHAT model file");
  const auto version = read_raw<std::uint32_t>(in);
  if (version != kVersion) {
    std::ostringstream msg;
    msg << "unsupported SVD-PHAT model version " << version;
    throw Error(Errc::format, msg.str());
  }
  const auto width = read_raw<std::uint32_t>(in);
  const auto height = read_raw<std::uint32_t>(in);
  const auto frame_size = read_raw<std::uint32_t>(in);
  const auto pairs = read_raw<std::uint32_t>(in);
  const auto rank = read_raw<std::uint32_t>(in);
  const auto energy_count = read_raw<std::uint32_t>(in);
  const auto delta = read_raw<double>(in);
  if (width < 2 || height < 2 || frame_size < 2 || frame_size % 2 || pairs < 1 || rank < 1 ||
      width > 1u << 15 || height > 1u << 15 || frame_size > 1u << 20 || rank > 1u << 20)
    throw Error(Errc::format, "SVD-PHAT model header is inconsistent");
  const auto rows = static_cast<Eigen::Index>(width) * height;
  const auto cols = static_cast<Eigen::Index>(column_count(pairs, static_cast<int>(frame_size)));
  auto read_matrix = [&](Eigen::Index r, Eigen::Index c) {
    Eigen::MatrixXcd m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index j = 0; j < c; ++j) {
        const double re = read_raw<double>(in);
        const double im = read_raw<double>(in);
        m(i, j) = {re, im};
      }
    return m;
  };
  Eigen::MatrixXcd left = read_matrix(rows, rank);
  Eigen::MatrixXcd right = read_matrix(rank, cols);
  Eigen::VectorXd energies(energy_count);
  for (Eigen::Index k = 0; k < energies.size(); ++k) energies[k] = read_raw<double>(in);
  return SvdPhatModel(static_cast<int>(width), static_cast<int>(height),
                      static_cast<int>(frame_size), pairs, delta, std::move(left),
                      std::move(right), std::move(energies));
}

void save_svd_phat(const SvdPhatModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io, "cannot open " + path + " for writing");
  save_svd_phat(model, out);
}

SvdPhatModel load_svd_phat(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open " + path);
  return load_svd_phat(in);
}

}  // namespace acam
