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

#include "acam/render.hpp"

#include <sstream>

#include "acam/error.hpp"

namespace acam {

Renderer::Renderer(RegressionModel model, int frame_size, double delta, Window window)
    : model_(std::move(model)), svd_(truncate(model_, frame_size, delta)), window_(window) {}

Renderer::Renderer(RegressionModel model, SvdPhatModel svd, Window window)
    : model_(std::move(model)), svd_(std::move(svd)), window_(window) {
  if (svd_.width() != model_.width() || svd_.height() != model_.height() ||
      svd_.pair_count() != model_.pair_count())
    throw Error(Errc::dimension_mismatch, "SVD-PHAT model does not match the regression model");
}

Eigen::VectorXcd Renderer::supervector(const Eigen::Ref<const Eigen::MatrixXd>& block) const {
  if (block.rows() != static_cast<Eigen::Index>(model_.mic_count()) ||
      block.cols() != svd_.frame_size()) {
    std::ostringstream msg;
    msg << "expected a " << model_.mic_count() << "x" << svd_.frame_size() << " block, got "
        << block.rows() << "x" << block.cols();
    throw Error(Errc::dimension_mismatch, msg.str());
  }
  return phat_supervector(stft_frame(block, window_));
}

AcousticImage Renderer::render(const Eigen::Ref<const Eigen::MatrixXd>& block) const {
  return image_fast(svd_, supervector(block));
}

AcousticImage Renderer::render_brute(const Eigen::Ref<const Eigen::MatrixXd>& block) const {
  return image_brute(model_, svd_.frame_size(), supervector(block));
}

}  // namespace acam
