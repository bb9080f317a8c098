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

#include <Eigen/Core>

#include "acam/phat.hpp"
#include "acam/regression.hpp"
#include "acam/svd_phat.hpp"

namespace acam {

/// Streaming acoustic imager: truncates W once, then turns M x N sample
/// blocks into images with the fast path.
class Renderer {
 public:
  Renderer(RegressionModel model, int frame_size, double delta, Window window = Window::hann);
  Renderer(RegressionModel model, SvdPhatModel svd, Window window = Window::hann);

  const RegressionModel& regression() const { return model_; }
  const SvdPhatModel& svd() const { return svd_; }
  int frame_size() const { return svd_.frame_size(); }

  Eigen::VectorXcd supervector(const Eigen::Ref<const Eigen::MatrixXd>& block) const;
  AcousticImage render(const Eigen::Ref<const Eigen::MatrixXd>& block) const;
  // Exact Re{W X}, W streamed from the regression model.
  AcousticImage render_brute(const Eigen::Ref<const Eigen::MatrixXd>& block) const;

 private:
  RegressionModel model_;
  SvdPhatModel svd_;
  Window window_;
};

}  // namespace acam
