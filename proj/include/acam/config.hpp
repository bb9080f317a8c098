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

#include <iosfwd>
#include <string>
#include <vector>

#include "acam/camera.hpp"
#include "acam/geometry.hpp"

namespace acam {

/// Geometry file: one directive per line, '#' starts a comment.
///
///   sample_rate 16000        (default 16000)
///   speed_of_sound 343       (default 343)
///   rho 0.1                  (default 0.1)
///   mic <x> <y> <z>          (meters; one per microphone, in order)
///   <x> <y> <z>              (bare rows are microphones too)
ArrayGeometry parse_geometry(std::istream& in);
ArrayGeometry load_geometry(const std::string& path);
void save_geometry(const ArrayGeometry& geometry, std::ostream& out);

// Targets file: one "u v" row per target (1-based pixels), '#' comments.
std::vector<PixelCoord> parse_targets(std::istream& in);
std::vector<PixelCoord> load_targets(const std::string& path);
void save_targets(const std::vector<PixelCoord>& targets, std::ostream& out);

}  // namespace acam
