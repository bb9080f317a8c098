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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "acam/svd_phat.hpp"

namespace acam {

// 8-bit grayscale: max(Y, 0) / max(Y) * 255, rounded. An image with no
// positive value maps to all zeros.
std::vector<std::uint8_t> to_gray8(const AcousticImage& image);

// Binary PGM (P5), width U, height V, rows in image layout.
void write_pgm(const AcousticImage& image, std::ostream& out);
void write_pgm(const AcousticImage& image, const std::string& path);

// V lines of U comma-separated raw values, 17 significant digits.
void write_csv(const AcousticImage& image, std::ostream& out);
void write_csv(const AcousticImage& image, const std::string& path);

}  // namespace acam
