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

#include "acam/raster.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "acam/error.hpp"

namespace acam {

std::vector<std::uint8_t> to_gray8(const AcousticImage& image) {
  std::vector<std::uint8_t> gray(static_cast<std::size_t>(image.values.size()), 0);
  const double peak = image.values.size() ? image.values.maxCoeff() : 0.0;
  if (!(peak > 0.0)) return gray;
  for (Eigen::Index i = 0; i < image.values.size(); ++i) {
    const double level = std::max(image.values[i], 0.0) / peak;
    gray[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(std::lround(255.0 * level));
  }
  return gray;
}

void write_pgm(const AcousticImage& image, std::ostream& out) {
  const auto gray = to_gray8(image);
  out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(gray.data()), static_cast<std::streamsize>(gray.size()));
  if (!out) throw Error(Errc::io, "failed to write PGM");
}

void write_pgm(const AcousticImage& image, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io, "cannot open " + path + " for writing");
  write_pgm(image, out);
}

void write_csv(const AcousticImage& image, std::ostream& out) {
  out << std::setprecision(17);
  for (int v = 1; v <= image.height; ++v) {
    for (int u = 1; u <= image.width; ++u) out << (u > 1 ? "," : "") << image.at(u, v);
    out << '\n';
  }
  if (!out) throw Error(Errc::io, "failed to write CSV");
}

void write_csv(const AcousticImage& image, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io, "cannot open " + path + " for writing");
  write_csv(image, out);
}

}  // namespace acam
