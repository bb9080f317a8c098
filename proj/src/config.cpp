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

#include "acam/config.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "acam/error.hpp"

namespace acam {

namespace {

std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

[[noreturn]] void bad_line(const char* what, int line_no, const std::string& line) {
  std::ostringstream msg;
  msg << what << " line " << line_no << ": '" << line << "'";
  throw Error(Errc::format, msg.str());
}

// Reads exactly `count` numbers from the rest of the stream.
bool read_numbers(std::istringstream& in, double* out, int count) {
  for (int i = 0; i < count; ++i)
    if (!(in >> out[i])) return false;
  std::string extra;
  return !(in >> extra);
}

}  // namespace

ArrayGeometry parse_geometry(std::istream& in) {
  double sample_rate = 16000.0;
  double speed = 343.0;
  double rho = ArrayGeometry::kDefaultRho;
  std::vector<Eigen::Vector3d> mics;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(strip_comment(line));
    std::string key;
    if (!(fields >> key)) continue;
    double values[3];
    if (key == "sample_rate" || key == "speed_of_sound" || key == "rho") {
      if (!read_numbers(fields, values, 1)) bad_line("malformed geometry", line_no, line);
      (key == "sample_rate" ? sample_rate : key == "rho" ? rho : speed) = values[0];
    } else if (key == "mic") {
      if (!read_numbers(fields, values, 3)) bad_line("malformed geometry", line_no, line);
      mics.emplace_back(values[0], values[1], values[2]);
    } else {
      std::istringstream row(strip_comment(line));
      if (!read_numbers(row, values, 3)) bad_line("unrecognized geometry", line_no, line);
      mics.emplace_back(values[0], values[1], values[2]);
    }
  }
  try {
    return ArrayGeometry(std::move(mics), sample_rate, speed, rho);
  } catch (const Error& e) {
    throw Error(Errc::format, std::string("invalid geometry: ") + e.what());
  }
}

ArrayGeometry load_geometry(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open geometry file " + path);
  return parse_geometry(in);
}

void save_geometry(const ArrayGeometry& geometry, std::ostream& out) {
  out << std::setprecision(17);
  out << "sample_rate " << geometry.sample_rate() << '\n'
      << "speed_of_sound " << geometry.speed_of_sound() << '\n'
      << "rho " << geometry.rho() << '\n';
  for (const auto& r : geometry.mics())
    out << "mic " << r.x() << ' ' << r.y() << ' ' << r.z() << '\n';
}

std::vector<PixelCoord> parse_targets(std::istream& in) {
  std::vector<PixelCoord> targets;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(strip_comment(line));
    std::string probe;
    if (!(fields >> probe)) continue;
    std::istringstream row(strip_comment(line));
    double uv[2];
    if (!read_numbers(row, uv, 2)) bad_line("malformed targets", line_no, line);
    targets.push_back({uv[0], uv[1]});
  }
  return targets;
}

std::vector<PixelCoord> load_targets(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open targets file " + path);
  return parse_targets(in);
}

void save_targets(const std::vector<PixelCoord>& targets, std::ostream& out) {
  out << std::setprecision(17);
  for (const auto& t : targets) out << t.u << ' ' << t.v << '\n';
}

}  // namespace acam
