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

#include "acam/synth.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

#include "acam/error.hpp"
#include "fft.hpp"

namespace acam {

namespace {

[[noreturn]] void bad_event(int line_no, const std::string& line, const std::string& why) {
  std::ostringstream msg;
  msg << "source script line " << line_no << " (" << why << "): '" << line << "'";
  throw Error(Errc::format, msg.str());
}

}  // namespace

std::vector<SourceEvent> parse_source_script(std::istream& in) {
  std::vector<SourceEvent> events;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    std::istringstream fields(hash == std::string::npos ? line : line.substr(0, hash));
    std::string kind;
    if (!(fields >> kind)) continue;
    SourceEvent e;
    if (!(fields >> e.duration_s) || !(e.duration_s > 0.0) || !std::isfinite(e.duration_s))
      bad_event(line_no, line, "duration must be a positive number");
    if (kind == "silence") {
      e.kind = SourceEvent::Kind::silence;
    } else if (kind == "white" || kind == "tone") {
      e.kind = kind == "white" ? SourceEvent::Kind::white : SourceEvent::Kind::tone;
      if (!(fields >> e.position.x() >> e.position.y() >> e.position.z()) ||
          !e.position.allFinite())
        bad_event(line_no, line, "expected x y z");
      if (e.kind == SourceEvent::Kind::tone) {
        if (!(fields >> e.frequency_hz) || !(e.frequency_hz > 0.0))
          bad_event(line_no, line, "tone needs a positive frequency");
        e.amplitude = kDefaultToneAmplitude;
      } else {
        e.amplitude = kDefaultWhiteAmplitude;
      }
      double amplitude;
      if (fields >> amplitude) {
        if (!(amplitude >= 0.0)) bad_event(line_no, line, "amplitude must be non-negative");
        e.amplitude = amplitude;
      }
    } else {
      bad_event(line_no, line, "unknown event kind '" + kind + "'");
    }
    std::string extra;
    fields.clear();
    if (fields >> extra) bad_event(line_no, line, "trailing fields");
    events.push_back(e);
  }
  return events;
}

std::vector<SourceEvent> load_source_script(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open source script " + path);
  return parse_source_script(in);
}

void save_source_script(std::span<const SourceEvent> events, std::ostream& out) {
  out << std::setprecision(17);
  for (const auto& e : events) {
    switch (e.kind) {
      case SourceEvent::Kind::silence:
        out << "silence " << e.duration_s << '\n';
        break;
      case SourceEvent::Kind::white:
        out << "white " << e.duration_s << ' ' << e.position.x() << ' ' << e.position.y() << ' '
            << e.position.z() << ' ' << e.amplitude << '\n';
        break;
      case SourceEvent::Kind::tone:
        out << "tone " << e.duration_s << ' ' << e.position.x() << ' ' << e.position.y() << ' '
            << e.position.z() << ' ' << e.frequency_hz << ' ' << e.amplitude << '\n';
        break;
    }
  }
}

Eigen::VectorXd fractional_delay(const Eigen::VectorXd& signal, double delay, Eigen::Index length) {
  if (!std::isfinite(delay)) throw Error(Errc::invalid_argument, "delay must be finite");
  const Eigen::Index span = std::max(signal.size(), length) + static_cast<Eigen::Index>(std::ceil(std::abs(delay)));
  // Room for the sinc tails so the circular shift does not wrap audible energy.
  const auto n = static_cast<int>(std::bit_ceil(static_cast<std::uint64_t>(span + 256)));
  std::vector<double> time(static_cast<std::size_t>(n), 0.0);
  std::copy(signal.data(), signal.data() + signal.size(), time.begin());
  std::vector<std::complex<double>> spec;
  detail::rfft(time, spec);
  const double step = -2.0 * std::numbers::pi * delay / n;
  for (int f = 0; f <= n / 2; ++f) spec[static_cast<std::size_t>(f)] *= std::polar(1.0, step * f);
  // The Nyquist bin of a real signal must stay real.
  spec[static_cast<std::size_t>(n / 2)] = spec[static_cast<std::size_t>(n / 2)].real();
  detail::irfft(spec, time, n);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(length);
  const Eigen::Index copy = std::min<Eigen::Index>(length, n);
  out.head(copy) = Eigen::Map<const Eigen::VectorXd>(time.data(), copy);
  return out;
}

MultichannelAudio synthesize(const ArrayGeometry& geometry, std::span<const SourceEvent> events,
                             std::uint64_t seed) {
  const double fs = geometry.sample_rate();
  if (std::abs(fs - std::round(fs)) > 1e-9)
    throw Error(Errc::invalid_argument, "synthesis needs an integer sample rate");
  std::vector<Eigen::Index> lengths;
  Eigen::Index total = 0;
  for (const auto& e : events) {
    lengths.push_back(static_cast<Eigen::Index>(std::llround(e.duration_s * fs)));
    total += lengths.back();
  }
  const auto mics = static_cast<Eigen::Index>(geometry.mic_count());
  MultichannelAudio audio;
  audio.sample_rate = static_cast<int>(std::lround(fs));
  audio.samples = Eigen::MatrixXd::Zero(mics, total);

  std::mt19937_64 rng(seed);
  Eigen::Index offset = 0;
  for (std::size_t ev = 0; ev < events.size(); ++ev) {
    const auto& e = events[ev];
    const Eigen::Index n = lengths[ev];
    if (e.kind == SourceEvent::Kind::silence || n == 0) {
      offset += n;
      continue;
    }
    Eigen::VectorXd source(n);
    if (e.kind == SourceEvent::Kind::white) {
      std::normal_distribution<double> noise(0.0, e.amplitude);
      for (Eigen::Index t = 0; t < n; ++t) source[t] = noise(rng);
    } else {
      for (Eigen::Index t = 0; t < n; ++t)
        source[t] = e.amplitude * std::sin(2.0 * std::numbers::pi * e.frequency_hz * t / fs);
    }

    std::vector<double> dist(static_cast<std::size_t>(mics));
    for (Eigen::Index m = 0; m < mics; ++m) {
      dist[static_cast<std::size_t>(m)] = (e.position - geometry.mics()[static_cast<std::size_t>(m)]).norm();
      if (dist[static_cast<std::size_t>(m)] == 0.0)
        throw Error(Errc::domain, "source event coincides with a microphone");
    }
    const double nearest = *std::min_element(dist.begin(), dist.end());
    // The delayed copy may ring past the event; let it spill into the next
    // one but not past the end of the recording.
    const Eigen::Index room = std::min<Eigen::Index>(total - offset, n + 64);
    for (Eigen::Index m = 0; m < mics; ++m) {
      const double delay = geometry.samples_per_meter() * (dist[static_cast<std::size_t>(m)] - nearest);
      audio.samples.row(m).segment(offset, room) += fractional_delay(source, delay, room).transpose();
    }
    offset += n;
  }
  return audio;
}

}  // namespace acam
