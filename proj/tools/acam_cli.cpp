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

// acam: command-line front end over the C API.
//
//   acam simulate   distortion / polynomial-order RMSE study
//   acam synth      render a source script to a multichannel WAV
//   acam calibrate  measure target TDOAs from a WAV and fit the pixel map
//   acam render     stream a WAV through SVD-PHAT, one PGM + CSV per frame
//   acam opcount    complex multiplications, brute force vs SVD-PHAT

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "acam/acam.h"

namespace {

// Non-zero exit status carrying the library's message.
struct CommandError {
  int status;
  std::string message;
};

void check(acam_status status, const std::string& context) {
  if (status == ACAM_OK) return;
  std::string message = context + ": " + acam_status_string(status);
  if (*acam_last_error()) message += " (" + std::string(acam_last_error()) + ")";
  throw CommandError{static_cast<int>(status), message};
}

template <typename T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using Geometry = std::unique_ptr<acam_geometry, Deleter<acam_geometry, acam_geometry_destroy>>;
using Regression = std::unique_ptr<acam_regression, Deleter<acam_regression, acam_regression_destroy>>;
using Audio = std::unique_ptr<acam_audio, Deleter<acam_audio, acam_audio_destroy>>;
using RendererPtr = std::unique_ptr<acam_renderer, Deleter<acam_renderer, acam_renderer_destroy>>;
using Report = std::unique_ptr<acam_study_report, Deleter<acam_study_report, acam_study_report_destroy>>;

Geometry load_geometry(const std::string& path) {
  acam_geometry* g = nullptr;
  if (path.empty()) {
    check(acam_geometry_nominal(&g), "nominal geometry");
  } else {
    check(acam_geometry_load(path.c_str(), &g), "loading geometry " + path);
  }
  return Geometry(g);
}

Audio load_audio(const std::string& path) {
  acam_audio* a = nullptr;
  check(acam_audio_load_wav(path.c_str(), &a), "reading " + path);
  return Audio(a);
}

std::vector<double> read_targets(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CommandError{ACAM_ERR_IO, "cannot open targets file " + path};
  std::vector<double> uv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    double u, v;
    if (!(fields >> u)) continue;
    std::string extra;
    if (!(fields >> v) || (fields >> extra))
      throw CommandError{ACAM_ERR_FORMAT, path + ":" + std::to_string(line_no) + ": expected 'u v'"};
    uv.push_back(u);
    uv.push_back(v);
  }
  return uv;
}

struct SimulateArgs {
  std::string geometry;
  int width = 320;
  int height = 240;
  std::vector<double> k_values{-0.05, -0.025, 0.0, 0.025, 0.05};
  std::vector<int> orders{1, 2, 3, 4};
  std::uint64_t q = 1000000;
  std::uint64_t seed = 1;
  int grid = 5;
  double plane_z = 1.0;
  std::string out;
};

int run_simulate(const SimulateArgs& args) {
  Geometry geometry = load_geometry(args.geometry);
  acam_study_config cfg;
  acam_study_config_default(&cfg);
  cfg.width = args.width;
  cfg.height = args.height;
  cfg.geometry = geometry.get();
  cfg.orders = args.orders.data();
  cfg.order_count = args.orders.size();
  cfg.k_values = args.k_values.data();
  cfg.k_count = args.k_values.size();
  cfg.grid = args.grid;
  cfg.q = args.q;
  cfg.plane_z = args.plane_z;
  cfg.seed = args.seed;
  acam_study_report* raw = nullptr;
  check(acam_study_run(&cfg, &raw), "simulation study");
  Report report(raw);

  std::ofstream file;
  if (!args.out.empty()) {
    file.open(args.out);
    if (!file) throw CommandError{ACAM_ERR_IO, "cannot open " + args.out};
  }
  std::ostream& out = args.out.empty() ? std::cout : file;
  out << "k,L,rmse,retained\n";
  out.precision(10);
  for (size_t i = 0; i < acam_study_report_entry_count(report.get()); ++i) {
    double k, rmse;
    int order;
    std::uint64_t retained;
    check(acam_study_report_entry(report.get(), i, &k, &order, &rmse, &retained), "report");
    out << k << ',' << order << ',' << rmse << ',' << retained << '\n';
  }
  return 0;
}

struct SynthArgs {
  std::string geometry;
  std::string script;
  std::string out;
  std::uint64_t seed = 1;
  bool float32 = false;
};

int run_synth(const SynthArgs& args) {
  Geometry geometry = load_geometry(args.geometry);
  acam_audio* raw = nullptr;
  check(acam_synthesize_script(geometry.get(), args.script.c_str(), args.seed, &raw),
        "synthesizing " + args.script);
  Audio audio(raw);
  check(acam_audio_save_wav(audio.get(), args.out.c_str(), args.float32 ? ACAM_WAV_FLOAT32 : ACAM_WAV_PCM16),
        "writing " + args.out);
  std::cerr << "wrote " << args.out << ": " << acam_audio_channels(audio.get()) << " channels, "
            << acam_audio_frames(audio.get()) << " frames at " << acam_audio_sample_rate(audio.get())
            << " Hz\n";
  return 0;
}

struct CalibrateArgs {
  std::string audio;
  std::string geometry;
  std::string targets;
  std::string out;
  int order = 3;
  int width = 320;
  int height = 240;
  int frame = 512;
  double threshold = 0.01;
  int frames_per_target = 20;
  int upsample = 4;
};

int run_calibrate(const CalibrateArgs& args) {
  Geometry geometry = load_geometry(args.geometry);
  Audio audio = load_audio(args.audio);
  const std::vector<double> uv = read_targets(args.targets);
  const size_t targets = uv.size() / 2;
  if (targets == 0) throw CommandError{ACAM_ERR_FORMAT, args.targets + ": no targets listed"};
  const size_t pairs = acam_geometry_pair_count(geometry.get());
  if (acam_audio_channels(audio.get()) != acam_geometry_mic_count(geometry.get()))
    throw CommandError{ACAM_ERR_DIMENSION_MISMATCH,
                       args.audio + " has " + std::to_string(acam_audio_channels(audio.get())) +
                           " channels, geometry has " +
                           std::to_string(acam_geometry_mic_count(geometry.get())) + " mics"};

  acam_detect_options detect;
  acam_detect_options_default(&detect);
  detect.frame_size = args.frame;
  detect.on_threshold = args.threshold;
  detect.frames_per_target = args.frames_per_target;
  detect.upsample = args.upsample;
  std::vector<double> tdoas(targets * pairs);
  check(acam_measure_targets(audio.get(), geometry.get(), &detect, targets, tdoas.data(), tdoas.size()),
        "measuring targets");

  const size_t terms = static_cast<size_t>(args.order + 1) * static_cast<size_t>(args.order + 1);
  if (targets == terms)
    std::cerr << "warning: " << targets << " targets exactly determine order " << args.order
              << "; the fit interpolates the measurements\n";
  acam_regression* raw = nullptr;
  check(acam_regression_fit(uv.data(), targets, tdoas.data(), pairs, args.order, args.width,
                            args.height, 0.0, &raw),
        "fitting order " + std::to_string(args.order));
  Regression model(raw);
  double residual = 0.0;
  check(acam_regression_residual(model.get(), uv.data(), targets, tdoas.data(), &residual), "residual");
  check(acam_regression_save(model.get(), args.out.c_str()), "writing " + args.out);
  std::cout << "targets " << targets << ", order " << args.order << ", fit residual rms "
            << residual << " samples\n";
  return 0;
}

struct RenderArgs {
  std::string audio;
  std::string model;
  std::string geometry;
  std::string out_dir;
  int frame = 512;
  int hop = 0;
  double delta = 1e-5;
  bool verify = false;
  bool no_csv = false;
  std::string save_svd;
  std::string load_svd;
};

int run_render(const RenderArgs& args) {
  Geometry geometry = load_geometry(args.geometry);
  Audio audio = load_audio(args.audio);
  acam_regression* raw_model = nullptr;
  check(acam_regression_load(args.model.c_str(), &raw_model), "loading model " + args.model);
  Regression model(raw_model);

  if (acam_audio_sample_rate(audio.get()) != acam_geometry_sample_rate(geometry.get())) {
    std::ostringstream msg;
    msg << "sample rate mismatch: " << args.audio << " is " << acam_audio_sample_rate(audio.get())
        << " Hz, geometry is " << acam_geometry_sample_rate(geometry.get()) << " Hz";
    throw CommandError{ACAM_ERR_CONFIGURATION, msg.str()};
  }
  const size_t mics = acam_audio_channels(audio.get());
  if (mics != acam_geometry_mic_count(geometry.get()) ||
      mics * (mics - 1) / 2 != acam_regression_pair_count(model.get()))
    throw CommandError{ACAM_ERR_DIMENSION_MISMATCH, "channel count does not match geometry/model"};

  const auto start = std::chrono::steady_clock::now();
  acam_renderer* raw_renderer = nullptr;
  if (!args.load_svd.empty()) {
    check(acam_renderer_create_from_svd(model.get(), args.load_svd.c_str(), ACAM_WINDOW_HANN, &raw_renderer),
          "loading " + args.load_svd);
  } else {
    check(acam_renderer_create(model.get(), args.frame, args.delta, ACAM_WINDOW_HANN, &raw_renderer),
          "building SVD-PHAT model");
  }
  RendererPtr renderer(raw_renderer);
  const double setup_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!args.save_svd.empty())
    check(acam_renderer_save_svd(renderer.get(), args.save_svd.c_str()), "writing " + args.save_svd);

  const int n = acam_renderer_frame_size(renderer.get());
  const int width = acam_regression_width(model.get());
  const int height = acam_regression_height(model.get());
  const size_t rank = acam_renderer_rank(renderer.get());
  acam_op_counts counts;
  check(acam_op_counts_compute(width, height, mics, n, rank, &counts), "op counts");
  std::cerr << "rank K=" << rank << " (energy kept " << acam_renderer_energy_kept(renderer.get())
            << "), setup " << setup_s << " s; complex mults per frame: brute " << counts.brute
            << ", SVD-PHAT " << counts.fast << ", ratio " << counts.ratio << '\n';

  std::filesystem::create_directories(args.out_dir);
  const size_t hop = args.hop > 0 ? static_cast<size_t>(args.hop) : static_cast<size_t>(n);
  const size_t total = acam_audio_frames(audio.get());
  std::vector<double> block(mics * static_cast<size_t>(n));
  std::vector<double> image(static_cast<size_t>(width) * static_cast<size_t>(height));
  int status = 0;
  size_t index = 0;
  for (size_t first = 0; first + static_cast<size_t>(n) <= total; first += hop, ++index) {
    check(acam_audio_read_block(audio.get(), first, static_cast<size_t>(n), block.data(), block.size()),
          "reading frame");
    const auto t0 = std::chrono::steady_clock::now();
    check(acam_renderer_image(renderer.get(), block.data(), block.size(), image.data(), image.size()),
          "rendering frame " + std::to_string(index));
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    char name[32];
    std::snprintf(name, sizeof name, "frame_%05zu", index);
    const std::string base = (std::filesystem::path(args.out_dir) / name).string();
    check(acam_image_write_pgm(image.data(), width, height, (base + ".pgm").c_str()), "writing PGM");
    if (!args.no_csv)
      check(acam_image_write_csv(image.data(), width, height, (base + ".csv").c_str()), "writing CSV");
    std::cerr << "frame " << index << " @" << first << ": " << ms << " ms\n";

    if (args.verify && index == 0) {
      std::vector<double> brute(image.size());
      check(acam_renderer_image_brute(renderer.get(), block.data(), block.size(), brute.data(), brute.size()),
            "brute-force image");
      double diff2 = 0.0, ref2 = 0.0, worst = 0.0;
      for (size_t i = 0; i < image.size(); ++i) {
        const double d = image[i] - brute[i];
        diff2 += d * d;
        ref2 += brute[i] * brute[i];
        worst = std::max(worst, std::abs(d));
      }
      const double rel = ref2 > 0.0 ? std::sqrt(diff2 / ref2) : std::sqrt(diff2);
      const double bound = 1e-2 * static_cast<double>(acam_regression_pair_count(model.get())) * (n / 2 + 1);
      const bool ok = worst <= bound;
      std::cerr << "verify: max |fast - brute| " << worst << " (bound " << bound
                << "), relative Frobenius " << rel << (ok ? " ok" : " FAILED") << '\n';
      if (!ok) status = 1;
    }
  }
  std::cerr << "rendered " << index << " frames into " << args.out_dir << '\n';
  return status;
}

struct OpcountArgs {
  std::uint64_t width = 320;
  std::uint64_t height = 240;
  std::uint64_t mics = 4;
  std::uint64_t frame = 512;
  std::uint64_t rank = 32;
};

int run_opcount(const OpcountArgs& args) {
  acam_op_counts counts;
  check(acam_op_counts_compute(args.width, args.height, args.mics, args.frame, args.rank, &counts),
        "op counts");
  std::cout << "brute " << counts.brute << "\nfast " << counts.fast << "\nratio " << counts.ratio << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acoustic camera calibration and SVD-PHAT imaging"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Polynomial-order vs distortion RMSE study");
  simulate->add_option("--geometry", sim.geometry, "Array geometry file (default: nominal square)");
  simulate->add_option("--width", sim.width, "Image width U");
  simulate->add_option("--height", sim.height, "Image height V");
  simulate->add_option("--k-list", sim.k_values, "Distortion coefficients")->delimiter(',');
  simulate->add_option("--l-list", sim.orders, "Polynomial orders")->delimiter(',');
  simulate->add_option("--q", sim.q, "Evaluation points before inside-image filtering");
  simulate->add_option("--seed", sim.seed, "RNG seed");
  simulate->add_option("--grid", sim.grid, "Targets per axis");
  simulate->add_option("--plane-z", sim.plane_z, "Plane distance in meters");
  simulate->add_option("--out", sim.out, "CSV output (default stdout)");

  SynthArgs syn;
  auto* synth = app.add_subcommand("synth", "Render a source script to a WAV");
  synth->add_option("--geometry", syn.geometry, "Array geometry file (default: nominal square)");
  synth->add_option("--script", syn.script, "Source script")->required();
  synth->add_option("--out", syn.out, "Output WAV")->required();
  synth->add_option("--seed", syn.seed, "Noise seed");
  synth->add_flag("--float", syn.float32, "Write 32-bit float instead of 16-bit PCM");

  CalibrateArgs cal;
  auto* calibrate = app.add_subcommand("calibrate", "Fit the pixel -> TDOA map from a recording");
  calibrate->add_option("--audio", cal.audio, "Calibration WAV")->required();
  calibrate->add_option("--geometry", cal.geometry, "Array geometry file (default: nominal square)");
  calibrate->add_option("--targets", cal.targets, "Target pixels, one 'u v' per line")->required();
  calibrate->add_option("--order", cal.order, "Polynomial order L");
  calibrate->add_option("--out", cal.out, "Model file to write")->required();
  calibrate->add_option("--width", cal.width, "Image width U");
  calibrate->add_option("--height", cal.height, "Image height V");
  calibrate->add_option("--frame", cal.frame, "Frame size N");
  calibrate->add_option("--threshold", cal.threshold, "Detector on-threshold (frame RMS)");
  calibrate->add_option("--frames-per-target", cal.frames_per_target, "Frames in each median");
  calibrate->add_option("--upsample", cal.upsample, "GCC-PHAT lag grid refinement");

  RenderArgs ren;
  auto* render = app.add_subcommand("render", "Acoustic images for every frame of a WAV");
  render->add_option("--audio", ren.audio, "Input WAV")->required();
  render->add_option("--model", ren.model, "Regression model file")->required();
  render->add_option("--geometry", ren.geometry, "Array geometry file (default: nominal square)");
  render->add_option("--out", ren.out_dir, "Output directory")->required();
  render->add_option("--frame", ren.frame, "Frame size N");
  render->add_option("--hop", ren.hop, "Frame hop in samples (default N)");
  render->add_option("--delta", ren.delta, "Discarded energy fraction for the rank choice");
  render->add_flag("--verify", ren.verify, "Check the first frame against the brute-force image");
  render->add_flag("--no-csv", ren.no_csv, "Skip the raw CSV per frame");
  render->add_option("--save-svd", ren.save_svd, "Write the factorization to this file");
  render->add_option("--svd", ren.load_svd, "Reuse a saved factorization");

  OpcountArgs ops;
  auto* opcount = app.add_subcommand("opcount", "Complex multiplications per image");
  opcount->add_option("--width", ops.width, "Image width U");
  opcount->add_option("--height", ops.height, "Image height V");
  opcount->add_option("--mics", ops.mics, "Microphones M");
  opcount->add_option("--frame", ops.frame, "Frame size N");
  opcount->add_option("--rank", ops.rank, "Rank K");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) return run_simulate(sim);
    if (*synth) return run_synth(syn);
    if (*calibrate) return run_calibrate(cal);
    if (*render) return run_render(ren);
    if (*opcount) return run_opcount(ops);
  } catch (const CommandError& e) {
    std::cerr << "error: " << e.message << '\n';
    return e.status != 0 ? e.status : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
