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

#include "acam/acam.h"

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "acam/audio.hpp"
#include "acam/camera.hpp"
#include "acam/config.hpp"
#include "acam/error.hpp"
#include "acam/geometry.hpp"
#include "acam/phat.hpp"
#include "acam/raster.hpp"
#include "acam/regression.hpp"
#include "acam/render.hpp"
#include "acam/study.hpp"
#include "acam/svd_phat.hpp"
#include "acam/synth.hpp"

struct acam_geometry {
  acam::ArrayGeometry value;
};
struct acam_camera {
  acam::CameraModel value;
};
struct acam_regression {
  acam::RegressionModel value;
};
struct acam_audio {
  acam::MultichannelAudio value;
};
struct acam_renderer {
  acam::Renderer value;
};
struct acam_study_report {
  acam::RmseReport value;
};

namespace {

thread_local std::string last_error;

acam_status to_status(acam::Errc code) { return static_cast<acam_status>(code); }

acam_status fail(acam_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs f, translating exceptions into status codes.
template <typename F>
acam_status guarded(F&& f) {
  try {
    last_error.clear();
    f();
    return ACAM_OK;
  } catch (const acam::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(ACAM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ACAM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(ACAM_ERR_INTERNAL, "unknown exception");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw acam::Error(acam::Errc::invalid_argument, what);
}

void require_len(std::size_t have, std::size_t need, const char* what) {
  if (have < need)
    throw acam::Error(acam::Errc::dimension_mismatch,
                      std::string(what) + ": buffer holds " + std::to_string(have) +
                          " values, need " + std::to_string(need));
}

acam::Window to_window(acam_window w) {
  return w == ACAM_WINDOW_RECTANGULAR ? acam::Window::rectangular : acam::Window::hann;
}

std::vector<acam::PixelCoord> to_pixels(const double* uv, std::size_t count) {
  std::vector<acam::PixelCoord> pixels(count);
  for (std::size_t t = 0; t < count; ++t) pixels[t] = {uv[2 * t], uv[2 * t + 1]};
  return pixels;
}

Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> block_view(
    const double* block, std::size_t mics, std::size_t frame) {
  return {block, static_cast<Eigen::Index>(mics), static_cast<Eigen::Index>(frame)};
}

void copy_image(const acam::AcousticImage& image, double* out, std::size_t out_len) {
  require_len(out_len, static_cast<std::size_t>(image.values.size()), "image");
  std::memcpy(out, image.values.data(), sizeof(double) * static_cast<std::size_t>(image.values.size()));
}

acam::AcousticImage image_view(const double* image, int width, int height) {
  require(image != nullptr && width >= 1 && height >= 1, "image buffer and size required");
  return {width, height,
          Eigen::Map<const Eigen::VectorXd>(image, static_cast<Eigen::Index>(width) * height)};
}


template <typename Render>
acam_status render_with(const acam_renderer* renderer, const double* block, size_t block_len,
                        double* out_image, size_t out_len, Render&& render) {
  return guarded([&] {
    require(renderer && block && out_image, "null argument");
    const std::size_t mics = renderer->value.regression().mic_count();
    const auto n = static_cast<std::size_t>(renderer->value.frame_size());
    require_len(block_len, mics * n, "audio block");
    copy_image(render(renderer->value, block_view(block, mics, n)), out_image, out_len);
  });
}

}  // namespace

extern "C" {

const char* acam_status_string(acam_status status) {
  if (status == ACAM_OK) return "ok";
  if (status == ACAM_ERR_INTERNAL) return "internal error";
  if (status >= ACAM_ERR_INVALID_ARGUMENT && status <= ACAM_ERR_NOT_CONVERGED)
    return acam::to_string(static_cast<acam::Errc>(status));
  return "unknown status";
}

const char* acam_last_error(void) { return last_error.c_str(); }

const char* acam_version(void) { return "1.0.0"; }

// ---- geometry

acam_status acam_geometry_create(const double* xyz, size_t mic_count, double sample_rate,
                                 double speed_of_sound, double rho, acam_geometry** out) {
  return guarded([&] {
    require(out != nullptr && (xyz != nullptr || mic_count == 0), "null argument");
    std::vector<Eigen::Vector3d> mics;
    for (std::size_t m = 0; m < mic_count; ++m)
      mics.emplace_back(xyz[3 * m], xyz[3 * m + 1], xyz[3 * m + 2]);
    *out = new acam_geometry{acam::ArrayGeometry(std::move(mics), sample_rate, speed_of_sound, rho)};
  });
}

acam_status acam_geometry_load(const char* path, acam_geometry** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new acam_geometry{acam::load_geometry(path)};
  });
}

acam_status acam_geometry_nominal(acam_geometry** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = new acam_geometry{acam::nominal_square_geometry()};
  });
}

void acam_geometry_destroy(acam_geometry* geometry) { delete geometry; }

size_t acam_geometry_mic_count(const acam_geometry* g) { return g ? g->value.mic_count() : 0; }
size_t acam_geometry_pair_count(const acam_geometry* g) { return g ? g->value.pair_count() : 0; }
double acam_geometry_sample_rate(const acam_geometry* g) { return g ? g->value.sample_rate() : 0.0; }

acam_status acam_geometry_tau_max(const acam_geometry* geometry, double* out) {
  return guarded([&] {
    require(geometry != nullptr && out != nullptr, "null argument");
    *out = acam::tau_max(geometry->value);
  });
}

acam_status acam_geometry_freefield_tdoas(const acam_geometry* geometry, const double source[3],
                                          double* out, size_t out_len) {
  return guarded([&] {
    require(geometry != nullptr && source != nullptr && out != nullptr, "null argument");
    require_len(out_len, geometry->value.pair_count(), "tdoas");
    const Eigen::VectorXd t =
        acam::freefield_tdoas(geometry->value, Eigen::Vector3d(source[0], source[1], source[2]));
    std::memcpy(out, t.data(), sizeof(double) * static_cast<std::size_t>(t.size()));
  });
}

// ---- camera

acam_status acam_camera_create(int width, int height, double k, acam_camera** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = new acam_camera{acam::CameraModel(width, height, k)};
  });
}

void acam_camera_destroy(acam_camera* camera) { delete camera; }

acam_status acam_camera_project(const acam_camera* camera, const double point[3], double* u,
                                double* v) {
  return guarded([&] {
    require(camera && point && u && v, "null argument");
    const auto px = acam::project(camera->value, Eigen::Vector3d(point[0], point[1], point[2]));
    *u = px.u;
    *v = px.v;
  });
}

int acam_camera_inside(const acam_camera* camera, double u, double v) {
  return camera && acam::inside_image(camera->value, u, v) ? 1 : 0;
}

acam_status acam_camera_unproject(const acam_camera* camera, double u, double v, double depth,
                                  double out_xyz[3]) {
  return guarded([&] {
    require(camera && out_xyz, "null argument");
    const Eigen::Vector3d p = acam::unproject(camera->value, {u, v}, depth);
    out_xyz[0] = p.x();
    out_xyz[1] = p.y();
    out_xyz[2] = p.z();
  });
}

acam_status acam_target_grid(int width, int height, int per_axis, double margin, double* out_uv,
                             size_t out_len) {
  return guarded([&] {
    require(out_uv != nullptr, "null argument");
    const auto grid = acam::target_grid(width, height, per_axis, margin);
    require_len(out_len, 2 * grid.size(), "target grid");
    for (std::size_t t = 0; t < grid.size(); ++t) {
      out_uv[2 * t] = grid[t].u;
      out_uv[2 * t + 1] = grid[t].v;
    }
  });
}

// ---- regression

acam_status acam_regression_fit(const double* targets_uv, size_t target_count, const double* tdoas,
                                size_t pair_count, int order, int width, int height, double ridge,
                                acam_regression** out) {
  return guarded([&] {
    require(targets_uv && tdoas && out, "null argument");
    acam::TargetSet set;
    set.targets = to_pixels(targets_uv, target_count);
    set.tdoas = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        tdoas, static_cast<Eigen::Index>(target_count), static_cast<Eigen::Index>(pair_count));
    acam::FitOptions options;
    options.ridge = ridge;
    *out = new acam_regression{acam::fit(set, order, width, height, options)};
  });
}

acam_status acam_regression_load(const char* path, acam_regression** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new acam_regression{acam::load_regression(std::string(path))};
  });
}

acam_status acam_regression_save(const acam_regression* model, const char* path) {
  return guarded([&] {
    require(model && path, "null argument");
    acam::save_regression(model->value, std::string(path));
  });
}

void acam_regression_destroy(acam_regression* model) { delete model; }

int acam_regression_order(const acam_regression* m) { return m ? m->value.order() : -1; }
size_t acam_regression_pair_count(const acam_regression* m) { return m ? m->value.pair_count() : 0; }
int acam_regression_width(const acam_regression* m) { return m ? m->value.width() : 0; }
int acam_regression_height(const acam_regression* m) { return m ? m->value.height() : 0; }

acam_status acam_regression_predict(const acam_regression* model, double u, double v, double* out,
                                    size_t out_len) {
  return guarded([&] {
    require(model && out, "null argument");
    require_len(out_len, model->value.pair_count(), "prediction");
    const Eigen::VectorXd t = model->value.predict(u, v);
    std::memcpy(out, t.data(), sizeof(double) * static_cast<std::size_t>(t.size()));
  });
}

acam_status acam_regression_residual(const acam_regression* model, const double* targets_uv,
                                     size_t target_count, const double* tdoas, double* out_rms) {
  return guarded([&] {
    require(model && targets_uv && tdoas && out_rms, "null argument");
    acam::TargetSet set;
    set.targets = to_pixels(targets_uv, target_count);
    set.tdoas = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        tdoas, static_cast<Eigen::Index>(target_count),
        static_cast<Eigen::Index>(model->value.pair_count()));
    *out_rms = acam::fit_residual_rms(model->value, set);
  });
}

// ---- audio

acam_status acam_audio_create(const double* samples, size_t channels, size_t frames,
                              int sample_rate, acam_audio** out) {
  return guarded([&] {
    require(out != nullptr && (samples != nullptr || frames == 0), "null argument");
    require(channels >= 1 && sample_rate > 0, "audio needs channels and a sample rate");
    acam::MultichannelAudio audio;
    audio.sample_rate = sample_rate;
    audio.samples = block_view(samples, channels, frames);
    *out = new acam_audio{std::move(audio)};
  });
}

acam_status acam_audio_load_wav(const char* path, acam_audio** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new acam_audio{acam::read_wav(path)};
  });
}

acam_status acam_audio_save_wav(const acam_audio* audio, const char* path,
                                acam_wav_encoding encoding) {
  return guarded([&] {
    require(audio && path, "null argument");
    acam::write_wav(path, audio->value,
                    encoding == ACAM_WAV_FLOAT32 ? acam::WavEncoding::float32 : acam::WavEncoding::pcm16);
  });
}

void acam_audio_destroy(acam_audio* audio) { delete audio; }

size_t acam_audio_channels(const acam_audio* a) { return a ? static_cast<size_t>(a->value.channels()) : 0; }
size_t acam_audio_frames(const acam_audio* a) { return a ? static_cast<size_t>(a->value.frames()) : 0; }
int acam_audio_sample_rate(const acam_audio* a) { return a ? a->value.sample_rate : 0; }

acam_status acam_audio_read_block(const acam_audio* audio, size_t first, size_t count, double* out,
                                  size_t out_len) {
  return guarded([&] {
    require(audio && out, "null argument");
    const auto& s = audio->value.samples;
    if (first + count > static_cast<std::size_t>(s.cols()))
      throw acam::Error(acam::Errc::invalid_argument, "block extends past the end of the audio");
    require_len(out_len, count * static_cast<std::size_t>(s.rows()), "audio block");
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        out, s.rows(), static_cast<Eigen::Index>(count)) =
        s.middleCols(static_cast<Eigen::Index>(first), static_cast<Eigen::Index>(count));
  });
}

acam_status acam_synthesize_script(const acam_geometry* geometry, const char* script_path,
                                   uint64_t seed, acam_audio** out) {
  return guarded([&] {
    require(geometry && script_path && out, "null argument");
    const auto events = acam::load_source_script(script_path);
    *out = new acam_audio{acam::synthesize(geometry->value, events, seed)};
  });
}

// ---- PHAT

acam_status acam_phat_supervector(const double* block, size_t mic_count, int frame_size,
                                  acam_window window, double* out, size_t out_len) {
  return guarded([&] {
    require(block && out && mic_count >= 2 && frame_size > 0, "invalid arguments");
    const auto spectra =
        acam::stft_frame(block_view(block, mic_count, static_cast<std::size_t>(frame_size)), to_window(window));
    const Eigen::VectorXcd x = acam::phat_supervector(spectra);
    require_len(out_len, 2 * static_cast<std::size_t>(x.size()), "supervector");
    std::memcpy(out, x.data(), sizeof(double) * 2 * static_cast<std::size_t>(x.size()));
  });
}

acam_status acam_gcc_phat_tdoa(const double* block, size_t mic_count, int frame_size,
                               acam_window window, size_t mic_i, size_t mic_j, double tau_max,
                               int upsample, double* out) {
  return guarded([&] {
    require(block && out && mic_count >= 2 && frame_size > 0, "invalid arguments");
    const auto spectra =
        acam::stft_frame(block_view(block, mic_count, static_cast<std::size_t>(frame_size)), to_window(window));
    acam::GccOptions options;
    options.upsample = upsample;
    *out = acam::gcc_phat_tdoa(spectra, {mic_i, mic_j}, tau_max, options);
  });
}

void acam_detect_options_default(acam_detect_options* options) {
  if (!options) return;
  const acam::DetectOptions d;
  options->frame_size = d.frame_size;
  options->on_threshold = d.on_threshold;
  options->off_ratio = d.off_ratio;
  options->frames_per_target = d.frames_per_target;
  options->min_segment_frames = d.min_segment_frames;
  options->upsample = d.gcc.upsample;
  options->window = ACAM_WINDOW_HANN;
}

acam_status acam_measure_targets(const acam_audio* audio, const acam_geometry* geometry,
                                 const acam_detect_options* options, size_t expected_targets,
                                 double* out_tdoas, size_t out_len) {
  return guarded([&] {
    require(audio && geometry && out_tdoas, "null argument");
    require(expected_targets >= 1, "expected_targets must be >= 1");
    acam::DetectOptions d;
    if (options) {
      d.frame_size = options->frame_size;
      d.on_threshold = options->on_threshold;
      d.off_ratio = options->off_ratio;
      d.frames_per_target = options->frames_per_target;
      d.min_segment_frames = options->min_segment_frames;
      d.gcc.upsample = options->upsample;
      d.window = to_window(options->window);
    }
    if (audio->value.sample_rate != static_cast<int>(geometry->value.sample_rate()))
      throw acam::Error(acam::Errc::configuration,
                        "audio sample rate " + std::to_string(audio->value.sample_rate) +
                            " differs from geometry sample rate");
    const Eigen::MatrixXd t = acam::measure_targets(audio->value, geometry->value, d, expected_targets);
    require_len(out_len, static_cast<std::size_t>(t.size()), "tdoas");
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        out_tdoas, t.rows(), t.cols()) = t;
  });
}

// ---- imaging

acam_status acam_op_counts_compute(uint64_t width, uint64_t height, uint64_t mic_count,
                                   uint64_t frame_size, uint64_t rank, acam_op_counts* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    const auto c = acam::op_counts(width, height, mic_count, frame_size, rank);
    *out = {c.brute, c.fast, c.ratio};
  });
}

acam_status acam_renderer_create(const acam_regression* model, int frame_size, double delta,
                                 acam_window window, acam_renderer** out) {
  return guarded([&] {
    require(model && out, "null argument");
    *out = new acam_renderer{acam::Renderer(model->value, frame_size, delta, to_window(window))};
  });
}

acam_status acam_renderer_create_from_svd(const acam_regression* model, const char* svd_path,
                                          acam_window window, acam_renderer** out) {
  return guarded([&] {
    require(model && svd_path && out, "null argument");
    *out = new acam_renderer{
        acam::Renderer(model->value, acam::load_svd_phat(std::string(svd_path)), to_window(window))};
  });
}

acam_status acam_renderer_save_svd(const acam_renderer* renderer, const char* path) {
  return guarded([&] {
    require(renderer && path, "null argument");
    acam::save_svd_phat(renderer->value.svd(), std::string(path));
  });
}

void acam_renderer_destroy(acam_renderer* renderer) { delete renderer; }

size_t acam_renderer_rank(const acam_renderer* r) {
  return r ? static_cast<size_t>(r->value.svd().rank()) : 0;
}
double acam_renderer_energy_kept(const acam_renderer* r) { return r ? r->value.svd().energy_kept() : 0.0; }
int acam_renderer_frame_size(const acam_renderer* r) { return r ? r->value.frame_size() : 0; }


acam_status acam_renderer_image(const acam_renderer* renderer, const double* block, size_t block_len,
                                double* out_image, size_t out_len) {
  return render_with(renderer, block, block_len, out_image, out_len,
                     [](const acam::Renderer& r, const auto& b) { return r.render(b); });
}

acam_status acam_renderer_image_brute(const acam_renderer* renderer, const double* block,
                                      size_t block_len, double* out_image, size_t out_len) {
  return render_with(renderer, block, block_len, out_image, out_len,
                     [](const acam::Renderer& r, const auto& b) { return r.render_brute(b); });
}

acam_status acam_image_write_pgm(const double* image, int width, int height, const char* path) {
  return guarded([&] {
    require(path != nullptr, "null argument");
    acam::write_pgm(image_view(image, width, height), std::string(path));
  });
}

acam_status acam_image_write_csv(const double* image, int width, int height, const char* path) {
  return guarded([&] {
    require(path != nullptr, "null argument");
    acam::write_csv(image_view(image, width, height), std::string(path));
  });
}

// ---- study

void acam_study_config_default(acam_study_config* config) {
  if (!config) return;
  const acam::StudyConfig d;
  *config = {};
  config->width = d.width;
  config->height = d.height;
  config->grid = d.grid;
  config->margin = d.margin;
  config->q = d.q;
  config->plane_z = d.plane_z;
  config->seed = d.seed;
}

acam_status acam_study_run(const acam_study_config* config, acam_study_report** out) {
  return guarded([&] {
    require(config && out, "null argument");
    acam::StudyConfig cfg;
    cfg.width = config->width;
    cfg.height = config->height;
    if (config->geometry) cfg.geometry = config->geometry->value;
    if (config->orders) cfg.orders.assign(config->orders, config->orders + config->order_count);
    if (config->k_values) cfg.k_values.assign(config->k_values, config->k_values + config->k_count);
    cfg.grid = config->grid;
    cfg.margin = config->margin;
    cfg.q = config->q;
    cfg.plane_z = config->plane_z;
    cfg.seed = config->seed;
    *out = new acam_study_report{acam::run_simulation_study(cfg)};
  });
}

void acam_study_report_destroy(acam_study_report* report) { delete report; }

size_t acam_study_report_entry_count(const acam_study_report* report) {
  return report ? report->value.entries.size() : 0;
}

acam_status acam_study_report_entry(const acam_study_report* report, size_t index, double* k,
                                    int* order, double* rmse, uint64_t* retained) {
  return guarded([&] {
    require(report != nullptr, "null argument");
    const auto& r = report->value;
    if (index >= r.entries.size()) throw acam::Error(acam::Errc::invalid_argument, "entry index out of range");
    const auto& e = r.entries[index];
    if (k) *k = e.k;
    if (order) *order = e.order;
    if (rmse) *rmse = e.rmse;
    if (retained) {
      *retained = 0;
      for (const auto& kept : r.retained)
        if (kept.k == e.k) *retained = kept.count;
    }
  });
}

}  // extern "C"
