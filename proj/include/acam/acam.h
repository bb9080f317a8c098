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

/* C interface to the acam acoustic-camera library.
 *
 * All objects are opaque handles created by *_create / *_load / *_fit style
 * calls and released with the matching *_destroy. Every fallible call
 * returns an acam_status; on failure acam_last_error() holds a message for
 * the calling thread. Pixel coordinates are 1-based. P-vectors and
 * supervectors use the canonical pair order (0,1), (0,2), ..., (M-2,M-1).
 * Complex arrays are interleaved (re, im) doubles.
 */
#ifndef ACAM_ACAM_H_
#define ACAM_ACAM_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(ACAM_BUILDING_LIBRARY)
#define ACAM_API __declspec(dllexport)
#else
#define ACAM_API __declspec(dllimport)
#endif
#else
#define ACAM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum acam_status {
  ACAM_OK = 0,
  ACAM_ERR_INVALID_ARGUMENT = 1,
  ACAM_ERR_DOMAIN = 2,
  ACAM_ERR_UNDERDETERMINED = 3,
  ACAM_ERR_SINGULAR_DESIGN = 4,
  ACAM_ERR_CALIBRATION_INCOMPLETE = 5,
  ACAM_ERR_CONFIGURATION = 6,
  ACAM_ERR_DIMENSION_MISMATCH = 7,
  ACAM_ERR_NUMERIC = 8,
  ACAM_ERR_IO = 9,
  ACAM_ERR_FORMAT = 10,
  ACAM_ERR_NOT_CONVERGED = 11,
  ACAM_ERR_INTERNAL = 100
} acam_status;

typedef enum acam_window { ACAM_WINDOW_HANN = 0, ACAM_WINDOW_RECTANGULAR = 1 } acam_window;
typedef enum acam_wav_encoding { ACAM_WAV_PCM16 = 0, ACAM_WAV_FLOAT32 = 1 } acam_wav_encoding;

typedef struct acam_geometry acam_geometry;
typedef struct acam_camera acam_camera;
typedef struct acam_regression acam_regression;
typedef struct acam_audio acam_audio;
typedef struct acam_renderer acam_renderer;
typedef struct acam_study_report acam_study_report;

ACAM_API const char* acam_status_string(acam_status status);
/* Message of the last failed call on this thread; "" if none. */
ACAM_API const char* acam_last_error(void);
ACAM_API const char* acam_version(void);

/* ---- array geometry ---------------------------------------------------- */

/* xyz: mic_count * 3 doubles (meters). */
ACAM_API acam_status acam_geometry_create(const double* xyz, size_t mic_count, double sample_rate,
                                          double speed_of_sound, double rho, acam_geometry** out);
ACAM_API acam_status acam_geometry_load(const char* path, acam_geometry** out);
/* Square 4-mic array, side 0.057 m, 16 kHz, c = 343 m/s, rho = 0.1. */
ACAM_API acam_status acam_geometry_nominal(acam_geometry** out);
ACAM_API void acam_geometry_destroy(acam_geometry* geometry);
ACAM_API size_t acam_geometry_mic_count(const acam_geometry* geometry);
ACAM_API size_t acam_geometry_pair_count(const acam_geometry* geometry);
ACAM_API double acam_geometry_sample_rate(const acam_geometry* geometry);
ACAM_API acam_status acam_geometry_tau_max(const acam_geometry* geometry, double* out);
/* out: pair_count doubles, samples. */
ACAM_API acam_status acam_geometry_freefield_tdoas(const acam_geometry* geometry,
                                                   const double source[3], double* out,
                                                   size_t out_len);

/* ---- camera simulation ------------------------------------------------- */

ACAM_API acam_status acam_camera_create(int width, int height, double k, acam_camera** out);
ACAM_API void acam_camera_destroy(acam_camera* camera);
ACAM_API acam_status acam_camera_project(const acam_camera* camera, const double point[3],
                                         double* u, double* v);
ACAM_API int acam_camera_inside(const acam_camera* camera, double u, double v);
/* Point on the plane z = depth projecting onto (u, v). */
ACAM_API acam_status acam_camera_unproject(const acam_camera* camera, double u, double v,
                                           double depth, double out_xyz[3]);
/* per_axis^2 targets, 10%-style margins; out_uv holds 2 * per_axis^2 doubles. */
ACAM_API acam_status acam_target_grid(int width, int height, int per_axis, double margin,
                                      double* out_uv, size_t out_len);

/* ---- calibration regression -------------------------------------------- */

/* targets_uv: 2*T doubles; tdoas: T*P doubles row-major. ridge = 0 for the
 * plain pseudoinverse. */
ACAM_API acam_status acam_regression_fit(const double* targets_uv, size_t target_count,
                                         const double* tdoas, size_t pair_count, int order,
                                         int width, int height, double ridge,
                                         acam_regression** out);
ACAM_API acam_status acam_regression_load(const char* path, acam_regression** out);
ACAM_API acam_status acam_regression_save(const acam_regression* model, const char* path);
ACAM_API void acam_regression_destroy(acam_regression* model);
ACAM_API int acam_regression_order(const acam_regression* model);
ACAM_API size_t acam_regression_pair_count(const acam_regression* model);
ACAM_API int acam_regression_width(const acam_regression* model);
ACAM_API int acam_regression_height(const acam_regression* model);
ACAM_API acam_status acam_regression_predict(const acam_regression* model, double u, double v,
                                             double* out, size_t out_len);
/* RMS of (A c - tau) over the given targets. */
ACAM_API acam_status acam_regression_residual(const acam_regression* model,
                                              const double* targets_uv, size_t target_count,
                                              const double* tdoas, double* out_rms);

/* ---- audio ------------------------------------------------------------- */

/* samples: channels * frames doubles, channel-major. */
ACAM_API acam_status acam_audio_create(const double* samples, size_t channels, size_t frames,
                                       int sample_rate, acam_audio** out);
ACAM_API acam_status acam_audio_load_wav(const char* path, acam_audio** out);
ACAM_API acam_status acam_audio_save_wav(const acam_audio* audio, const char* path,
                                         acam_wav_encoding encoding);
ACAM_API void acam_audio_destroy(acam_audio* audio);
ACAM_API size_t acam_audio_channels(const acam_audio* audio);
ACAM_API size_t acam_audio_frames(const acam_audio* audio);
ACAM_API int acam_audio_sample_rate(const acam_audio* audio);
/* Copies frames [first, first + count) into out (channels * count, channel-major). */
ACAM_API acam_status acam_audio_read_block(const acam_audio* audio, size_t first, size_t count,
                                           double* out, size_t out_len);

/* Render a source script (see docs) at the geometry's sample rate. */
ACAM_API acam_status acam_synthesize_script(const acam_geometry* geometry, const char* script_path,
                                            uint64_t seed, acam_audio** out);

/* ---- phase transform / GCC-PHAT ----------------------------------------- */

/* block: mic_count * frame_size doubles, channel-major.
 * out: pair_count * (frame_size / 2 + 1) complex values (2x doubles). */
ACAM_API acam_status acam_phat_supervector(const double* block, size_t mic_count, int frame_size,
                                           acam_window window, double* out, size_t out_len);
ACAM_API acam_status acam_gcc_phat_tdoa(const double* block, size_t mic_count, int frame_size,
                                        acam_window window, size_t mic_i, size_t mic_j,
                                        double tau_max, int upsample, double* out);

typedef struct acam_detect_options {
  int frame_size;          /* default 512 */
  double on_threshold;     /* frame RMS; default 0.01 */
  double off_ratio;        /* default 0.5 */
  int frames_per_target;   /* default 20 */
  int min_segment_frames;  /* default 2 */
  int upsample;            /* GCC lag-grid factor; default 4 */
  acam_window window;      /* default Hann */
} acam_detect_options;

ACAM_API void acam_detect_options_default(acam_detect_options* options);

/* Writes expected_targets * P doubles (row per detected segment). */
ACAM_API acam_status acam_measure_targets(const acam_audio* audio, const acam_geometry* geometry,
                                          const acam_detect_options* options,
                                          size_t expected_targets, double* out_tdoas,
                                          size_t out_len);

/* ---- SVD-PHAT imaging -------------------------------------------------- */

typedef struct acam_op_counts {
  uint64_t brute;
  uint64_t fast;
  double ratio;
} acam_op_counts;

ACAM_API acam_status acam_op_counts_compute(uint64_t width, uint64_t height, uint64_t mic_count,
                                            uint64_t frame_size, uint64_t rank,
                                            acam_op_counts* out);

/* Builds W from the model and truncates it under delta. */
ACAM_API acam_status acam_renderer_create(const acam_regression* model, int frame_size,
                                          double delta, acam_window window, acam_renderer** out);
/* Reuses a factorization saved with acam_renderer_save_svd. */
ACAM_API acam_status acam_renderer_create_from_svd(const acam_regression* model,
                                                   const char* svd_path, acam_window window,
                                                   acam_renderer** out);
ACAM_API acam_status acam_renderer_save_svd(const acam_renderer* renderer, const char* path);
ACAM_API void acam_renderer_destroy(acam_renderer* renderer);
ACAM_API size_t acam_renderer_rank(const acam_renderer* renderer);
ACAM_API double acam_renderer_energy_kept(const acam_renderer* renderer);
ACAM_API int acam_renderer_frame_size(const acam_renderer* renderer);
/* block: M * N doubles; out_image: U * V doubles in (v-1)*U + (u-1) layout. */
ACAM_API acam_status acam_renderer_image(const acam_renderer* renderer, const double* block,
                                         size_t block_len, double* out_image, size_t out_len);
ACAM_API acam_status acam_renderer_image_brute(const acam_renderer* renderer, const double* block,
                                               size_t block_len, double* out_image,
                                               size_t out_len);

/* image in the same layout as above. */
ACAM_API acam_status acam_image_write_pgm(const double* image, int width, int height,
                                          const char* path);
ACAM_API acam_status acam_image_write_csv(const double* image, int width, int height,
                                          const char* path);

/* ---- distortion study -------------------------------------------------- */

typedef struct acam_study_config {
  int width;                 /* default 320 */
  int height;                /* default 240 */
  const acam_geometry* geometry; /* NULL: nominal square array */
  const int* orders;         /* default {1,2,3,4} when NULL */
  size_t order_count;
  const double* k_values;    /* default {-0.05,-0.025,0,0.025,0.05} when NULL */
  size_t k_count;
  int grid;                  /* default 5 */
  double margin;             /* default 0.1 */
  uint64_t q;                /* default 1000000 */
  double plane_z;            /* default 1.0 */
  uint64_t seed;             /* default 1 */
} acam_study_config;

ACAM_API void acam_study_config_default(acam_study_config* config);
ACAM_API acam_status acam_study_run(const acam_study_config* config, acam_study_report** out);
ACAM_API void acam_study_report_destroy(acam_study_report* report);
ACAM_API size_t acam_study_report_entry_count(const acam_study_report* report);
ACAM_API acam_status acam_study_report_entry(const acam_study_report* report, size_t index,
                                             double* k, int* order, double* rmse,
                                             uint64_t* retained);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  // ACAM_ACAM_H_
