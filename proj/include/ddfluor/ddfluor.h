// Copyright 2026 The ddfluor Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DDFLUOR_DDFLUOR_H
#define DDFLUOR_DDFLUOR_H

#include <stddef.h>

#if defined(_WIN32)
#define DDF_API __declspec(dllexport)
#else
#define DDF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ddf_status {
    DDF_OK = 0,
    DDF_ERR_CONFIG = 2,
    DDF_ERR_NUMERICAL = 3,
    DDF_ERR_DOMAIN = 4,
    DDF_ERR_INCONSISTENT = 5,
    DDF_ERR_INVALID_ARGUMENT = 6,
    DDF_ERR_IO = 7,
    DDF_ERR_INTERNAL = 8
} ddf_status;

typedef enum ddf_channel { DDF_CHANNEL_PI = 0, DDF_CHANNEL_SIGMA = 1, DDF_CHANNEL_TOTAL = 2 } ddf_channel;

/* Lengths in wavelengths, angles in radians, frequencies in units of γ. */
typedef struct ddf_geometry {
    double R;
    double theta;
    double phi;
    double r1[3];
} ddf_geometry;

typedef struct ddf_drive {
    double omega0;
    double detunings[3];
} ddf_drive;

typedef struct ddf_detector {
    double direction[3];
    ddf_channel channel;
    int include_position_phase;
} ddf_detector;

/* Row-major 3x3 matrices, index [3*(i-1) + (j-1)] for Ω_ij. */
typedef struct ddf_couplings {
    double omega_re[9];
    double omega_im[9];
    double gamma_re[9];
    double gamma_im[9];
    double rabi1;
    double rabi2;
    double eta;
} ddf_couplings;

typedef struct ddf_config ddf_config;
typedef struct ddf_model ddf_model;

/* Message of the last failed call on this thread; empty after success. */
DDF_API const char* ddf_last_error(void);
DDF_API const char* ddf_version(void);

DDF_API ddf_status ddf_config_parse(const char* json_text, ddf_config** out);
DDF_API ddf_status ddf_config_load(const char* path, ddf_config** out);
DDF_API void ddf_config_destroy(ddf_config* config);
DDF_API ddf_status ddf_config_set_output_dir(ddf_config* config, const char* dir);
DDF_API ddf_status ddf_config_set_grid_count(ddf_config* config, size_t count);
DDF_API ddf_status ddf_config_set_channel(ddf_config* config, const char* channel);
/* Writes the fully-defaulted JSON into buf (NUL-terminated) when it fits;
 * *needed receives the required size including the terminator. */
DDF_API ddf_status ddf_config_to_json(const ddf_config* config, char* buf, size_t len, size_t* needed);
/* Runs the configured task and writes the artifacts. */
DDF_API ddf_status ddf_run(const ddf_config* config);

DDF_API ddf_status ddf_compute_couplings(const ddf_geometry* g, const ddf_drive* d, ddf_couplings* out);

/* Liouvillian plus steady state for one configuration. */
DDF_API ddf_status ddf_model_create(const ddf_geometry* g, const ddf_drive* d, ddf_model** out);
DDF_API void ddf_model_destroy(ddf_model* model);
DDF_API ddf_status ddf_model_steady_residual(const ddf_model* model, double* residual);
/* Population of `level` (1..4) on `atom` (1, 2). */
DDF_API ddf_status ddf_model_population(const ddf_model* model, int atom, int level, double* out);
DDF_API ddf_status ddf_model_intensity(const ddf_model* model, const ddf_detector* det, double* out);
DDF_API ddf_status ddf_model_spectrum(const ddf_model* model, const ddf_detector* det, const double* grid,
                                      size_t count, double* values);

/* Local maxima above prominence * max. Up to `capacity` positions are
 * written; *found receives the total number. */
DDF_API ddf_status ddf_detect_peaks(const double* grid, const double* values, size_t count, double prominence,
                                    double* positions, size_t capacity, size_t* found);

#ifdef __cplusplus
}
#endif

#endif
