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

#include "ddfluor/ddfluor.h"

#include <cstring>
#include <algorithm>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "ddfluor/config.hpp"
#include "ddfluor/error.hpp"
#include "ddfluor/inference.hpp"
#include "ddfluor/observables.hpp"

struct ddf_config {
    ddf::RunConfig config;
};

struct ddf_model {
    ddf::Geometry geometry;
    ddf::Liouvillian liouvillian;
    ddf::SteadyState steady;
};

namespace {

thread_local std::string g_last_error;

ddf_status fail(ddf_status s, const char* msg) {
    g_last_error = msg;
    return s;
}

template <typename Fn>
ddf_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return DDF_OK;
    } catch (const ddf::ConfigError& e) {
        return fail(DDF_ERR_CONFIG, e.what());
    } catch (const ddf::NumericalError& e) {
        return fail(DDF_ERR_NUMERICAL, e.what());
    } catch (const ddf::DomainError& e) {
        return fail(DDF_ERR_DOMAIN, e.what());
    } catch (const ddf::InconsistentInputError& e) {
        return fail(DDF_ERR_INCONSISTENT, e.what());
    } catch (const ddf::IoError& e) {
        return fail(DDF_ERR_IO, e.what());
    } catch (const ddf::Error& e) {
        return fail(DDF_ERR_INTERNAL, e.what());
    } catch (const std::bad_alloc&) {
        return fail(DDF_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(DDF_ERR_INTERNAL, e.what());
    }
}

ddf::Geometry to_geometry(const ddf_geometry& g) {
    ddf::Geometry out;
    out.R = g.R;
    out.theta = g.theta;
    out.phi = g.phi;
    out.r1 = ddf::Vec3(g.r1[0], g.r1[1], g.r1[2]);
    return out;
}

ddf::DriveConfig to_drive(const ddf_drive& d) {
    ddf::DriveConfig out;
    out.omega0 = d.omega0;
    out.detunings = {d.detunings[0], d.detunings[1], d.detunings[2]};
    return out;
}

ddf::Detector to_detector(const ddf_detector& d) {
    ddf::Detector out;
    out.direction = ddf::Vec3(d.direction[0], d.direction[1], d.direction[2]);
    switch (d.channel) {
        case DDF_CHANNEL_PI:
            out.channel = ddf::Channel::pi;
            break;
        case DDF_CHANNEL_SIGMA:
            out.channel = ddf::Channel::sigma;
            break;
        case DDF_CHANNEL_TOTAL:
            out.channel = ddf::Channel::total;
            break;
        default:
            throw ddf::DomainError("unknown channel");
    }
    out.include_position_phase = d.include_position_phase != 0;
    return out;
}

void copy_matrix(const ddf::Mat3c& m, double* re, double* im) {
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            re[3 * i + j] = m(i, j).real();
            im[3 * i + j] = m(i, j).imag();
        }
    }
}

}  // namespace

extern "C" {

const char* ddf_last_error(void) { return g_last_error.c_str(); }

const char* ddf_version(void) {
    static const std::string v(ddf::version());
    return v.c_str();
}

ddf_status ddf_config_parse(const char* json_text, ddf_config** out) {
    if (!json_text || !out) return fail(DDF_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] { *out = new ddf_config{ddf::parse_config(json_text)}; });
}

ddf_status ddf_config_load(const char* path, ddf_config** out) {
    if (!path || !out) return fail(DDF_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] { *out = new ddf_config{ddf::load_config(path)}; });
}

void ddf_config_destroy(ddf_config* config) { delete config; }

ddf_status ddf_config_set_output_dir(ddf_config* config, const char* dir) {
    if (!config || !dir) return fail(DDF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        ddf::RunConfig c = config->config;
        c.output_dir = dir;
        ddf::validate_config(c);
        config->config = std::move(c);
    });
}

ddf_status ddf_config_set_grid_count(ddf_config* config, size_t count) {
    if (!config) return fail(DDF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        ddf::RunConfig c = config->config;
        c.grid.count = count;
        ddf::validate_config(c);
        config->config = std::move(c);
    });
}

ddf_status ddf_config_set_channel(ddf_config* config, const char* channel) {
    if (!config || !channel) return fail(DDF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        try {
            config->config.detector.channel = ddf::channel_from_string(channel);
        } catch (const ddf::Error& e) {
            throw ddf::ConfigError(std::string("detector.channel: ") + e.what());
        }
    });
}

ddf_status ddf_config_to_json(const ddf_config* config, char* buf, size_t len, size_t* needed) {
    if (!config) return fail(DDF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const std::string text = ddf::serialize_config(config->config);
        if (needed) *needed = text.size() + 1;
        if (buf && len > text.size()) std::memcpy(buf, text.c_str(), text.size() + 1);
    });
}

ddf_status ddf_run(const ddf_config* config) {
    if (!config) return fail(DDF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { ddf::run(config->config); });
}

ddf_status ddf_compute_couplings(const ddf_geometry* g, const ddf_drive* d, ddf_couplings* out) {
    if (!g || !d || !out) return fail(DDF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const ddf::CouplingSet c = ddf::compute_couplings(to_geometry(*g), to_drive(*d));
        copy_matrix(c.omega, out->omega_re, out->omega_im);
        copy_matrix(c.gamma, out->gamma_re, out->gamma_im);
        out->rabi1 = c.rabi1;
        out->rabi2 = c.rabi2;
        out->eta = c.eta;
    });
}

ddf_status ddf_model_create(const ddf_geometry* g, const ddf_drive* d, ddf_model** out) {
    if (!g || !d || !out) return fail(DDF_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        auto m = std::make_unique<ddf_model>();
        m->geometry = to_geometry(*g);
        m->liouvillian = ddf::assemble_liouvillian(m->geometry, to_drive(*d));
        m->steady = ddf::steady_state(m->liouvillian);
        *out = m.release();
    });
}

void ddf_model_destroy(ddf_model* model) { delete model; }

ddf_status ddf_model_steady_residual(const ddf_model* model, double* residual) {
    if (!model || !residual) return fail(DDF_ERR_INVALID_ARGUMENT, "null argument");
    *residual = model->steady.residual;
    g_last_error.clear();
    return DDF_OK;
}

ddf_status ddf_model_population(const ddf_model* model, int atom, int level, double* out) {
    if (!model || !out) return fail(DDF_ERR_INVALID_ARGUMENT, "null argument");
    if (atom < 1 || atom > 2 || level < 1 || level > 4) return fail(DDF_ERR_INVALID_ARGUMENT, "atom or level out of range");
    return guarded([&] { *out = model->steady.state.population(atom, level); });
}

ddf_status ddf_model_intensity(const ddf_model* model, const ddf_detector* det, double* out) {
    if (!model || !det || !out) return fail(DDF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out = ddf::intensity(model->steady.state, to_detector(*det), model->geometry); });
}

ddf_status ddf_model_spectrum(const ddf_model* model, const ddf_detector* det, const double* grid, size_t count,
                              double* values) {
    if (!model || !det || !grid || !values) return fail(DDF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const ddf::Spectrum s = ddf::spectrum(model->liouvillian, model->steady.state, to_detector(*det),
                                              model->geometry, std::span<const double>(grid, count));
        std::copy(s.values.begin(), s.values.end(), values);
    });
}

ddf_status ddf_detect_peaks(const double* grid, const double* values, size_t count, double prominence,
                            double* positions, size_t capacity, size_t* found) {
    if (!grid || !values || !found || (capacity > 0 && !positions)) {
        return fail(DDF_ERR_INVALID_ARGUMENT, "null argument");
    }
    return guarded([&] {
        const ddf::PeakSet p = ddf::detect_peaks(std::span<const double>(grid, count),
                                                 std::span<const double>(values, count), prominence);
        *found = p.size();
        for (std::size_t i = 0; i < p.size() && i < capacity; ++i) positions[i] = p.positions[i];
    });
}

}  // extern "C"
