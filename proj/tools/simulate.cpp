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

#include <cstdio>
#include <cstdlib>
#include <string>

#include <CLI11.hpp>

#include "ddfluor/ddfluor.h"

namespace {

int exit_code(ddf_status s) {
    switch (s) {
        case DDF_OK:
            return 0;
        case DDF_ERR_CONFIG:
        case DDF_ERR_INVALID_ARGUMENT:
            return 2;
        case DDF_ERR_NUMERICAL:
        case DDF_ERR_DOMAIN:
        case DDF_ERR_INCONSISTENT:
            return 3;
        case DDF_ERR_IO:
            return 4;
        default:
            return 1;
    }
}

int report(ddf_status s) {
    std::fprintf(stderr, "simulate: %s\n", ddf_last_error());
    return exit_code(s);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Resonance fluorescence of two dipole-dipole coupled four-level atoms"};
    app.set_version_flag("--version", std::string(ddf_version()));

    std::string config_path;
    std::string output_dir;
    std::size_t grid_count = 0;
    std::string channel;
    app.add_option("config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    app.add_option("--output-dir", output_dir,
                   "Output directory (overrides DDFLUOR_OUTPUT_DIR and the config's output_dir)");
    app.add_option("--grid-count", grid_count, "Number of detuning grid points")->check(CLI::Range(2, 1000000));
    app.add_option("--channel", channel, "Polarization channel")->check(CLI::IsMember({"pi", "sigma", "total"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    ddf_config* config = nullptr;
    ddf_status s = ddf_config_load(config_path.c_str(), &config);
    if (s != DDF_OK) return report(s);

    if (output_dir.empty()) {
        if (const char* env = std::getenv("DDFLUOR_OUTPUT_DIR"); env && *env) output_dir = env;
    }
    if (s == DDF_OK && !output_dir.empty()) s = ddf_config_set_output_dir(config, output_dir.c_str());
    if (s == DDF_OK && grid_count > 0) s = ddf_config_set_grid_count(config, grid_count);
    if (s == DDF_OK && !channel.empty()) s = ddf_config_set_channel(config, channel.c_str());
    if (s == DDF_OK) s = ddf_run(config);
    const int code = s == DDF_OK ? 0 : report(s);
    ddf_config_destroy(config);
    return code;
}
