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

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>

#include "ddfluor/geometry.hpp"
#include "ddfluor/observables.hpp"

namespace ddf {

enum class Task { couplings, steady_state, spectrum, intensity_scan, dressed, estimate_r, estimate_phi, estimate_theta };

std::string_view to_string(Task t);
Task task_from_string(std::string_view s);

struct GridSpec {
    double min = -150.0;
    double max = 150.0;
    std::size_t count = 2001;

    bool operator==(const GridSpec&) const = default;
};

/// Rotation scan for intensity_scan / estimate_theta. The sample is rotated
/// by `offset` relative to the scan angle.
struct ScanSpec {
    double min = 0.0;
    double max = kPi;
    std::size_t count = 181;
    double offset = 0.0;

    bool operator==(const ScanSpec&) const = default;
};

struct RunConfig {
    Task task = Task::spectrum;
    Geometry geometry;
    DriveConfig drive;
    Detector detector;
    GridSpec grid;
    ScanSpec scan;
    double prominence = 0.02;
    /// Separation assumed known by estimate_phi.
    double r_known = 0.1;
    /// Least-squares refinement after the φ formula.
    bool refine = false;
    /// estimate_r method: "auto", "large", "small" or "doublet".
    std::string estimator = "auto";
    std::string output_dir = "out";

    bool operator==(const RunConfig&) const = default;
};

/// Parses and validates a JSON run configuration and fills every default.
/// Throws ConfigError naming unknown keys or the offending field.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Fully-defaulted JSON; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& c);

/// Re-validates after programmatic edits (CLI overrides).
void validate_config(const RunConfig& c);

/// Default detector for a task: +y π for spectra, -x π for the waveguide φ
/// measurement, +z σ for rotation scans, +y total for distance estimation.
Detector default_detector(Task t);

struct RunResult {
    std::filesystem::path output_dir;
    std::vector<std::filesystem::path> files;
    double wall_seconds = 0.0;
};

/// Executes the task and writes spectrum.csv / scan.csv, report.json and
/// manifest.json. Module errors propagate with the task name prepended.
RunResult run(const RunConfig& c);

/// Library version string.
std::string_view version();

}  // namespace ddf
