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

#include "ddfluor/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ddfluor/error.hpp"

namespace ddf {

using nlohmann::json;

namespace {

constexpr const char* kTaskNames[] = {"couplings", "steady_state",  "spectrum",     "intensity_scan",
                                      "dressed",   "estimate_r",    "estimate_phi", "estimate_theta"};

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
    std::string unknown;
    for (const auto& [key, value] : obj.items()) {
        if (!known.count(key)) unknown += (unknown.empty() ? "" : ", ") + key;
    }
    if (!unknown.empty()) throw ConfigError("unknown keys in " + where + ": " + unknown);
}

template <typename T>
T get(const json& obj, const char* key, const T& fallback, const std::string& where = "") {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("field " + where + key + " has the wrong type");
    }
}

Vec3 vec3(const json& v, const std::string& field) {
    if (!v.is_array() || v.size() != 3) throw ConfigError("field " + field + " must be an array of 3 numbers");
    Vec3 out;
    for (int i = 0; i < 3; ++i) {
        if (!v[static_cast<std::size_t>(i)].is_number()) {
            throw ConfigError("field " + field + " must be an array of 3 numbers");
        }
        out[i] = v[static_cast<std::size_t>(i)].get<double>();
    }
    return out;
}

json to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

template <typename Fn>
void as_config_error(const std::string& field, Fn&& fn) {
    try {
        fn();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(field + ": " + e.what());
    }
}

}  // namespace

std::string_view to_string(Task t) { return kTaskNames[static_cast<int>(t)]; }

Task task_from_string(std::string_view s) {
    for (int i = 0; i < 8; ++i) {
        if (s == kTaskNames[i]) return static_cast<Task>(i);
    }
    throw ConfigError("unknown task '" + std::string(s) +
                      "' (expected couplings, steady_state, spectrum, intensity_scan, dressed, estimate_r, "
                      "estimate_phi or estimate_theta)");
}

Detector default_detector(Task t) {
    switch (t) {
        case Task::estimate_phi:
            return Detector::along_minus_x(Channel::pi);
        case Task::intensity_scan:
        case Task::estimate_theta:
            return Detector::along_z(Channel::sigma);
        case Task::estimate_r:
            return Detector::along_y(Channel::total);
        default:
            return Detector::along_y(Channel::pi);
    }
}

void validate_config(const RunConfig& c) {
    if (!(c.geometry.R > 0.0)) throw ConfigError("R must be positive");
    as_config_error("geometry", [&] { c.geometry.validate(); });
    as_config_error("drive", [&] { c.drive.validate(); });
    if (!(c.detector.direction.norm() > 0.0) || !c.detector.direction.allFinite()) {
        throw ConfigError("detector.direction must be a non-zero vector");
    }
    if (c.grid.count < 2) throw ConfigError("grid.count must be at least 2");
    if (!(c.grid.min < c.grid.max)) throw ConfigError("grid.min must be below grid.max");
    if (c.scan.count < 2) throw ConfigError("scan.count must be at least 2");
    if (!(c.scan.min < c.scan.max)) throw ConfigError("scan.min must be below scan.max");
    if (!(c.prominence > 0.0 && c.prominence < 1.0)) throw ConfigError("prominence must lie in (0, 1)");
    if (!(c.r_known > 0.0)) throw ConfigError("R_known must be positive");
    if (c.estimator != "auto" && c.estimator != "large" && c.estimator != "small" && c.estimator != "doublet") {
        throw ConfigError("estimator must be auto, large, small or doublet");
    }
    if (c.output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

RunConfig parse_config(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    reject_unknown(doc,
                   {"task", "R", "theta", "phi", "r1", "Omega", "detunings", "detector", "grid", "scan",
                    "prominence", "R_known", "refine", "estimator", "output_dir"},
                   "config");

    RunConfig c;
    if (!doc.contains("task")) throw ConfigError("missing field task");
    c.task = task_from_string(get<std::string>(doc, "task", ""));
    for (const char* key : {"R", "theta", "phi", "Omega"}) {
        if (!doc.contains(key)) throw ConfigError(std::string("missing field ") + key);
    }
    c.geometry.R = get<double>(doc, "R", 0.0);
    c.geometry.theta = get<double>(doc, "theta", 0.0);
    c.geometry.phi = get<double>(doc, "phi", 0.0);
    if (doc.contains("r1")) c.geometry.r1 = vec3(doc["r1"], "r1");
    c.drive.omega0 = get<double>(doc, "Omega", 0.0);
    if (doc.contains("detunings")) {
        const Vec3 d = vec3(doc["detunings"], "detunings");
        c.drive.detunings = {d[0], d[1], d[2]};
    }
    if (!(c.geometry.R > 0.0)) throw ConfigError("R must be positive");

    c.detector = default_detector(c.task);
    if (doc.contains("detector")) {
        const json& det = doc["detector"];
        if (!det.is_object()) throw ConfigError("field detector must be an object");
        reject_unknown(det, {"direction", "channel", "position_phase"}, "detector");
        if (det.contains("direction")) {
            const json& dir = det["direction"];
            if (dir.is_string()) {
                as_config_error("detector.direction",
                                [&] { c.detector.direction = direction_from_preset(dir.get<std::string>()); });
            } else {
                c.detector.direction = vec3(dir, "detector.direction");
            }
        }
        if (det.contains("channel")) {
            as_config_error("detector.channel", [&] {
                c.detector.channel = channel_from_string(get<std::string>(det, "channel", "", "detector."));
            });
        }
        c.detector.include_position_phase = get<bool>(det, "position_phase", true, "detector.");
    }

    // Grid defaults follow the expected line positions of this geometry.
    std::vector<double> auto_grid;
    as_config_error("geometry", [&] { auto_grid = default_grid(compute_couplings(c.geometry, c.drive), 2001); });
    c.grid = {auto_grid.front(), auto_grid.back(), auto_grid.size()};
    if (doc.contains("grid")) {
        const json& grid = doc["grid"];
        if (!grid.is_object()) throw ConfigError("field grid must be an object");
        reject_unknown(grid, {"min", "max", "count"}, "grid");
        c.grid.min = get<double>(grid, "min", c.grid.min, "grid.");
        c.grid.max = get<double>(grid, "max", c.grid.max, "grid.");
        const auto count = get<long long>(grid, "count", static_cast<long long>(c.grid.count), "grid.");
        if (count < 2) throw ConfigError("grid.count must be at least 2");
        c.grid.count = static_cast<std::size_t>(count);
    }
    if (doc.contains("scan")) {
        const json& scan = doc["scan"];
        if (!scan.is_object()) throw ConfigError("field scan must be an object");
        reject_unknown(scan, {"min", "max", "count", "offset"}, "scan");
        c.scan.min = get<double>(scan, "min", c.scan.min, "scan.");
        c.scan.max = get<double>(scan, "max", c.scan.max, "scan.");
        const auto count = get<long long>(scan, "count", static_cast<long long>(c.scan.count), "scan.");
        if (count < 2) throw ConfigError("scan.count must be at least 2");
        c.scan.count = static_cast<std::size_t>(count);
        c.scan.offset = get<double>(scan, "offset", c.scan.offset, "scan.");
    }
    c.prominence = get<double>(doc, "prominence", c.prominence);
    c.r_known = get<double>(doc, "R_known", c.geometry.R);
    c.refine = get<bool>(doc, "refine", c.refine);
    c.estimator = get<std::string>(doc, "estimator", c.estimator);
    c.output_dir = get<std::string>(doc, "output_dir", c.output_dir);
    validate_config(c);
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
    json doc;
    doc["task"] = std::string(to_string(c.task));
    doc["R"] = c.geometry.R;
    doc["theta"] = c.geometry.theta;
    doc["phi"] = c.geometry.phi;
    doc["r1"] = to_json(c.geometry.r1);
    doc["Omega"] = c.drive.omega0;
    doc["detunings"] = json::array({c.drive.detunings[0], c.drive.detunings[1], c.drive.detunings[2]});
    doc["detector"] = {{"direction", to_json(c.detector.direction)},
                       {"channel", std::string(to_string(c.detector.channel))},
                       {"position_phase", c.detector.include_position_phase}};
    doc["grid"] = {{"min", c.grid.min}, {"max", c.grid.max}, {"count", c.grid.count}};
    doc["scan"] = {{"min", c.scan.min}, {"max", c.scan.max}, {"count", c.scan.count}, {"offset", c.scan.offset}};
    doc["prominence"] = c.prominence;
    doc["R_known"] = c.r_known;
    doc["refine"] = c.refine;
    doc["estimator"] = c.estimator;
    doc["output_dir"] = c.output_dir;
    return doc.dump(2);
}

}  // namespace ddf
