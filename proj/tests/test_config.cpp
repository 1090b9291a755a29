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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ddfluor/config.hpp"
#include "ddfluor/error.hpp"
#include "ddfluor/inference.hpp"

using namespace ddf;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("ddfluor_config_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

std::pair<std::vector<double>, std::vector<double>> read_csv(const fs::path& p, std::string* header = nullptr) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    if (header) *header = line;
    std::vector<double> x, y;
    while (std::getline(in, line)) {
        const auto comma = line.find(',');
        x.push_back(std::stod(line.substr(0, comma)));
        y.push_back(std::stod(line.substr(comma + 1)));
    }
    return {x, y};
}

constexpr const char* kIndependentPair =
    R"({"task": "spectrum", "R": 0.3, "theta": 1.5707963267948966, "phi": 0, "Omega": 100})";

}  // namespace

TEST_CASE("minimal config is filled with defaults") {
    const RunConfig c = parse_config(kIndependentPair);
    CHECK(c.task == Task::spectrum);
    CHECK(c.geometry.R == 0.3);
    CHECK(c.geometry.r1 == Vec3(0.05, 0, 0));
    CHECK(c.drive.detunings == std::array<double, 3>{0, 0, 0});
    CHECK(c.drive.omega0 == 100.0);
    CHECK(c.detector == Detector::along_y(Channel::pi));
    CHECK(c.grid.count == 2001);
    CHECK(c.grid.max == doctest::Approx(-c.grid.min));
    CHECK(c.grid.max > 100.0);
    CHECK(c.prominence == kDefaultProminence);
}

TEST_CASE("task-dependent detector defaults") {
    CHECK(default_detector(Task::estimate_phi) == Detector::along_minus_x(Channel::pi));
    CHECK(default_detector(Task::intensity_scan) == Detector::along_z(Channel::sigma));
    CHECK(default_detector(Task::estimate_theta) == Detector::along_z(Channel::sigma));
    CHECK(default_detector(Task::estimate_r) == Detector::along_y(Channel::total));
    CHECK(default_detector(Task::spectrum) == Detector::along_y(Channel::pi));
}

TEST_CASE("invalid configs are rejected with the offending field") {
    CHECK_THROWS_WITH_AS(parse_config(R"({"task": "spectrum", "R": -0.1, "theta": 1, "phi": 0, "Omega": 1})"),
                         doctest::Contains("R must be positive"), ConfigError);
    CHECK_THROWS_WITH_AS(
        parse_config(R"({"task": "spectrum", "R": 0.1, "theta": 1, "phi": 0, "Omega": 1, "foo": 1, "bar": 2})"),
        doctest::Contains("unknown keys in config: bar, foo"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"task": "dance", "R": 0.1})"), ConfigError);
    CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"task": "spectrum", "R": 0.1, "grid": {"min": 1, "max": 0}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"task": "spectrum", "R": 0.1, "grid": {"count": 1}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"task": "spectrum", "R": 0.1, "detector": {"direction": "up"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"task": "spectrum", "R": 0.1, "theta": 4})"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/ddfluor.json"), ConfigError);
}

TEST_CASE("serialization round trip") {
    const char* docs[] = {
        kIndependentPair,
        R"({"task": "estimate_phi", "R": 0.07, "theta": 1.5707963267948966, "phi": 0.3141592653589793,
            "Omega": 350, "R_known": 0.07, "refine": true})",
        R"({"task": "intensity_scan", "R": 0.07, "theta": 1.5707963267948966, "phi": 1.5707963267948966, "Omega": 200,
            "scan": {"count": 91, "offset": 0.3}, "detunings": [0.5, -1, 2]})",
        R"({"task": "spectrum", "R": 0.05, "theta": 0.4, "phi": 1.1, "Omega": 30, "r1": [0.1, 0.2, 0.3],
            "detector": {"direction": [0.6, 0.8, 0], "channel": "total", "position_phase": false},
            "grid": {"min": -10, "max": 12.5, "count": 7}, "prominence": 0.1, "output_dir": "x/y"})",
    };
    for (const char* d : docs) {
        const RunConfig a = parse_config(d);
        const RunConfig b = parse_config(serialize_config(a));
        CHECK(a == b);
        CHECK(serialize_config(a) == serialize_config(b));
    }
}

TEST_CASE("couplings task reports the exchange coupling") {
    RunConfig c = parse_config(R"({"task": "couplings", "R": 0.04, "theta": 1.5707963267948966, "phi": 0, "Omega": 20})");
    c.output_dir = scratch("couplings").string();
    const RunResult r = run(c);
    const json report = read_json(r.output_dir / "report.json");
    CHECK(report["omega22_magnitude"].get<double>() == doctest::Approx(91.64).epsilon(0.01 / 91.64));
    const json manifest = read_json(r.output_dir / "manifest.json");
    CHECK(manifest["version"] == std::string(version()));
    CHECK(parse_config(manifest["config"].dump()) == c);
    CHECK(manifest["wall_time_s"].get<double>() >= 0.0);
}

TEST_CASE("spectrum task writes a decimal CSV with the expected lines") {
    RunConfig c = parse_config(kIndependentPair);
    c.output_dir = scratch("spectrum").string();
    const RunResult r = run(c);
    std::string header;
    const auto [x, y] = read_csv(r.output_dir / "spectrum.csv", &header);
    CHECK(header == "detuning_gamma,intensity");
    CHECK(x.size() == c.grid.count);
    const std::string csv = slurp(r.output_dir / "spectrum.csv");
    const std::string body = csv.substr(csv.find('\n') + 1);
    CHECK(body.find_first_of("eE") == std::string::npos);
    // At least 12 significant digits on every value.
    std::istringstream lines(body);
    std::string line;
    while (std::getline(lines, line)) {
        const std::string v = line.substr(line.find(',') + 1);
        std::size_t digits = 0;
        bool leading = true;
        for (char ch : v) {
            if (ch < '0' || ch > '9') continue;
            if (leading && ch == '0') continue;
            leading = false;
            ++digits;
        }
        CHECK(digits >= 12);
    }
    const PeakSet p = detect_peaks(x, y);
    REQUIRE(p.size() == 5);
    const std::vector<double> expected{-80.90, -30.90, 0.0, 30.90, 80.90};
    for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(p.positions[i] - expected[i]) < 0.5);
    const json report = read_json(r.output_dir / "report.json");
    CHECK(report["peaks"].size() == 5);
    CHECK(report["regime"]["kind"] == "independent_atoms");
}

TEST_CASE("identical configs give byte-identical outputs and the manifest re-runs") {
    RunConfig c = parse_config(kIndependentPair);
    c.grid.count = 301;
    c.output_dir = scratch("det_a").string();
    const RunResult a = run(c);
    c.output_dir = scratch("det_b").string();
    const RunResult b = run(c);
    CHECK(slurp(a.output_dir / "spectrum.csv") == slurp(b.output_dir / "spectrum.csv"));
    CHECK(slurp(a.output_dir / "report.json") == slurp(b.output_dir / "report.json"));

    RunConfig again = parse_config(read_json(a.output_dir / "manifest.json")["config"].dump());
    again.output_dir = scratch("det_c").string();
    const RunResult r = run(again);
    CHECK(slurp(a.output_dir / "spectrum.csv") == slurp(r.output_dir / "spectrum.csv"));
}

TEST_CASE("azimuth task on the waveguide configuration") {
    RunConfig c = parse_config(R"({"task": "estimate_phi", "R": 0.07, "theta": 1.5707963267948966,
                                   "phi": 0.3141592653589793, "Omega": 350, "R_known": 0.07})");
    c.output_dir = scratch("phi").string();
    const json report = read_json(run(c).output_dir / "report.json");
    const json& e = report["estimate"];
    CHECK(e["method"] == "phi_formula");
    CHECK(e["units"] == "rad");
    CHECK(e["value_over_pi"].get<double>() == doctest::Approx(0.091).epsilon(0.003 / 0.091));
    CHECK(e["ambiguity"].size() == 4);
    CHECK(e["inputs_digest"].get<std::string>().size() == 64);
    CHECK(e.contains("residual"));
}

TEST_CASE("distance task picks the estimator from the regime") {
    RunConfig c = parse_config(R"({"task": "estimate_r", "R": 0.04, "theta": 0.6283185307179586,
                                   "phi": 0.20943951023931956, "Omega": 20})");
    c.grid.count = 1201;
    c.output_dir = scratch("r_small").string();
    const json report = read_json(run(c).output_dir / "report.json");
    CHECK(report["estimate"]["method"] == "small_r_peaks");
    CHECK(report["estimate"]["value"].get<double>() == doctest::Approx(0.04).epsilon(0.05));

    RunConfig comparable = parse_config(R"({"task": "estimate_r", "R": 0.04, "theta": 1.5707963267948966,
                                            "phi": 0, "Omega": 75})");
    comparable.grid.count = 101;
    comparable.output_dir = scratch("r_comparable").string();
    CHECK_THROWS_WITH_AS(run(comparable), doctest::Contains("task estimate_r: "), DomainError);
}

TEST_CASE("rotation offset task") {
    RunConfig c = parse_config(R"({"task": "estimate_theta", "R": 0.07, "theta": 1.5707963267948966,
                                   "phi": 1.5707963267948966, "Omega": 200,
                                   "scan": {"min": 0, "max": 4.71238898038469, "count": 271, "offset": 0.3}})");
    c.output_dir = scratch("theta").string();
    const RunResult r = run(c);
    const json report = read_json(r.output_dir / "report.json");
    CHECK(std::abs(report["estimate"]["value"].get<double>() - 0.3) <= 1.5 * kPi / 270);
    std::string header;
    read_csv(r.output_dir / "scan.csv", &header);
    CHECK(header == "dtheta_rad,intensity");
}

TEST_CASE("remaining tasks produce reports") {
    for (const char* task : {"steady_state", "dressed", "intensity_scan"}) {
        RunConfig c = parse_config(std::string(R"({"task": ")") + task +
                                   R"(", "R": 0.07, "theta": 1.5707963267948966, "phi": 1.5707963267948966, "Omega": 200, "scan": {"count": 64}})");
        c.output_dir = scratch(task).string();
        const RunResult r = run(c);
        CHECK(fs::exists(r.output_dir / "report.json"));
        CHECK(fs::exists(r.output_dir / "manifest.json"));
        CHECK(read_json(r.output_dir / "report.json")["task"] == task);
    }
}

TEST_CASE("unwritable output directory") {
    const fs::path blocker = scratch("blocker");
    std::ofstream(blocker) << "x";
    RunConfig c = parse_config(R"({"task": "couplings", "R": 0.04, "theta": 1.5707963267948966, "phi": 0, "Omega": 20})");
    c.output_dir = (blocker / "sub").string();
    CHECK_THROWS_AS(run(c), IoError);
}
