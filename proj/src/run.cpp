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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>
#include <openssl/evp.h>

#include "ddfluor/config.hpp"
#include "ddfluor/dressed.hpp"
#include "ddfluor/error.hpp"
#include "ddfluor/inference.hpp"

namespace ddf {

using nlohmann::json;

namespace {

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error("digest computation failed");
    }
    std::string out;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        out += buf;
    }
    return out;
}

json matrix_json(const Mat3c& m) {
    json re = json::array(), im = json::array();
    for (int i = 0; i < 3; ++i) {
        json rr = json::array(), ri = json::array();
        for (int j = 0; j < 3; ++j) {
            rr.push_back(m(i, j).real());
            ri.push_back(m(i, j).imag());
        }
        re.push_back(rr);
        im.push_back(ri);
    }
    return {{"re", re}, {"im", im}};
}

json peaks_json(const PeakSet& p) {
    json out = json::array();
    for (std::size_t i = 0; i < p.size(); ++i) {
        out.push_back({{"position", p.positions[i]}, {"height", p.heights[i]}, {"width", p.widths[i]}});
    }
    return out;
}

json estimate_json(const Estimate& e, const std::string& digest) {
    json details = json::object();
    for (const auto& [k, v] : e.details) details[k] = v;
    json out = {{"method", std::string(to_string(e.method))},
                {"value", e.value},
                {"units", e.units},
                {"ambiguity", e.ambiguity},
                {"residual", e.residual},
                {"inputs_digest", digest},
                {"flags", e.flags},
                {"details", details}};
    if (e.units == "rad") out["value_over_pi"] = e.value / kPi;
    return out;
}

json levels_json(const std::array<DressedLevel, 4>& levels) {
    json out = json::array();
    for (const auto& l : levels) {
        out.push_back({{"label", l.label},
                       {"amplitude", json::array({l.amplitude[0], l.amplitude[1], l.amplitude[2], l.amplitude[3]})},
                       {"energy", l.energy}});
    }
    return out;
}

// Fixed-point text with at least 15 significant digits, never exponent form.
std::string decimal(double v) {
    if (v == 0.0 || !std::isfinite(v)) return v == 0.0 ? "0" : std::to_string(v);
    const int magnitude = static_cast<int>(std::floor(std::log10(std::abs(v))));
    const int decimals = std::clamp(14 - magnitude, 1, 330);
    std::vector<char> buf(static_cast<std::size_t>(decimals) + 340);
    std::snprintf(buf.data(), buf.size(), "%.*f", decimals, v);
    return buf.data();
}

struct Writer {
    std::filesystem::path dir;
    std::vector<std::filesystem::path> files;

    void text(const std::string& name, const std::string& body) {
        const auto path = dir / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot write " + path.string());
        out << body;
        if (!out) throw IoError("write failed: " + path.string());
        files.push_back(path);
    }

    void csv(const std::string& name, const char* header, const std::vector<double>& x,
             const std::vector<double>& y) {
        std::string body = std::string(header) + "\n";
        for (std::size_t i = 0; i < x.size(); ++i) body += decimal(x[i]) + "," + decimal(y[i]) + "\n";
        text(name, body);
    }
};

struct Simulation {
    CouplingSet couplings;
    Liouvillian liouvillian;
    SteadyState steady;
};

Simulation simulate(const RunConfig& c) {
    Simulation s;
    s.couplings = compute_couplings(c.geometry, c.drive);
    s.liouvillian = build_liouvillian(build_hamiltonian(c.geometry, c.drive, s.couplings), s.couplings);
    s.steady = steady_state(s.liouvillian);
    return s;
}

Spectrum simulate_spectrum(const RunConfig& c, const Simulation& s) {
    const auto grid = linear_grid(c.grid.min, c.grid.max, c.grid.count);
    return spectrum(s.liouvillian, s.steady.state, c.detector, c.geometry, grid);
}

std::vector<std::pair<double, double>> rotation_scan(const RunConfig& c) {
    const auto angles = linear_grid(c.scan.min, c.scan.max, c.scan.count);
    std::vector<double> sample(angles.size());
    for (std::size_t i = 0; i < angles.size(); ++i) sample[i] = angles[i] + c.scan.offset;
    auto scan = sigma_intensity_scan(c.geometry, c.drive, sample);
    for (std::size_t i = 0; i < angles.size(); ++i) scan[i].first = angles[i];
    return scan;
}

json steady_json(const Simulation& s) {
    json pops = json::array();
    for (int atom = 1; atom <= 2; ++atom) {
        json row = json::array();
        for (int level = 1; level <= kLevels; ++level) row.push_back(s.steady.state.population(atom, level));
        pops.push_back(row);
    }
    return {{"populations", pops},
            {"residual", s.steady.residual},
            {"null_dimension", s.steady.null_dimension},
            {"degenerate", s.steady.degenerate},
            {"trace", s.steady.state.trace_real()},
            {"min_eigenvalue", s.steady.state.min_eigenvalue()}};
}

json regime_json(const Regime& r) {
    return {{"kind", std::string(to_string(r.kind))},
            {"min_rabi", r.min_rabi},
            {"max_rabi", r.max_rabi},
            {"omega22_abs", r.omega22},
            {"ddi_scale", r.ddi_scale},
            {"two_level_geometry", r.two_level_geometry}};
}

json execute(const RunConfig& c, Writer& w) {
    json report = {{"task", std::string(to_string(c.task))}};
    const std::string digest = sha256_hex(serialize_config(c));

    switch (c.task) {
        case Task::couplings: {
            const CouplingSet cs = compute_couplings(c.geometry, c.drive);
            report["omega"] = matrix_json(cs.omega);
            report["gamma"] = matrix_json(cs.gamma);
            report["omega22_magnitude"] = std::abs(cs.omega(1, 1));
            report["rabi1"] = cs.rabi1;
            report["rabi2"] = cs.rabi2;
            report["eta"] = cs.eta;
            report["r2"] = json::array({c.geometry.r2().x(), c.geometry.r2().y(), c.geometry.r2().z()});
            break;
        }
        case Task::steady_state: {
            const Simulation s = simulate(c);
            report["steady_state"] = steady_json(s);
            report["intensity"] = intensity(s.steady.state, c.detector, c.geometry);
            break;
        }
        case Task::spectrum: {
            const Simulation s = simulate(c);
            const Spectrum sp = simulate_spectrum(c, s);
            w.csv("spectrum.csv", "detuning_gamma,intensity", sp.detuning, sp.values);
            const PeakSet peaks = detect_peaks(sp, c.prominence);
            const Regime regime = classify_regime(s.couplings);
            report["channel"] = std::string(to_string(sp.channel));
            report["peaks"] = peaks_json(peaks);
            report["regime"] = regime_json(regime);
            try {
                report["predicted_peaks"] = predict_peaks(regime, s.couplings);
            } catch (const DomainError& e) {
                report["predicted_peaks"] = nullptr;
                report["prediction_note"] = e.what();
            }
            report["regularized_points"] = sp.regularized;
            report["steady_state"] = steady_json(s);
            break;
        }
        case Task::intensity_scan: {
            const auto scan = rotation_scan(c);
            std::vector<double> x, y;
            for (const auto& [a, v] : scan) {
                x.push_back(a);
                y.push_back(v);
            }
            w.csv("scan.csv", "dtheta_rad,intensity", x, y);
            report["points"] = scan.size();
            report["max"] = *std::max_element(y.begin(), y.end());
            break;
        }
        case Task::dressed: {
            const CouplingSet cs = compute_couplings(c.geometry, c.drive);
            const Regime regime = classify_regime(cs);
            const double o22 = cs.omega(1, 1).real();
            report["regime"] = regime_json(regime);
            report["strong_drive_levels"] = levels_json(strong_drive_levels(cs.rabi1, cs.rabi2, o22));
            if (o22 != 0.0) report["strong_ddi_levels"] = levels_json(strong_ddi_levels(cs.rabi1, cs.rabi2, o22));
            const auto exact = exact_block_energies(cs.rabi1, cs.rabi2, o22);
            report["exact_energies"] = json::array({exact[0], exact[1], exact[2], exact[3]});
            try {
                report["predicted_peaks"] = predict_peaks(regime, cs);
            } catch (const DomainError& e) {
                report["predicted_peaks"] = nullptr;
                report["prediction_note"] = e.what();
            }
            break;
        }
        case Task::estimate_r: {
            const Simulation s = simulate(c);
            const Spectrum sp = simulate_spectrum(c, s);
            w.csv("spectrum.csv", "detuning_gamma,intensity", sp.detuning, sp.values);
            const PeakSet peaks = detect_peaks(sp, c.prominence);
            std::string method = c.estimator;
            if (method == "auto") {
                switch (classify_regime(s.couplings).kind) {
                    case RegimeKind::independent_atoms:
                        method = "large";
                        break;
                    case RegimeKind::strong_ddi_weak_drive:
                        method = "small";
                        break;
                    case RegimeKind::strong_drive_weak_ddi:
                        method = "doublet";
                        break;
                    case RegimeKind::comparable:
                        throw DomainError("no distance estimator for the comparable regime; set estimator");
                }
            }
            Estimate e;
            if (method == "large") {
                e = estimate_distance_large(peaks, c.drive, c.geometry.r1);
            } else if (method == "small") {
                e = estimate_distance_small(peaks);
            } else {
                e = estimate_distance_doublet(peaks, c.geometry.theta);
            }
            report["peaks"] = peaks_json(peaks);
            report["estimate"] = estimate_json(e, digest);
            break;
        }
        case Task::estimate_phi: {
            const Simulation s = simulate(c);
            const Spectrum sp = simulate_spectrum(c, s);
            w.csv("spectrum.csv", "detuning_gamma,intensity", sp.detuning, sp.values);
            const PeakSet peaks = detect_peaks(sp, c.prominence);
            Estimate e = estimate_phi(peaks, c.drive, c.r_known);
            if (c.refine) e = refine_phi(e, peaks, c.drive, c.r_known, c.geometry.r1);
            report["peaks"] = peaks_json(peaks);
            report["estimate"] = estimate_json(e, digest);
            break;
        }
        case Task::estimate_theta: {
            const auto scan = rotation_scan(c);
            std::vector<double> x, y;
            for (const auto& [a, v] : scan) {
                x.push_back(a);
                y.push_back(v);
            }
            w.csv("scan.csv", "dtheta_rad,intensity", x, y);
            report["estimate"] = estimate_json(estimate_theta(scan), digest);
            break;
        }
    }
    return report;
}

template <typename E>
[[noreturn]] void rethrow_with(const std::string& prefix, const E& e) {
    throw E(prefix + e.what());
}

}  // namespace

std::string_view version() { return "0.1.0"; }

RunResult run(const RunConfig& c) {
    validate_config(c);
    const auto start = std::chrono::steady_clock::now();
    Writer w;
    w.dir = c.output_dir;
    std::error_code ec;
    std::filesystem::create_directories(w.dir, ec);
    if (ec) throw IoError("cannot create output directory " + c.output_dir + ": " + ec.message());

    const std::string prefix = "task " + std::string(to_string(c.task)) + ": ";
    json report;
    try {
        report = execute(c, w);
    } catch (const ConfigError& e) {
        rethrow_with(prefix, e);
    } catch (const DomainError& e) {
        rethrow_with(prefix, e);
    } catch (const InconsistentInputError& e) {
        rethrow_with(prefix, e);
    } catch (const NumericalError& e) {
        rethrow_with(prefix, e);
    }
    w.text("report.json", report.dump(2) + "\n");

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json manifest = {{"version", std::string(version())},
                     {"config", json::parse(serialize_config(c))},
                     {"wall_time_s", wall}};
    json files = json::array();
    for (const auto& f : w.files) files.push_back(f.filename().string());
    files.push_back("manifest.json");
    manifest["files"] = files;
    w.text("manifest.json", manifest.dump(2) + "\n");

    RunResult r;
    r.output_dir = w.dir;
    r.files = w.files;
    r.wall_seconds = wall;
    return r;
}

}  // namespace ddf
