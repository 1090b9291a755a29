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

#include "ddfluor/dressed.hpp"

#include <algorithm>
#include <cmath>

#include "ddfluor/error.hpp"

namespace ddf {

namespace {

std::vector<double> mirrored(std::vector<double> positive) {
    std::vector<double> out{0.0};
    for (double v : positive) {
        const double a = std::abs(v);
        if (a == 0.0) continue;
        out.push_back(a);
        out.push_back(-a);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

std::string_view to_string(RegimeKind k) {
    switch (k) {
        case RegimeKind::independent_atoms:
            return "independent_atoms";
        case RegimeKind::strong_drive_weak_ddi:
            return "strong_drive_weak_ddi";
        case RegimeKind::strong_ddi_weak_drive:
            return "strong_ddi_weak_drive";
        case RegimeKind::comparable:
            return "comparable";
    }
    return "?";
}

Regime classify_regime(const CouplingSet& c) {
    Regime r;
    r.min_rabi = std::min(std::abs(c.rabi1), std::abs(c.rabi2));
    r.max_rabi = std::max(std::abs(c.rabi1), std::abs(c.rabi2));
    r.omega22 = std::abs(c.omega(1, 1));
    const double scale = std::max(1.0, c.omega.cwiseAbs().maxCoeff());
    r.two_level_geometry = std::abs(c.omega(1, 0)) < 1e-12 * scale;
    Eigen::SelfAdjointEigenSolver<Mat3c> es(c.omega, Eigen::EigenvaluesOnly);
    const Eigen::Vector3d eig = es.eigenvalues().cwiseAbs();
    r.ddi_scale = r.two_level_geometry ? r.omega22 : eig.minCoeff();

    if (eig.maxCoeff() < kNegligibleDdi) {
        r.kind = RegimeKind::independent_atoms;
    } else if (r.min_rabi > kRegimeDominance * r.omega22) {
        r.kind = RegimeKind::strong_drive_weak_ddi;
    } else if (r.ddi_scale > kRegimeDominance * r.max_rabi) {
        r.kind = RegimeKind::strong_ddi_weak_drive;
    } else {
        r.kind = RegimeKind::comparable;
    }
    return r;
}

std::array<DressedLevel, 4> strong_drive_levels(double rabi1, double rabi2, double omega22) {
    const double a = rabi1;
    const double b = rabi2;
    const double s = omega22;
    return {{
        {"p", {0.5, 0.5, 0.5, 0.5}, (a + b + s) / 2},
        {"m", {0.5, -0.5, -0.5, 0.5}, -(a + b - s) / 2},
        {"q", {-0.5, -0.5, 0.5, 0.5}, (a - b - s) / 2},
        {"l", {-0.5, 0.5, -0.5, 0.5}, -(a - b + s) / 2},
    }};
}

std::array<DressedLevel, 4> strong_ddi_levels(double rabi1, double rabi2, double omega22) {
    if (omega22 == 0.0) throw DomainError("strong dipole-dipole limit needs a non-zero Omega_22");
    const double h = 1.0 / std::sqrt(2.0);
    const double diff2 = (rabi1 - rabi2) * (rabi1 - rabi2) / (4.0 * omega22);
    const double sum2 = (rabi1 + rabi2) * (rabi1 + rabi2) / (4.0 * omega22);
    return {{
        {"a", {0.0, -h, h, 0.0}, -(omega22 + diff2)},
        {"+", {-h, 0.0, 0.0, h}, diff2},
        {"-", {h, 0.0, 0.0, h}, -sum2},
        {"0", {0.0, h, h, 0.0}, omega22 + sum2},
    }};
}

Eigen::Matrix4d two_level_block(double rabi1, double rabi2, double omega22) {
    // Basis order (ee, ge, eg, gg), first letter atom 1.
    Eigen::Matrix4d h = Eigen::Matrix4d::Zero();
    // Atom 1 flips: ee <-> ge, eg <-> gg.
    h(0, 1) = h(1, 0) = 0.5 * rabi1;
    h(2, 3) = h(3, 2) = 0.5 * rabi1;
    // Atom 2 flips: ee <-> eg, ge <-> gg.
    h(0, 2) = h(2, 0) = 0.5 * rabi2;
    h(1, 3) = h(3, 1) = 0.5 * rabi2;
    // Excitation exchange ge <-> eg.
    h(1, 2) = h(2, 1) = omega22;
    return h;
}

std::array<double, 4> exact_block_energies(double rabi1, double rabi2, double omega22) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(two_level_block(rabi1, rabi2, omega22),
                                                      Eigen::EigenvaluesOnly);
    const Eigen::Vector4d ev = es.eigenvalues();
    return {ev[0], ev[1], ev[2], ev[3]};
}

std::vector<double> predict_peaks(const Regime& regime, const CouplingSet& c) {
    const double o1 = c.rabi1;
    const double o2 = c.rabi2;
    const double s = std::abs(c.omega(1, 1));
    switch (regime.kind) {
        case RegimeKind::independent_atoms:
            return mirrored({o1, o2});
        case RegimeKind::strong_drive_weak_ddi: {
            const double a1 = std::abs(o1);
            const double a2 = std::abs(o2);
            return mirrored({a1 + s, a1 - s, a2 + s, a2 - s});
        }
        case RegimeKind::strong_ddi_weak_drive: {
            if (regime.two_level_geometry) {
                if (s == 0.0) throw DomainError("strong dipole-dipole prediction needs a non-zero Omega_22");
                const double sq = o1 * o1 + o2 * o2;
                return mirrored({s + o1 * o2 / s, s + (o1 + o2) * (o1 + o2) / (2 * s), 2 * s + sq / (2 * s),
                                 sq / (2 * s)});
            }
            return mirrored({omega11_axial(c.eta), omega22_axial(c.eta)});
        }
        case RegimeKind::comparable:
            break;
    }
    throw DomainError("no closed-form prediction; adjust drive strength");
}

}  // namespace ddf
