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

#include "ddfluor/geometry.hpp"

#include <cmath>
#include <string>

#include "ddfluor/error.hpp"

namespace ddf {

namespace {

constexpr double kAngleSlack = 1e-9;

// sin/cos with exact zeros at multiples of π/2, so that the analytic
// limits of the cot θ terms come out as exact zeros.
double clean(double v) { return std::abs(v) < 1e-15 ? 0.0 : v; }

struct Trig {
    double s, c;
};

Trig trig(double angle) { return {clean(std::sin(angle)), clean(std::cos(angle))}; }

// Radial factors of Ω_31 / Γ_31 without the angular part.
double coherent_radial(double eta) {
    const double e3 = eta * eta * eta;
    return 3.0 / (4.0 * e3) * ((eta * eta - 3.0) * std::cos(eta) - 3.0 * eta * std::sin(eta));
}

double incoherent_radial(double eta) {
    const double e3 = eta * eta * eta;
    return 3.0 / (4.0 * e3) * ((eta * eta - 3.0) * std::sin(eta) + 3.0 * eta * std::cos(eta));
}

void require_separated(const Geometry& g) {
    if (!(g.R > 0.0)) throw DomainError("coincident atoms: R must be positive");
}

Mat3c hermitian_fill(Mat3c m) {
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) m(i, j) = std::conj(m(j, i));
    }
    return m;
}

// Shared assembly of the closed forms: `parallel` is the Ω_11/Γ_11 value and
// `radial` the Ω_31/Γ_31 radial factor.
Mat3c assemble(const Geometry& g, double parallel, double radial) {
    const auto [st, ct] = trig(g.theta);
    const cplx e1 = std::polar(1.0, -g.phi);
    const cplx e2 = std::polar(1.0, -2.0 * g.phi);

    Mat3c m = Mat3c::Zero();
    const cplx c31 = radial * st * st * e2;
    // -√2 cot θ sin²θ = -√2 sin θ cos θ, finite at θ ∈ {0, π}.
    const cplx c21 = -std::sqrt(2.0) * radial * st * ct * e1;
    // (2 cot²θ - 1) sin²θ = 2 cos²θ - sin²θ.
    const double c22 = parallel - radial * (2.0 * ct * ct - st * st);

    m(0, 0) = parallel;
    m(1, 1) = c22;
    m(2, 2) = parallel;
    m(1, 0) = c21;
    m(2, 0) = c31;
    m(2, 1) = -c21;
    return hermitian_fill(m);
}

Mat3c project(const Geometry& g, bool real_part) {
    const Mat3c chi = coupling_tensor(g);
    Eigen::Matrix3d part;
    for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) part(k, l) = real_part ? chi(k, l).real() : chi(k, l).imag();
    }
    const Mat3c p = part.cast<cplx>();
    const auto& d = DipoleBasis::standard().d;
    Mat3c out;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) out(i, j) = d[i].transpose() * p * d[j].conjugate();
    }
    return out;
}

}  // namespace

Vec3 Geometry::direction() const {
    const auto [st, ct] = trig(theta);
    const auto [sp, cp] = trig(phi);
    return {st * cp, st * sp, ct};
}

void Geometry::validate() const {
    require_separated(*this);
    if (!std::isfinite(R)) throw DomainError("R must be finite");
    if (theta < -kAngleSlack || theta > kPi + kAngleSlack) {
        throw DomainError("theta must lie in [0, pi], got " + std::to_string(theta));
    }
    if (phi < -kAngleSlack || phi > kTwoPi + kAngleSlack) {
        throw DomainError("phi must lie in [0, 2pi), got " + std::to_string(phi));
    }
    if (!r1.allFinite()) throw DomainError("r1 must be finite");
}

const DipoleBasis& DipoleBasis::standard() {
    static const DipoleBasis basis = [] {
        const double s = 1.0 / std::sqrt(2.0);
        DipoleBasis b;
        b.d[0] = CVec3(s, cplx(0, s), 0);    // ε(+)
        b.d[1] = CVec3(0, 0, 1);             // e_z
        b.d[2] = -CVec3(s, cplx(0, -s), 0);  // -ε(-)
        return b;
    }();
    return basis;
}

void DriveConfig::validate() const {
    if (!(omega0 >= 0.0) || !std::isfinite(omega0)) {
        throw DomainError("Omega must be a finite non-negative Rabi frequency");
    }
    for (double delta : detunings) {
        if (!std::isfinite(delta)) throw DomainError("detunings must be finite");
    }
}

Mat3c coupling_tensor(const Geometry& g) {
    require_separated(g);
    const double eta = g.eta();
    const cplx phase = std::polar(1.0, eta);
    const double e2 = eta * eta;
    const double e3 = e2 * eta;
    const cplx diag = (1.0 / eta + kI / e2 - 1.0 / e3) * phase;
    const cplx radial = (1.0 / eta + 3.0 * kI / e2 - 3.0 / e3) * phase;
    const Vec3 n = g.direction();
    // k0³ |D|² / (4π ε0 ħ) = 3γ/2.
    Mat3c chi;
    for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) chi(k, l) = 1.5 * ((k == l ? diag : 0.0) - n[k] * n[l] * radial);
    }
    return chi;
}

double omega11_axial(double eta) {
    // Ω_11 at θ = 0 (cos 2θ = 1).
    const double e3 = eta * eta * eta;
    return 3.0 / (8.0 * e3) * ((4.0 * eta * eta - 4.0) * std::cos(eta) - 4.0 * eta * std::sin(eta));
}

double omega22_axial(double eta) {
    return omega11_axial(eta) - 2.0 * coherent_radial(eta);
}

Mat3c coherent_couplings(const Geometry& g) {
    require_separated(g);
    const double eta = g.eta();
    const double c2t = std::cos(2.0 * g.theta);
    const double e3 = eta * eta * eta;
    const double omega11 = 3.0 / (8.0 * e3) *
                           ((3.0 * eta * eta - 1.0 + (eta * eta - 3.0) * c2t) * std::cos(eta) -
                            eta * (1.0 + 3.0 * c2t) * std::sin(eta));
    return assemble(g, omega11, coherent_radial(eta));
}

Mat3c incoherent_couplings(const Geometry& g) {
    require_separated(g);
    const double eta = g.eta();
    const double c2t = std::cos(2.0 * g.theta);
    const double e3 = eta * eta * eta;
    const double gamma11 = 3.0 / (8.0 * e3) *
                           ((3.0 * eta * eta - 1.0 + (eta * eta - 3.0) * c2t) * std::sin(eta) +
                            eta * (1.0 + 3.0 * c2t) * std::cos(eta));
    return assemble(g, gamma11, incoherent_radial(eta));
}

Mat3c coherent_couplings_from_tensor(const Geometry& g) { return project(g, true); }

Mat3c incoherent_couplings_from_tensor(const Geometry& g) { return project(g, false); }

std::pair<double, double> rabi_frequencies(const Geometry& g, const DriveConfig& d) {
    const Vec3 k_laser(kWaveNumber, 0.0, 0.0);
    return {d.omega0 * std::sin(k_laser.dot(g.r1)), d.omega0 * std::sin(k_laser.dot(g.r2()))};
}

CouplingSet compute_couplings(const Geometry& g, const DriveConfig& d) {
    g.validate();
    CouplingSet c;
    c.omega = coherent_couplings(g);
    c.gamma = incoherent_couplings(g);
    std::tie(c.rabi1, c.rabi2) = rabi_frequencies(g, d);
    c.eta = g.eta();
    return c;
}

}  // namespace ddf
