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

#include <array>
#include <utility>

#include "ddfluor/types.hpp"

namespace ddf {

/// Relative placement of the two atoms. Lengths are in units of the
/// transition wavelength, angles in radians.
struct Geometry {
    double R = 0.1;        ///< interatomic separation, > 0
    double theta = kPi / 2;  ///< polar angle of r2 - r1, [0, π]
    double phi = 0.0;      ///< azimuth of r2 - r1, [0, 2π)
    Vec3 r1{0.05, 0.0, 0.0};

    /// Unit vector along r2 - r1.
    Vec3 direction() const;
    Vec3 r2() const { return r1 + R * direction(); }

    /// Throws DomainError on R <= 0 ("coincident atoms"), ConfigError-free:
    /// angle ranges are checked with a small slack.
    void validate() const;

    /// k0 R.
    double eta() const { return kWaveNumber * R; }

    bool operator==(const Geometry&) const = default;
};

/// Transition dipoles d_1 = D ε(+), d_2 = D e_z, d_3 = -D ε(-), with D = 1.
struct DipoleBasis {
    std::array<CVec3, 3> d;

    static const DipoleBasis& standard();
};

/// Standing-wave drive polarized along z, propagating along +x.
struct DriveConfig {
    double omega0 = 0.0;                      ///< peak Rabi frequency Ω (γ)
    std::array<double, 3> detunings{0, 0, 0};  ///< Δ_i = ω_L - ω_i (γ)

    void validate() const;
    bool operator==(const DriveConfig&) const = default;
};

/// Dipole-dipole couplings and local drive strengths for one geometry.
/// Indices are 0-based: omega(1, 0) is Ω_21.
struct CouplingSet {
    Mat3c omega = Mat3c::Zero();
    Mat3c gamma = Mat3c::Zero();
    double rabi1 = 0.0;
    double rabi2 = 0.0;
    double eta = 0.0;
};

/// Radiative coupling tensor, normalized so that d_i^T Re(χ) d_j^* is Ω_ij
/// and d_i^T Im(χ) d_j^* is Γ_ij directly in units of γ.
Mat3c coupling_tensor(const Geometry& g);

/// Ω_ij from the closed-form expressions. Hermitian; lower triangle and
/// diagonal are the primary values.
Mat3c coherent_couplings(const Geometry& g);

/// Γ_ij from the closed-form expressions.
Mat3c incoherent_couplings(const Geometry& g);

/// Tensor-route evaluation d_i^T Re/Im(χ) d_j^*. Used as a cross-check of
/// the closed forms.
Mat3c coherent_couplings_from_tensor(const Geometry& g);
Mat3c incoherent_couplings_from_tensor(const Geometry& g);

/// Ω(r_μ) = Ω sin(k_L · r_μ), signed.
std::pair<double, double> rabi_frequencies(const Geometry& g, const DriveConfig& d);

CouplingSet compute_couplings(const Geometry& g, const DriveConfig& d);

/// Closed forms at θ = 0, where only η enters. Used by the small-distance
/// estimator: Ω_11(θ=0) couples dipoles perpendicular to R, Ω_22(θ=0) the
/// dipoles along R.
double omega11_axial(double eta);
double omega22_axial(double eta);

}  // namespace ddf
