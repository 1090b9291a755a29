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
#include <string>
#include <string_view>
#include <vector>

#include "ddfluor/geometry.hpp"

namespace ddf {

enum class RegimeKind { independent_atoms, strong_drive_weak_ddi, strong_ddi_weak_drive, comparable };

std::string_view to_string(RegimeKind k);

struct Regime {
    RegimeKind kind = RegimeKind::comparable;
    double min_rabi = 0.0;  ///< min |Ω(r_μ)|
    double max_rabi = 0.0;  ///< max |Ω(r_μ)|
    double omega22 = 0.0;   ///< |Ω_22| of the actual geometry
    /// |Ω_22| in the two-level geometry, otherwise the smallest eigenvalue
    /// magnitude of Ω_ij (orientation independent).
    double ddi_scale = 0.0;
    /// Orthogonal couplings Ω_21 = Ω_32 vanish, so only |2>, |4> take part.
    bool two_level_geometry = false;
};

/// Factor separating a dominant from a perturbing energy scale.
inline constexpr double kRegimeDominance = 5.0;
/// Below this largest |eigenvalue of Ω_ij| (in γ) the dipole-dipole
/// splitting is not resolvable.
inline constexpr double kNegligibleDdi = 1.0;

Regime classify_regime(const CouplingSet& c);

/// Dressed state of the two-level reduction. Amplitudes are over
/// (|e_1 e_2>, |g_1 e_2>, |e_1 g_2>, |g_1 g_2>); energies follow the sign
/// convention below: they are eigenvalues of
/// -(H_L + H_Ω) restricted to the {|2>, |4>} ⊗ {|2>, |4>} block.
struct DressedLevel {
    std::string label;
    std::array<double, 4> amplitude{};
    double energy = 0.0;
};

/// Limit Ω(r_μ) ≫ |Ω_22|: first order in Ω_22.
std::array<DressedLevel, 4> strong_drive_levels(double rabi1, double rabi2, double omega22);

/// Limit Ω(r_μ) ≪ |Ω_22|: second order in Ω(r_μ). Throws DomainError for Ω_22 = 0.
std::array<DressedLevel, 4> strong_ddi_levels(double rabi1, double rabi2, double omega22);

/// The 4 × 4 block Hamiltonian in the DressedLevel basis and convention.
Eigen::Matrix4d two_level_block(double rabi1, double rabi2, double omega22);

/// Exact eigenvalues of two_level_block, ascending.
std::array<double, 4> exact_block_energies(double rabi1, double rabi2, double omega22);

/// Predicted line positions (detuning from ω_L, units of γ), ascending and
/// symmetric about zero. Throws DomainError for the comparable regime.
std::vector<double> predict_peaks(const Regime& regime, const CouplingSet& c);

}  // namespace ddf
