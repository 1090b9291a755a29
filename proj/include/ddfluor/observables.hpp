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
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ddfluor/liouville.hpp"

namespace ddf {

enum class Channel { pi, sigma, total };

std::string_view to_string(Channel c);
Channel channel_from_string(std::string_view s);

/// Far-field detector. π keeps only the d_2 contribution, σ only d_1 and d_3.
struct Detector {
    Vec3 direction{0.0, 1.0, 0.0};
    Channel channel = Channel::pi;
    bool include_position_phase = true;

    static Detector along_y(Channel ch = Channel::pi) { return {Vec3(0, 1, 0), ch, true}; }
    static Detector along_minus_x(Channel ch = Channel::pi) { return {Vec3(-1, 0, 0), ch, true}; }
    static Detector along_z(Channel ch = Channel::sigma) { return {Vec3(0, 0, 1), ch, true}; }

    bool operator==(const Detector&) const = default;
};

/// Parses "+y", "-x", "+z" (and the other signed axes).
Vec3 direction_from_preset(std::string_view preset);

/// Cartesian components of the far-field operator; plus[k] = minus[k]†.
struct DetectionOperators {
    std::array<Op16, 3> minus;
    std::array<Op16, 3> plus;
};

DetectionOperators detection_operator(const Detector& det, const Geometry& g);

/// Normally ordered steady-state intensity Σ_k <E⁻_k E⁺_k> (arbitrary units).
double intensity(const DensityMatrix& rho_ss, const Detector& det, const Geometry& g);

enum class Normalization { raw, max1 };

struct Spectrum {
    std::vector<double> detuning;  ///< ω - ω_L in units of γ
    std::vector<double> values;
    Channel channel = Channel::pi;
    Normalization normalization = Normalization::raw;
    /// Grid points where the shifted system was singular and -ε regularized.
    std::vector<std::size_t> regularized;

    Spectrum normalized() const;
};

std::vector<double> linear_grid(double min, double max, std::size_t count);

/// 2001 points over ±1.3 times the largest expected line position.
std::vector<double> default_grid(const CouplingSet& c, std::size_t count = 2001);

/// Incoherent spectrum from the regression theorem, evaluated in the
/// frequency domain: per grid point and component, solve
/// (L - iν) x = vec(E⁺ρ - <E⁺>ρ) and accumulate -Re Tr[E⁻ x].
Spectrum spectrum(const Liouvillian& L, const DensityMatrix& rho_ss, const Detector& det, const Geometry& g,
                  std::span<const double> grid);

/// Regularization used at singular grid points.
inline constexpr double kSpectrumRegularization = 1e-9;

/// Surface geometry (φ = π/2): σ intensity along +z as the polar angle is
/// swept. Returns (Δθ, intensity) pairs; Δθ may lie outside [0, π].
std::vector<std::pair<double, double>> sigma_intensity_scan(const Geometry& g_base, const DriveConfig& d,
                                                            std::span<const double> dtheta_grid);

}  // namespace ddf
