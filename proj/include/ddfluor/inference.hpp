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

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ddfluor/geometry.hpp"
#include "ddfluor/observables.hpp"

namespace ddf {

struct PeakSet {
    std::vector<double> positions;  ///< strictly increasing, units of γ
    std::vector<double> heights;
    std::vector<double> widths;  ///< FWHM estimates

    std::size_t size() const { return positions.size(); }
    bool empty() const { return positions.empty(); }
};

inline constexpr double kDefaultProminence = 0.02;

/// Local maxima above prominence × global max, refined with a three-point
/// parabola. Symmetric pairs are kept separate.
PeakSet detect_peaks(std::span<const double> detuning, std::span<const double> values,
                     double prominence = kDefaultProminence);
PeakSet detect_peaks(const Spectrum& s, double prominence = kDefaultProminence);

enum class EstimateMethod { rabi_inversion, doublet_split, small_r_peaks, phi_formula, theta_scan };

std::string_view to_string(EstimateMethod m);

struct Estimate {
    EstimateMethod method = EstimateMethod::rabi_inversion;
    double value = 0.0;
    std::string units;  ///< "lambda" or "rad"
    double residual = 0.0;
    /// Every value the method cannot tell apart from `value` (includes it).
    std::vector<double> ambiguity;
    std::vector<std::string> flags;
    /// Named by-products (intermediate Rabi frequencies, refined R, ...).
    std::vector<std::pair<std::string, double>> details;

    bool has_flag(std::string_view f) const;
};

inline constexpr std::string_view kFlagSymmetricPlacement = "theta in {0, pi} or symmetric placement";
inline constexpr std::string_view kFlagPhiNearHalfPi = "phi near pi/2 or 3pi/2";
inline constexpr std::string_view kFlagInversionsDisagree = "inner and outer inversions disagree";
inline constexpr std::string_view kFlagSinglePair = "single sideband pair";
inline constexpr std::string_view kFlagRefined = "least-squares refined";

/// Standing-wave inversion of two sideband Rabi frequencies, atoms taken
/// collinear along the laser axis. Returns x2 - x1 on the first branch and
/// all branches within the first period of sin(k_L x).
Estimate estimate_distance_large(const PeakSet& p, const DriveConfig& d, const Vec3& r1_known);

/// Doublet splitting 2|Ω_22| inverted for R at a known polar angle.
Estimate estimate_distance_doublet(const PeakSet& p, double theta);

/// Weak-drive small-R spectrum: sidebands at |Ω_11(θ=0)| and |Ω_22(θ=0)|
/// inverted for R by bisection on η ∈ (1e-3, π].
Estimate estimate_distance_small(const PeakSet& p);

/// Strong-drive waveguide spectrum (θ = π/2) with R known.
Estimate estimate_phi(const PeakSet& p, const DriveConfig& d, double R_known);

/// Least-squares fit of the two-level dressed-state transition frequencies
/// over (R, φ), started from a formula estimate.
Estimate refine_phi(const Estimate& start, const PeakSet& p, const DriveConfig& d, double R_known,
                    const Vec3& r1_known = Vec3(0.05, 0.0, 0.0));

/// σ-intensity rotation scan (Δθ, I). Returns the offset θ0 such that the
/// intensity vanishes at Δθ + θ0 ∈ {0, π/2, π, ...}, reduced to [0, π/2).
Estimate estimate_theta(std::span<const std::pair<double, double>> scan);

inline constexpr double kZeroIntensityThreshold = 1e-3;
/// Local minima of the scan below this fraction of its maximum count as
/// zeros sampled off-centre.
inline constexpr double kZeroDipDepth = 0.1;

/// Solves |f(η)| = target on the decreasing branch ahead of the first
/// minimum of |f| in (1e-3, π]. Throws InconsistentInputError when no root.
double invert_decreasing(const std::function<double(double)>& f, double target);

}  // namespace ddf
