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

#include <algorithm>

#include "ddfluor/error.hpp"
#include "ddfluor/inference.hpp"
#include "scenarios.hpp"

using namespace ddf;

namespace {

PeakSet peaks(std::vector<double> pos) {
    std::sort(pos.begin(), pos.end());
    PeakSet p;
    p.positions = pos;
    p.heights.assign(pos.size(), 1.0);
    p.widths.assign(pos.size(), 2.0);
    return p;
}

std::vector<double> lorentzians(const std::vector<double>& x, const std::vector<double>& centers, double fwhm) {
    std::vector<double> y(x.size(), 0.0);
    const double hw = fwhm / 2;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (double c : centers) y[i] += hw * hw / ((x[i] - c) * (x[i] - c) + hw * hw);
    }
    return y;
}

bool contains(const std::vector<double>& v, double x, double tol) {
    return std::any_of(v.begin(), v.end(), [&](double a) { return std::abs(a - x) <= tol; });
}

DriveConfig drive(double omega) {
    DriveConfig d;
    d.omega0 = omega;
    return d;
}

std::vector<std::pair<double, double>> shifted_surface_scan(double offset, double range, std::size_t n) {
    const auto s = scenario::surface();
    const auto grid = linear_grid(0.0, range, n);
    std::vector<double> rotated(grid);
    for (double& x : rotated) x += offset;
    auto scan = sigma_intensity_scan(s.geometry, s.drive, rotated);
    for (std::size_t i = 0; i < n; ++i) scan[i].first = grid[i];
    return scan;
}

const std::vector<double> kWaveguidePeaks{-250.86, -218.59, -123.95, -91.68, 0.0, 91.68, 123.95, 218.59, 250.86};

}  // namespace

TEST_CASE("single Lorentzian") {
    const auto x = linear_grid(-20, 20, 401);
    const PeakSet p = detect_peaks(x, lorentzians(x, {0.0}, 2.0));
    REQUIRE(p.size() == 1);
    CHECK(std::abs(p.positions[0]) < 0.05);
    CHECK(p.heights[0] == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(p.widths[0] == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("four Lorentzians") {
    const auto x = linear_grid(-120, 120, 2001);
    const std::vector<double> c{-91.64, -50.0, 50.0, 91.64};
    const PeakSet p = detect_peaks(x, lorentzians(x, c, 2.0));
    REQUIRE(p.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(p.positions[i] - c[i]) < 0.2);
}

TEST_CASE("off-grid centre is refined by the parabola") {
    const auto x = linear_grid(-20, 20, 81);
    const PeakSet p = detect_peaks(x, lorentzians(x, {0.13}, 2.0));
    REQUIRE(p.size() == 1);
    CHECK(std::abs(p.positions[0] - 0.13) < 0.05);
}

TEST_CASE("peaks below the prominence threshold are dropped") {
    const auto x = linear_grid(-50, 50, 1001);
    auto y = lorentzians(x, {0.0}, 2.0);
    const auto small = lorentzians(x, {30.0}, 2.0);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += 0.01 * small[i];
    CHECK(detect_peaks(x, y).size() == 1);
    CHECK(detect_peaks(x, y, 0.005).size() == 2);
    CHECK(detect_peaks(x, std::vector<double>(x.size(), 0.0)).empty());
    CHECK_THROWS_AS(detect_peaks(x, y, 0.0), DomainError);
    CHECK_THROWS_AS(detect_peaks(x, y, 1.0), DomainError);
    CHECK_THROWS_AS(detect_peaks(std::vector<double>{}, std::vector<double>{}), DomainError);
}

TEST_CASE("simulated waveguide spectrum shows nine lines") {
    const Spectrum sp = scenario::simulate(scenario::waveguide(0.1 * kPi));
    const PeakSet p = detect_peaks(sp);
    REQUIRE(p.size() == 9);
    for (std::size_t i = 0; i < 9; ++i) CHECK(std::abs(p.positions[i] - kWaveguidePeaks[i]) < 1.0);
    CHECK(std::is_sorted(p.positions.begin(), p.positions.end()));
    for (double h : p.heights) CHECK(h > 0);
}

TEST_CASE("standing-wave inversion of two sideband pairs") {
    const Estimate e = estimate_distance_large(peaks({-80.90, -30.90, 0.0, 30.90, 80.90}), drive(100), Vec3(0.05, 0, 0));
    CHECK(e.method == EstimateMethod::rabi_inversion);
    CHECK(e.units == "lambda");
    CHECK(e.value == doctest::Approx(0.1003).epsilon(1e-3));
    CHECK(contains(e.ambiguity, e.value, 0));
    CHECK(contains(e.ambiguity, 0.30, 1e-3));
    CHECK(e.residual < 0.01);
}

TEST_CASE("standing-wave inversion with coincident sidebands") {
    const Estimate e = estimate_distance_large(peaks({-30.90, 0.0, 30.90}), drive(100), Vec3(0.05, 0, 0));
    CHECK(e.has_flag(kFlagSymmetricPlacement));
    CHECK(contains(e.ambiguity, 0.0, 1e-12));
    CHECK(contains(e.ambiguity, 0.4, 1e-3));
}

TEST_CASE("standing-wave inversion at the antinode and beyond") {
    const Estimate e = estimate_distance_large(peaks({-100, -30.90, 0, 30.90, 100}), drive(100), Vec3(0.05, 0, 0));
    CHECK(e.value == doctest::Approx(0.2));
    CHECK_THROWS_AS(estimate_distance_large(peaks({-120, -30.9, 0, 30.9, 120}), drive(100), Vec3(0.05, 0, 0)),
                    InconsistentInputError);
    CHECK_THROWS_AS(estimate_distance_large(peaks({0.0}), drive(100), Vec3(0.05, 0, 0)), InconsistentInputError);
}

TEST_CASE("standing-wave inversion of a simulated well separated pair") {
    const PeakSet p = detect_peaks(scenario::simulate(scenario::independent_pair()));
    const Estimate e = estimate_distance_large(p, drive(100), Vec3(0.05, 0, 0));
    CHECK(contains(e.ambiguity, 0.3, 0.005));
}

TEST_CASE("doublet splitting of the split-sideband configuration") {
    const PeakSet p = detect_peaks(scenario::simulate(scenario::split_sidebands()));
    const Estimate e = estimate_distance_doublet(p, kPi / 2);
    CHECK(e.method == EstimateMethod::doublet_split);
    CHECK(e.value == doctest::Approx(0.08).epsilon(0.01));
}

TEST_CASE("small-distance closed forms are monotone on the bracket") {
    double prev_11 = 1e300, prev_22 = 1e300;
    for (double R = 0.02; R <= 0.06 + 1e-12; R += 0.0005) {
        const double a = std::abs(omega11_axial(kWaveNumber * R)), b = std::abs(omega22_axial(kWaveNumber * R));
        CHECK(a < prev_11);
        CHECK(b < prev_22);
        prev_11 = a;
        prev_22 = b;
    }
}

TEST_CASE("small-distance inversion of a single pair") {
    const Estimate e = estimate_distance_small(peaks({-91.64, 0.0, 91.64}));
    CHECK(e.method == EstimateMethod::small_r_peaks);
    CHECK(std::abs(e.value - 0.04) < 0.001);
    CHECK(e.has_flag(kFlagSinglePair));
    CHECK(e.ambiguity.size() == 2);
    CHECK(contains(e.ambiguity, e.value, 0));
}

TEST_CASE("small-distance inversion of two pairs from an oblique pair") {
    const PeakSet p = detect_peaks(scenario::simulate(scenario::close_pair_oriented(kPi / 5, kPi / 15)));
    const Estimate e = estimate_distance_small(p);
    REQUIRE(e.details.size() == 2);
    CHECK(std::abs(e.details[0].second - 0.04) < 0.002);
    CHECK(std::abs(e.details[1].second - 0.04) < 0.002);
    CHECK_FALSE(e.has_flag(kFlagInversionsDisagree));
}

TEST_CASE("small-distance inversion with disagreeing pairs keeps the outer one") {
    const double outer = std::abs(omega22_axial(kWaveNumber * 0.04));
    const Estimate e = estimate_distance_small(peaks({-outer, -60.0, 0.0, 60.0, outer}));
    CHECK(e.has_flag(kFlagInversionsDisagree));
    CHECK(e.value == doctest::Approx(0.04).epsilon(1e-6));
    CHECK(e.residual > 0.001);
}

TEST_CASE("small-distance inversion without sidebands") {
    CHECK_THROWS_WITH_AS(estimate_distance_small(peaks({0.0})), "no dipole-dipole splitting resolved",
                         InconsistentInputError);
}

TEST_CASE("small-distance round trip over a few orientations") {
    const std::vector<std::pair<double, double>> angles{{0.3, 1.0}, {1.2, 4.0}, {2.5, 2.2}, {kPi / 2, 0.7}};
    for (const auto& [theta, phi] : angles) {
        const Estimate e = estimate_distance_small(detect_peaks(scenario::simulate(scenario::close_pair_oriented(theta, phi))));
        CHECK(std::abs(e.value - 0.04) / 0.04 < 0.05);
    }
}

TEST_CASE("azimuth from nine reference waveguide lines") {
    const Estimate e = estimate_phi(peaks(kWaveguidePeaks), drive(350), 0.07);
    CHECK(e.method == EstimateMethod::phi_formula);
    CHECK(e.value / kPi == doctest::Approx(0.091).epsilon(0.003 / 0.091));
    CHECK(contains(e.ambiguity, kTwoPi - e.value, 1e-12));
    CHECK_FALSE(e.has_flag(kFlagPhiNearHalfPi));
}

TEST_CASE("azimuth with equal Rabi frequencies") {
    const Estimate e = estimate_phi(peaks({-196.1, -163.9, 0.0, 163.9, 196.1}), drive(350), 0.07);
    CHECK(e.value == kPi / 2);
    CHECK(e.has_flag(kFlagPhiNearHalfPi));
    CHECK(contains(e.ambiguity, 3 * kPi / 2, 0));
}

TEST_CASE("azimuth with an impossible Rabi difference") {
    CHECK_THROWS_AS(estimate_phi(peaks({-356, -324, -66, -34, 0, 34, 66, 324, 356}), drive(350), 0.07),
                    InconsistentInputError);
    CHECK_THROWS_AS(estimate_phi(peaks(kWaveguidePeaks), drive(350), 0.0), DomainError);
}

TEST_CASE("azimuth round trip on simulated waveguide spectra") {
    for (double f : {0.1, 0.2, 0.3}) {
        const PeakSet p = detect_peaks(scenario::simulate(scenario::waveguide(f * kPi)));
        const Estimate e = estimate_phi(p, drive(350), 0.07);
        CHECK(std::abs(e.value / kPi - f) / f < 0.15);
        const Estimate r = refine_phi(e, p, drive(350), 0.07);
        CHECK(r.has_flag(kFlagRefined));
        CHECK(std::abs(r.value / kPi - f) / f < 0.15);
        CHECK(std::abs(r.value / kPi - f) <= std::abs(e.value / kPi - f));
    }
}

TEST_CASE("azimuth close to a quarter turn is flagged") {
    for (double f : {0.45, 0.55}) {
        const PeakSet p = detect_peaks(scenario::simulate(scenario::waveguide(f * kPi)));
        const Estimate e = estimate_phi(p, drive(350), 0.07);
        CHECK(e.has_flag(kFlagPhiNearHalfPi));
        CHECK(refine_phi(e, p, drive(350), 0.07).value == e.value);
    }
}

TEST_CASE("azimuth estimate is blind to phi -> 2 pi - phi") {
    const auto grid = linear_grid(-300, 300, 2001);
    const PeakSet a = detect_peaks(scenario::simulate(scenario::waveguide(0.2 * kPi), grid));
    const PeakSet b = detect_peaks(scenario::simulate(scenario::waveguide(1.8 * kPi), grid));
    const Estimate ea = estimate_phi(a, drive(350), 0.07), eb = estimate_phi(b, drive(350), 0.07);
    CHECK(ea.value == doctest::Approx(eb.value).epsilon(1e-9));
    REQUIRE(ea.ambiguity.size() == eb.ambiguity.size());
    for (std::size_t i = 0; i < ea.ambiguity.size(); ++i)
        CHECK(ea.ambiguity[i] == doctest::Approx(eb.ambiguity[i]).epsilon(1e-9));
}

TEST_CASE("rotation offset of an unshifted surface scan") {
    const auto scan = shifted_surface_scan(0.0, kPi, 181);
    const Estimate e = estimate_theta(scan);
    const double step = kPi / 180;
    CHECK(e.method == EstimateMethod::theta_scan);
    CHECK(std::min(e.value, kPi / 2 - e.value) <= step);
    CHECK(e.ambiguity.size() >= 2);
}

TEST_CASE("rotation offset of a shifted surface scan") {
    const std::size_t n = 271;
    const double range = 1.5 * kPi;
    const Estimate e = estimate_theta(shifted_surface_scan(0.3, range, n));
    CHECK(std::abs(e.value - 0.3) <= range / (n - 1));
    CHECK(contains(e.ambiguity, kPi / 2 - 0.3, range / (n - 1)));
    CHECK(contains(e.ambiguity, kPi / 2 + 0.3, range / (n - 1)));
    CHECK(contains(e.ambiguity, kPi - 0.3, range / (n - 1)));
}

TEST_CASE("rotation offset needs a usable scan") {
    std::vector<std::pair<double, double>> flat;
    for (double x : linear_grid(0, kPi, 100)) flat.emplace_back(x, 0.0);
    CHECK_THROWS_AS(estimate_theta(flat), InconsistentInputError);
    CHECK_THROWS_AS(estimate_theta(std::span(flat).first(10)), DomainError);
    std::vector<std::pair<double, double>> narrow;
    for (double x : linear_grid(0, 1.0, 100)) narrow.emplace_back(x, std::sin(x));
    CHECK_THROWS_AS(estimate_theta(narrow), InconsistentInputError);
}

TEST_CASE("decreasing inversion") {
    auto f = [](double eta) { return 1.0 / eta; };
    CHECK(invert_decreasing(f, 2.0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(invert_decreasing(f, 1e6), InconsistentInputError);
}
