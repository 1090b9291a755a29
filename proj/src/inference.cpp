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

#include "ddfluor/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ddfluor/dressed.hpp"
#include "ddfluor/error.hpp"

namespace ddf {

namespace {

// Side peaks closer to the laser line than this are treated as part of the
// central feature.
constexpr double kMinSideband = 3.0;

struct Cluster {
    double position = 0.0;
    double height = 0.0;
    std::vector<double> members;
};

// Folds peaks onto |ν| and merges those within `gap`. Position is the
// height-weighted mean.
std::vector<Cluster> folded_clusters(const PeakSet& p, double gap) {
    std::vector<std::pair<double, double>> side;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double a = std::abs(p.positions[i]);
        if (a > kMinSideband) side.emplace_back(a, p.heights[i]);
    }
    std::sort(side.begin(), side.end());
    std::vector<Cluster> out;
    double wsum = 0.0;
    for (const auto& [pos, h] : side) {
        if (out.empty() || pos - out.back().members.back() > gap) {
            out.push_back({});
            wsum = 0.0;
        }
        Cluster& c = out.back();
        c.position = (c.position * wsum + pos * h) / (wsum + h);
        wsum += h;
        c.height = std::max(c.height, h);
        c.members.push_back(pos);
    }
    return out;
}

double wrap(double x, double period) {
    double r = std::fmod(x, period);
    if (r < 0) r += period;
    if (r >= period) r -= period;
    return r;
}

std::vector<double> sorted_unique(std::vector<double> v, double tol = 1e-12) {
    std::sort(v.begin(), v.end());
    std::vector<double> out;
    for (double x : v) {
        if (out.empty() || std::abs(x - out.back()) > tol) out.push_back(x);
    }
    return out;
}

double clamp_ratio(double s, double omega) {
    if (omega <= 0) throw DomainError("drive amplitude must be positive");
    const double r = s / omega;
    if (r > 1.0 + 1e-9) throw InconsistentInputError("sideband frequency exceeds the peak Rabi frequency");
    return std::min(r, 1.0);
}

// Sideband lines of the two-level block: the four differences between
// dressed states that differ in the dressing of one atom.
std::array<double, 4> block_sidebands(double rabi1, double rabi2, double omega22) {
    const auto e = exact_block_energies(rabi1, rabi2, omega22);
    std::array<double, 4> s{e[3] - e[2], e[3] - e[1], e[2] - e[0], e[1] - e[0]};
    std::sort(s.begin(), s.end());
    return s;
}

}  // namespace

std::string_view to_string(EstimateMethod m) {
    switch (m) {
        case EstimateMethod::rabi_inversion:
            return "rabi_inversion";
        case EstimateMethod::doublet_split:
            return "doublet_split";
        case EstimateMethod::small_r_peaks:
            return "small_r_peaks";
        case EstimateMethod::phi_formula:
            return "phi_formula";
        case EstimateMethod::theta_scan:
            return "theta_scan";
    }
    return "?";
}

bool Estimate::has_flag(std::string_view f) const {
    return std::find(flags.begin(), flags.end(), f) != flags.end();
}

PeakSet detect_peaks(std::span<const double> x, std::span<const double> y, double prominence) {
    if (x.empty() || x.size() != y.size()) throw DomainError("spectrum must be non-empty with matching grid");
    if (!(prominence > 0.0 && prominence < 1.0)) throw DomainError("prominence must lie in (0, 1)");
    PeakSet out;
    const double ymax = *std::max_element(y.begin(), y.end());
    if (!(ymax > 0.0)) return out;
    const double threshold = prominence * ymax;
    const std::size_t n = y.size();

    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(y[i] > y[i - 1] && y[i] >= y[i + 1] && y[i] > threshold)) continue;

        // Parabola through three (possibly unevenly spaced) points.
        const double x0 = x[i - 1], x1 = x[i], x2 = x[i + 1];
        const double y0 = y[i - 1], y1 = y[i], y2 = y[i + 1];
        const double d01 = (y1 - y0) / (x1 - x0);
        const double d12 = (y2 - y1) / (x2 - x1);
        const double a = (d12 - d01) / (x2 - x0);
        double pos = x1;
        double height = y1;
        if (a < 0.0) {
            const double b = d01 - a * (x0 + x1);
            pos = std::clamp(-b / (2 * a), x0, x2);
            height = y1 + a * (pos - x1) * (pos - x1) + (b + 2 * a * x1) * (pos - x1);
        }

        const double half = 0.5 * height;
        auto crossing = [&](int dir) -> double {
            std::size_t j = i;
            while (true) {
                const std::size_t k = dir > 0 ? j + 1 : j - 1;
                if ((dir > 0 && k >= n) || (dir < 0 && j == 0)) return -1.0;
                if (y[k] <= half) {
                    const double t = (y[j] - half) / (y[j] - y[k]);
                    return std::abs(x[j] + t * (x[k] - x[j]) - pos);
                }
                if (y[k] > y[j]) return -1.0;
                j = k;
            }
        };
        const double left = crossing(-1);
        const double right = crossing(+1);
        double width = 0.0;
        if (left > 0 && right > 0) {
            width = left + right;
        } else if (left > 0 || right > 0) {
            width = 2.0 * std::max(left, right);
        }

        if (!out.positions.empty() && pos <= out.positions.back()) continue;
        out.positions.push_back(pos);
        out.heights.push_back(height);
        out.widths.push_back(width);
    }
    return out;
}

PeakSet detect_peaks(const Spectrum& s, double prominence) {
    return detect_peaks(s.detuning, s.values, prominence);
}

double invert_decreasing(const std::function<double(double)>& f, double target) {
    constexpr double lo0 = 1e-3;
    constexpr double hi0 = kPi;
    constexpr int scan = 4000;
    // First local minimum of |f|; the branch before it is monotone.
    double hi = hi0;
    double prev = std::abs(f(lo0));
    for (int i = 1; i <= scan; ++i) {
        const double eta = lo0 + (hi0 - lo0) * i / scan;
        const double v = std::abs(f(eta));
        if (v > prev) {
            hi = lo0 + (hi0 - lo0) * (i - 1) / scan;
            break;
        }
        prev = v;
    }
    double lo = lo0;
    const double flo = std::abs(f(lo));
    const double fhi = std::abs(f(hi));
    if (!(target <= flo && target >= fhi)) {
        throw InconsistentInputError("coupling " + std::to_string(target) +
                                     " outside the monotone range of the small-distance closed form");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (std::abs(f(mid)) > target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

Estimate estimate_distance_large(const PeakSet& p, const DriveConfig& d, const Vec3& r1_known) {
    const auto clusters = folded_clusters(p, 0.5);
    if (clusters.empty()) throw InconsistentInputError("no sidebands resolved");
    if (clusters.size() > 2) {
        throw InconsistentInputError("expected at most two sideband pairs in the independent-atom regime, found " +
                                     std::to_string(clusters.size()));
    }

    Estimate e;
    e.method = EstimateMethod::rabi_inversion;
    e.units = "lambda";
    const double k = kWaveNumber;
    const double x1 = r1_known.x();
    const double rabi1_expected = std::abs(d.omega0 * std::sin(k * x1));

    double s1 = clusters.front().position;
    double s2 = clusters.front().position;
    if (clusters.size() == 2) {
        const double a = clusters[0].position;
        const double b = clusters[1].position;
        if (std::abs(a - rabi1_expected) <= std::abs(b - rabi1_expected)) {
            s1 = a;
            s2 = b;
        } else {
            s1 = b;
            s2 = a;
        }
    } else {
        e.flags.emplace_back(kFlagSymmetricPlacement);
    }
    clamp_ratio(s1, d.omega0);
    const double a = std::asin(clamp_ratio(s2, d.omega0)) / k;
    // Period of sin(k x) is λ = 1; |sin| repeats every half period.
    std::vector<double> branches{a, 0.5 - a, 0.5 + a, 1.0 - a};
    std::vector<double> separations;
    for (double x2 : branches) separations.push_back(x2 - x1);
    if (clusters.size() == 1) separations.push_back(0.0);
    e.value = separations.front();
    e.ambiguity = sorted_unique(separations, 1e-12);
    e.residual = std::abs(s1 - rabi1_expected);
    e.details = {{"rabi1", s1}, {"rabi2", s2}, {"x2", a}};
    return e;
}

Estimate estimate_distance_doublet(const PeakSet& p, double theta) {
    const auto clusters = folded_clusters(p, 0.5);
    if (clusters.size() < 2) throw InconsistentInputError("no dipole-dipole splitting resolved");
    // Splittings of consecutive side peaks; the doublet is the smallest
    // splitting between neighbouring sidebands.
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < clusters.size(); ++i) {
        best = std::min(best, clusters[i + 1].position - clusters[i].position);
    }
    const double omega22 = 0.5 * best;
    auto f = [theta](double eta) {
        Geometry g;
        g.R = eta / kWaveNumber;
        g.theta = theta;
        return coherent_couplings(g)(1, 1).real();
    };
    const double eta = invert_decreasing(f, omega22);
    Estimate e;
    e.method = EstimateMethod::doublet_split;
    e.units = "lambda";
    e.value = eta / kWaveNumber;
    e.ambiguity = {e.value};
    e.details = {{"omega22", omega22}};
    return e;
}

Estimate estimate_distance_small(const PeakSet& p) {
    const auto clusters = folded_clusters(p, 2.0);
    if (clusters.empty()) throw InconsistentInputError("no dipole-dipole splitting resolved");

    auto r_from = [](double (*f)(double), double target) -> double {
        try {
            return invert_decreasing(f, target) / kWaveNumber;
        } catch (const InconsistentInputError&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };

    Estimate e;
    e.method = EstimateMethod::small_r_peaks;
    e.units = "lambda";

    // Best-agreeing (inner, outer) assignment among the resolved sidebands.
    double best_rel = std::numeric_limits<double>::infinity();
    double r_inner = 0.0;
    double r_outer = 0.0;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        for (std::size_t j = i + 1; j < clusters.size(); ++j) {
            const double ri = r_from(omega11_axial, clusters[i].position);
            const double ro = r_from(omega22_axial, clusters[j].position);
            if (std::isnan(ri) || std::isnan(ro)) continue;
            const double rel = std::abs(ri - ro) / ro;
            if (rel < best_rel) {
                best_rel = rel;
                r_inner = ri;
                r_outer = ro;
            }
        }
    }

    constexpr double kAgreement = 0.05;
    if (best_rel <= kAgreement) {
        e.value = 0.5 * (r_inner + r_outer);
        e.residual = std::abs(r_inner - r_outer);
        e.ambiguity = {e.value};
        e.details = {{"R_inner", r_inner}, {"R_outer", r_outer}};
        return e;
    }

    // A single resolved pair: inner (perpendicular) or outer (parallel).
    const auto strongest = std::max_element(clusters.begin(), clusters.end(),
                                            [](const Cluster& a, const Cluster& b) { return a.height < b.height; });
    const double ri = r_from(omega11_axial, strongest->position);
    const double ro = r_from(omega22_axial, strongest->position);
    if (std::isnan(ri) && std::isnan(ro)) {
        throw InconsistentInputError("sideband outside the range of the small-distance closed forms");
    }
    if (best_rel < std::numeric_limits<double>::infinity()) {
        e.flags.emplace_back(kFlagInversionsDisagree);
        e.value = r_outer;
        e.residual = std::abs(r_inner - r_outer);
        e.ambiguity = sorted_unique({r_outer, r_inner});
        e.details = {{"R_inner", r_inner}, {"R_outer", r_outer}};
        return e;
    }
    e.flags.emplace_back(kFlagSinglePair);
    e.value = std::isnan(ri) ? ro : ri;
    std::vector<double> amb;
    if (!std::isnan(ri)) amb.push_back(ri);
    if (!std::isnan(ro)) amb.push_back(ro);
    e.ambiguity = sorted_unique(amb);
    e.residual = 0.0;
    e.details = {{"sideband", strongest->position}};
    if (!std::isnan(ri)) e.details.emplace_back("R_inner", ri);
    if (!std::isnan(ro)) e.details.emplace_back("R_outer", ro);
    return e;
}

Estimate estimate_phi(const PeakSet& p, const DriveConfig& d, double R_known) {
    if (!(R_known > 0)) throw DomainError("R must be positive");
    Estimate e;
    e.method = EstimateMethod::phi_formula;
    e.units = "rad";

    Geometry g;
    g.R = R_known;
    const double split = 2.0 * std::abs(coherent_couplings(g)(1, 1).real());

    auto near_half_pi = [&] {
        e.flags.emplace_back(kFlagPhiNearHalfPi);
        e.value = kPi / 2;
        e.ambiguity = {kPi / 2, 3 * kPi / 2};
        return e;
    };

    auto clusters = folded_clusters(p, 0.5);
    if (clusters.size() < 4) return near_half_pi();
    if (clusters.size() > 4) {
        std::sort(clusters.begin(), clusters.end(),
                  [](const Cluster& a, const Cluster& b) { return a.height > b.height; });
        clusters.resize(4);
        std::sort(clusters.begin(), clusters.end(),
                  [](const Cluster& a, const Cluster& b) { return a.position < b.position; });
    }
    const double inner_split = clusters[1].position - clusters[0].position;
    const double outer_split = clusters[3].position - clusters[2].position;
    // Interleaved doublets show splittings below 2|Ω_22|.
    constexpr double kSplitTolerance = 0.15;
    if (std::min(inner_split, outer_split) < (1.0 - kSplitTolerance) * split) return near_half_pi();

    const double m1 = 0.5 * (clusters[0].position + clusters[1].position);
    const double m2 = 0.5 * (clusters[2].position + clusters[3].position);
    // Doublets closer than twice their splitting mix; the midpoints no
    // longer track Ω(r_μ).
    if (m2 - m1 < 2.0 * split) return near_half_pi();
    const double arg =
        (std::asin(clamp_ratio(m2, d.omega0)) - std::asin(clamp_ratio(m1, d.omega0))) / (kWaveNumber * R_known);
    if (std::abs(arg) > 1.0) throw InconsistentInputError("arccos argument outside [-1, 1]");
    const double phi = std::acos(arg);
    e.value = phi;
    // Mirror φ ↔ 2π - φ and the swapped inner/outer assignment.
    e.ambiguity = sorted_unique({phi, kTwoPi - phi, kPi - phi, kPi + phi});
    e.residual = std::abs(inner_split - outer_split);
    e.details = {{"rabi1", m1}, {"rabi2", m2}, {"omega22", 0.25 * (inner_split + outer_split)}};
    return e;
}

Estimate refine_phi(const Estimate& start, const PeakSet& p, const DriveConfig& d, double R_known,
                    const Vec3& r1_known) {
    if (start.has_flag(kFlagPhiNearHalfPi)) return start;
    auto clusters = folded_clusters(p, 0.5);
    if (clusters.size() > 4) {
        std::sort(clusters.begin(), clusters.end(),
                  [](const Cluster& a, const Cluster& b) { return a.height > b.height; });
        clusters.resize(4);
    }
    if (clusters.size() != 4) return start;
    Eigen::Vector4d measured;
    for (int i = 0; i < 4; ++i) measured[i] = clusters[static_cast<std::size_t>(i)].position;
    std::sort(measured.data(), measured.data() + 4);

    auto residual = [&](const Eigen::Vector2d& x) -> Eigen::Vector4d {
        Geometry g;
        g.R = x[0];
        g.phi = x[1];
        g.r1 = r1_known;
        const auto [o1, o2] = rabi_frequencies(g, d);
        const auto s = block_sidebands(o1, o2, coherent_couplings(g)(1, 1).real());
        return Eigen::Vector4d(s[0], s[1], s[2], s[3]) - measured;
    };

    Eigen::Vector2d x(R_known, start.value);
    Eigen::Vector4d r = residual(x);
    double cost = r.squaredNorm();
    double mu = 1e-3;
    for (int it = 0; it < 100; ++it) {
        Eigen::Matrix<double, 4, 2> J;
        for (int k = 0; k < 2; ++k) {
            const double h = 1e-7 * std::max(1.0, std::abs(x[k]));
            Eigen::Vector2d xp = x, xm = x;
            xp[k] += h;
            xm[k] -= h;
            J.col(k) = (residual(xp) - residual(xm)) / (2 * h);
        }
        const Eigen::Matrix2d JtJ = J.transpose() * J;
        const Eigen::Vector2d g = J.transpose() * r;
        bool improved = false;
        for (int tries = 0; tries < 20; ++tries) {
            Eigen::Matrix2d A = JtJ;
            A.diagonal() *= 1.0 + mu;
            const Eigen::Vector2d step = A.ldlt().solve(-g);
            Eigen::Vector2d xn = x + step;
            if (xn[0] <= 0) {
                mu *= 10;
                continue;
            }
            const Eigen::Vector4d rn = residual(xn);
            if (rn.squaredNorm() < cost) {
                x = xn;
                r = rn;
                const double drop = cost - rn.squaredNorm();
                cost = rn.squaredNorm();
                mu = std::max(mu / 10, 1e-12);
                improved = drop > 1e-14 * std::max(1.0, cost);
                break;
            }
            mu *= 10;
        }
        if (!improved) break;
    }

    Estimate e = start;
    const double phi = wrap(x[1], kTwoPi);
    e.value = phi <= kPi ? phi : kTwoPi - phi;
    e.ambiguity = sorted_unique({e.value, kTwoPi - e.value, kPi - e.value, kPi + e.value});
    e.residual = std::sqrt(cost / 4.0);
    e.flags.emplace_back(kFlagRefined);
    e.details.emplace_back("R_refined", x[0]);
    return e;
}

Estimate estimate_theta(std::span<const std::pair<double, double>> scan) {
    constexpr std::size_t kMinSamples = 64;
    if (scan.size() < kMinSamples) throw DomainError("scan needs at least 64 samples");
    std::vector<std::pair<double, double>> s(scan.begin(), scan.end());
    std::sort(s.begin(), s.end());
    const double span = s.back().first - s.front().first;
    const double step = span / static_cast<double>(s.size() - 1);
    if (span < kPi - 0.5 * step) throw InconsistentInputError("scan range insufficient: must cover [0, pi]");

    double imax = 0.0;
    for (const auto& pt : s) imax = std::max(imax, pt.second);
    const double threshold = kZeroIntensityThreshold * imax;

    // Zeros are narrow quadratic dips, often narrower than the scan step:
    // take sub-threshold runs and deep local minima, then place the zero by
    // a V fit of sqrt(I) through the minimum and its neighbours.
    const std::size_t n = s.size();
    auto sq = [&](std::size_t k) { return std::sqrt(std::max(s[k].second, 0.0)); };
    auto refine = [&](std::size_t k) {
        if (k == 0 || k + 1 >= n) return s[k].first;
        const double left = sq(k - 1), mid = sq(k), right = sq(k + 1);
        if (left >= right) {
            const double slope = (left - mid) / (s[k].first - s[k - 1].first);
            if (slope <= 0) return s[k].first;
            return s[k].first + std::min(mid / slope, 0.5 * (s[k + 1].first - s[k].first));
        }
        const double slope = (right - mid) / (s[k + 1].first - s[k].first);
        if (slope <= 0) return s[k].first;
        return s[k].first - std::min(mid / slope, 0.5 * (s[k].first - s[k - 1].first));
    };

    std::vector<double> zeros;
    std::size_t i = 0;
    while (i < n) {
        const bool below = s[i].second < threshold;
        const bool dip = s[i].second < kZeroDipDepth * imax && (i == 0 || s[i].second <= s[i - 1].second) &&
                         (i + 1 == n || s[i].second < s[i + 1].second);
        if (!below && !dip) {
            ++i;
            continue;
        }
        std::size_t j = i;
        std::size_t best = i;
        while (j < n && s[j].second < threshold) {
            if (s[j].second < s[best].second) best = j;
            ++j;
        }
        if (j == i) ++j;
        zeros.push_back(refine(best));
        i = j;
    }
    if (zeros.size() < 3) {
        throw InconsistentInputError("scan range insufficient: found " + std::to_string(zeros.size()) +
                                     " zeros, need 3");
    }

    // Zeros sit at Δθ = m π/2 - θ0; average θ0 on the circle of period π/2.
    const double quarter = kPi / 2;
    double c = 0.0, sn = 0.0;
    for (double z : zeros) {
        const double a = 4.0 * wrap(-z, quarter);
        c += std::cos(a);
        sn += std::sin(a);
    }
    double theta0 = wrap(std::atan2(sn, c) / 4.0, quarter);
    if (quarter - theta0 < 1e-12) theta0 = 0.0;
    double worst = 0.0;
    for (double z : zeros) {
        const double dev = wrap(z + theta0 + quarter / 2, quarter) - quarter / 2;
        worst = std::max(worst, std::abs(dev));
    }

    Estimate e;
    e.method = EstimateMethod::theta_scan;
    e.units = "rad";
    e.value = theta0;
    e.ambiguity = sorted_unique({theta0, quarter - theta0, quarter + theta0, kPi - theta0});
    e.residual = worst;
    for (std::size_t k = 0; k < zeros.size(); ++k) e.details.emplace_back("zero" + std::to_string(k), zeros[k]);
    return e;
}

}  // namespace ddf
