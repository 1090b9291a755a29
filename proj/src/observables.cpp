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

#include "ddfluor/observables.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ddfluor/error.hpp"
#include "ddfluor/shifted_solver.hpp"

namespace ddf {

namespace {

bool in_channel(Channel ch, int transition) {
    switch (ch) {
        case Channel::pi:
            return transition == 2;
        case Channel::sigma:
            return transition != 2;
        case Channel::total:
            return true;
    }
    return false;
}

// r̂ × (r̂ × d) = r̂ (r̂·d) - d.
CVec3 transverse(const Vec3& n, const CVec3& d) {
    const CVec3 nc = n.cast<cplx>();
    return nc * (nc.dot(d)) - d;  // dot() conjugates its left argument; n is real
}

constexpr double kUndampedWindow = 1e-8;

}  // namespace

std::string_view to_string(Channel c) {
    switch (c) {
        case Channel::pi:
            return "pi";
        case Channel::sigma:
            return "sigma";
        case Channel::total:
            return "total";
    }
    return "?";
}

Channel channel_from_string(std::string_view s) {
    if (s == "pi") return Channel::pi;
    if (s == "sigma") return Channel::sigma;
    if (s == "total") return Channel::total;
    throw ConfigError("unknown channel '" + std::string(s) + "' (expected pi, sigma or total)");
}

Vec3 direction_from_preset(std::string_view preset) {
    if (preset.size() != 2 || (preset[0] != '+' && preset[0] != '-')) {
        throw ConfigError("unknown detector direction '" + std::string(preset) + "'");
    }
    const double sign = preset[0] == '+' ? 1.0 : -1.0;
    switch (preset[1]) {
        case 'x':
            return {sign, 0, 0};
        case 'y':
            return {0, sign, 0};
        case 'z':
            return {0, 0, sign};
        default:
            throw ConfigError("unknown detector direction '" + std::string(preset) + "'");
    }
}

DetectionOperators detection_operator(const Detector& det, const Geometry& g) {
    const double len = det.direction.norm();
    if (std::abs(len - 1.0) > 1e-9) throw DomainError("detector direction must be a unit vector");
    const Vec3 n = det.direction;

    const auto& dip = DipoleBasis::standard().d;
    if (det.channel == Channel::pi && transverse(n, dip[1]).norm() < 1e-12) {
        throw DomainError("pi light not radiated along z");
    }

    const std::array<Vec3, 2> pos = {g.r1, g.r2()};
    DetectionOperators ops;
    for (auto& m : ops.minus) m.setZero();
    for (int atom = 1; atom <= 2; ++atom) {
        // E⁻ carries exp(+i k0 r̂·r_μ); E⁺ the conjugate.
        const cplx phase = det.include_position_phase ? std::polar(1.0, kWaveNumber * n.dot(pos[atom - 1])) : 1.0;
        for (int i = 1; i <= 3; ++i) {
            if (!in_channel(det.channel, i)) continue;
            const CVec3 f = transverse(n, dip[i - 1]);
            const Op16 up = raising(atom, i);
            for (int k = 0; k < 3; ++k) {
                if (f[k] != cplx(0.0)) ops.minus[k] += f[k] * phase * up;
            }
        }
    }
    for (int k = 0; k < 3; ++k) ops.plus[k] = ops.minus[k].adjoint();
    return ops;
}

double intensity(const DensityMatrix& rho_ss, const Detector& det, const Geometry& g) {
    const DetectionOperators ops = detection_operator(det, g);
    double total = 0.0;
    for (int k = 0; k < 3; ++k) total += (ops.minus[k] * ops.plus[k] * rho_ss.rho).trace().real();
    return total;
}

Spectrum Spectrum::normalized() const {
    Spectrum out = *this;
    const double peak = values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
    if (peak > 0.0) {
        for (double& v : out.values) v /= peak;
    }
    out.normalization = Normalization::max1;
    return out;
}

std::vector<double> linear_grid(double min, double max, std::size_t count) {
    if (count < 2) throw DomainError("grid needs at least two points");
    if (!(min < max)) throw DomainError("grid min must be below grid max");
    std::vector<double> grid(count);
    const double step = (max - min) / static_cast<double>(count - 1);
    for (std::size_t k = 0; k < count; ++k) grid[k] = min + step * static_cast<double>(k);
    // Exact zero on symmetric odd grids.
    if (count % 2 == 1 && std::abs(min + max) < 1e-12 * (max - min)) grid[count / 2] = 0.0;
    return grid;
}

std::vector<double> default_grid(const CouplingSet& c, std::size_t count) {
    const double rabi = std::max(std::abs(c.rabi1), std::abs(c.rabi2));
    const double ddi = std::max(std::abs(omega11_axial(c.eta)), std::abs(omega22_axial(c.eta)));
    const double extent = std::max(10.0, 1.3 * (rabi + ddi));
    return linear_grid(-extent, extent, count);
}

Spectrum spectrum(const Liouvillian& L, const DensityMatrix& rho_ss, const Detector& det, const Geometry& g,
                  std::span<const double> grid) {
    if (grid.empty()) throw DomainError("spectrum grid is empty");
    const DetectionOperators ops = detection_operator(det, g);

    std::vector<int> active;
    for (int k = 0; k < 3; ++k) {
        if (ops.minus[k].cwiseAbs().maxCoeff() > 0.0) active.push_back(k);
    }
    const auto ncomp = static_cast<Eigen::Index>(active.size());

    // Right-hand sides vec(E⁺ρ - <E⁺>ρ) and readout rows vec(E⁻ᵀ), so that
    // Tr[E⁻ X] = vec(E⁻ᵀ) · vec(X).
    Eigen::MatrixXcd rhs(kSuperDim, ncomp);
    Eigen::MatrixXcd readout(kSuperDim, ncomp);
    for (Eigen::Index c = 0; c < ncomp; ++c) {
        const int k = active[c];
        const cplx mean_plus = (ops.plus[k] * rho_ss.rho).trace();
        rhs.col(c) = vectorize(ops.plus[k] * rho_ss.rho - mean_plus * rho_ss.rho);
        readout.col(c) = vectorize(ops.minus[k].transpose());
    }

    const ShiftedSolver solver(L.superop);
    const Eigen::MatrixXcd reduced_rhs = solver.q().adjoint() * rhs;
    const Eigen::MatrixXcd reduced_readout = solver.q().transpose() * readout;
    const Eigen::VectorXcd reduced_trace = solver.q().transpose() * vectorize(Op16::Identity());
    Eigen::VectorXcd mean_minus(ncomp);
    for (Eigen::Index c = 0; c < ncomp; ++c) mean_minus[c] = (ops.minus[active[c]] * rho_ss.rho).trace();

    Spectrum out;
    out.channel = det.channel;
    out.detuning.assign(grid.begin(), grid.end());
    out.values.resize(grid.size());

    Eigen::MatrixXcd y;
    for (std::size_t p = 0; p < grid.size(); ++p) {
        const cplx shift = kI * grid[p];
        // L always has the steady-state eigenvalue 0; tiny pivots flag any
        // other exactly undamped mode.
        const double pivot = solver.solve_reduced(shift, reduced_rhs, y);
        const bool singular = std::abs(grid[p]) < kUndampedWindow || pivot < 1e-14;
        if (singular) {
            solver.solve_reduced(shift - kSpectrumRegularization, reduced_rhs, y);
            out.regularized.push_back(p);
        }
        double value = 0.0;
        for (Eigen::Index c = 0; c < ncomp; ++c) {
            cplx tr = reduced_readout.col(c).transpose() * y.col(c);
            if (singular) {
                // The exact solution is traceless; drop the amplified
                // steady-state component picked up by the regularization.
                const cplx trace_y = reduced_trace.transpose() * y.col(c);
                tr -= trace_y * mean_minus[c];
            }
            value -= tr.real();
        }
        out.values[p] = value;
    }
    return out;
}

std::vector<std::pair<double, double>> sigma_intensity_scan(const Geometry& g_base, const DriveConfig& d,
                                                            std::span<const double> dtheta_grid) {
    if (std::abs(g_base.phi - kPi / 2) > 1e-9) {
        throw DomainError("sigma intensity scan requires the surface configuration phi = pi/2");
    }
    const Detector det = Detector::along_z(Channel::sigma);
    std::vector<std::pair<double, double>> out;
    out.reserve(dtheta_grid.size());
    for (double dtheta : dtheta_grid) {
        Geometry g = g_base;
        // Angles outside [0, π] describe the same direction with φ + π.
        double t = std::fmod(dtheta, kTwoPi);
        if (t < 0) t += kTwoPi;
        if (t > kPi) {
            t = kTwoPi - t;
            g.phi = 3 * kPi / 2;
        }
        g.theta = std::clamp(t, 0.0, kPi);
        const Liouvillian L = assemble_liouvillian(g, d);
        const SteadyState ss = steady_state(L);
        out.emplace_back(dtheta, intensity(ss.state, det, g));
    }
    return out;
}

}  // namespace ddf
