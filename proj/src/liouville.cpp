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

#include "ddfluor/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "ddfluor/error.hpp"

namespace ddf {

namespace {

using SuperOp = Eigen::MatrixXcd;

Eigen::Matrix4cd single_atom(int row_level, int col_level) {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(row_level - 1, col_level - 1) = 1.0;
    return m;
}

Op16 embed(int atom, const Eigen::Matrix4cd& local) {
    const Eigen::Matrix4cd id = Eigen::Matrix4cd::Identity();
    Op16 out;
    if (atom == 1) {
        out = Eigen::kroneckerProduct(local, id);
    } else {
        out = Eigen::kroneckerProduct(id, local);
    }
    return out;
}

void check_atom(int atom) {
    if (atom != 1 && atom != 2) throw DomainError("atom index must be 1 or 2");
}

// Adds ρ ↦ -c (A ρ + ρ A - 2 J ρ K) to `L`.
void add_dissipator(SuperOp& L, cplx c, const Op16& a, const Op16& j, const Op16& k) {
    if (c == cplx(0.0)) return;
    L -= c * (sandwich(a, Op16::Identity()) + sandwich(Op16::Identity(), a) - 2.0 * sandwich(j, k));
}

// Term plus its Hermitian-conjugate partner: -c^* (A† ρ + ρ A† - 2 K† ρ J†).
void add_dissipator_hc(SuperOp& L, cplx c, const Op16& a, const Op16& j, const Op16& k) {
    add_dissipator(L, c, a, j, k);
    add_dissipator(L, std::conj(c), a.adjoint(), k.adjoint(), j.adjoint());
}

double infinity_norm(const SuperOp& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

}  // namespace

Op16 raising(int atom, int transition) {
    check_atom(atom);
    if (transition < 1 || transition > 3) throw DomainError("transition index must be 1, 2 or 3");
    return embed(atom, single_atom(transition, kGround));
}

Op16 product_projector(int level1, int level2) {
    Op16 p = Op16::Zero();
    p(basis_index(level1, level2), basis_index(level1, level2)) = 1.0;
    return p;
}

Op16 level_projector(int atom, int level) {
    check_atom(atom);
    return embed(atom, single_atom(level, level));
}

DensityMatrix DensityMatrix::ground() { return pure(kGround, kGround); }

DensityMatrix DensityMatrix::pure(int level1, int level2) {
    DensityMatrix dm;
    dm.rho = product_projector(level1, level2);
    return dm;
}

double DensityMatrix::min_eigenvalue() const {
    const Op16 h = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Op16> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double DensityMatrix::population(int atom, int level) const {
    return (level_projector(atom, level) * rho).trace().real();
}

void DensityMatrix::normalize() {
    rho = 0.5 * (rho + rho.adjoint()).eval();
    const cplx tr = rho.trace();
    if (std::abs(tr) < 1e-300) throw NumericalError("density matrix has vanishing trace");
    rho /= tr.real();
}

Eigen::VectorXcd vectorize(const Op16& m) { return Eigen::Map<const Eigen::VectorXcd>(m.data(), kSuperDim); }

Op16 unvectorize(const Eigen::VectorXcd& v) {
    if (v.size() != kSuperDim) throw DomainError("vectorized operator must have 256 entries");
    return Eigen::Map<const Op16>(v.data());
}

Eigen::MatrixXcd sandwich(const Op16& left, const Op16& right) {
    return Eigen::kroneckerProduct(right.transpose(), left);
}

Op16 Liouvillian::apply(const Op16& rho) const { return unvectorize(superop * vectorize(rho)); }

Op16 build_hamiltonian(const Geometry& g, const DriveConfig& d, const CouplingSet& c) {
    (void)g;
    Op16 h = Op16::Zero();
    for (int atom = 1; atom <= 2; ++atom) {
        for (int i = 1; i <= 3; ++i) h -= d.detunings[i - 1] * raising(atom, i) * lowering(atom, i);
    }

    // Drive couples only |2> ↔ |4>.
    const double rabi[2] = {c.rabi1, c.rabi2};
    for (int atom = 1; atom <= 2; ++atom) {
        const Op16 up = raising(atom, 2);
        h -= 0.5 * rabi[atom - 1] * (up + up.adjoint());
    }

    // Parallel dipole exchange.
    for (int i = 1; i <= 3; ++i) {
        const Op16 term = c.omega(i - 1, i - 1) * raising(2, i) * lowering(1, i);
        h -= term + term.adjoint();
    }
    // Orthogonal dipole exchange, both directions between the atoms.
    constexpr int kPairs[3][2] = {{2, 1}, {3, 1}, {3, 2}};
    for (const auto& p : kPairs) {
        const int i = p[0];
        const int j = p[1];
        const Op16 term = c.omega(i - 1, j - 1) * (raising(2, i) * lowering(1, j) + raising(1, i) * lowering(2, j));
        h -= term + term.adjoint();
    }
    return h;
}

Liouvillian build_liouvillian(const Op16& hamiltonian, const CouplingSet& c) {
    const Op16 id = Op16::Identity();
    SuperOp L = -kI * (sandwich(hamiltonian, id) - sandwich(id, hamiltonian));

    // Independent decay, rate γ_i = γ = 1 per term (population decay 2γ).
    for (int atom = 1; atom <= 2; ++atom) {
        for (int i = 1; i <= 3; ++i) {
            const Op16 up = raising(atom, i);
            const Op16 down = up.adjoint();
            add_dissipator(L, 1.0, up * down, down, up);
        }
    }

    // Collective decay between parallel dipoles.
    for (int i = 1; i <= 3; ++i) {
        const Op16 up2 = raising(2, i);
        const Op16 down1 = lowering(1, i);
        add_dissipator_hc(L, c.gamma(i - 1, i - 1), up2 * down1, down1, up2);
    }

    // Collective decay between orthogonal dipoles, summed over μ ≠ ν.
    constexpr int kPairs[3][2] = {{2, 1}, {3, 1}, {3, 2}};
    for (int mu = 1; mu <= 2; ++mu) {
        const int nu = 3 - mu;
        for (const auto& p : kPairs) {
            const Op16 up = raising(mu, p[0]);
            const Op16 down = lowering(nu, p[1]);
            add_dissipator_hc(L, c.gamma(p[0] - 1, p[1] - 1), up * down, down, up);
        }
    }
    return Liouvillian{std::move(L)};
}

Liouvillian assemble_liouvillian(const Geometry& g, const DriveConfig& d) {
    d.validate();
    const CouplingSet c = compute_couplings(g, d);
    return build_liouvillian(build_hamiltonian(g, d, c), c);
}

double default_time_step(const Liouvillian& L) { return 0.25 / std::max(1.0, infinity_norm(L.superop)); }

Eigen::MatrixXcd rk4_step_matrix(const Liouvillian& L, double dt) {
    const SuperOp a = dt * L.superop;
    SuperOp term = SuperOp::Identity(kSuperDim, kSuperDim);
    SuperOp step = term;
    for (int order = 1; order <= 4; ++order) {
        term = (a * term / static_cast<double>(order)).eval();
        step += term;
    }
    return step;
}

DensityMatrix evolve(const DensityMatrix& rho0, const Liouvillian& L, double t_final, double dt) {
    if (t_final < 0.0) throw DomainError("t_final must be non-negative");
    if (dt <= 0.0) dt = default_time_step(L);
    if (t_final == 0.0) return rho0;

    const auto steps = static_cast<long>(std::ceil(t_final / dt - 1e-12));
    const double h = t_final / static_cast<double>(steps);
    const SuperOp step = rk4_step_matrix(L, h);
    const double trace0 = rho0.rho.trace().real();

    Eigen::VectorXcd x = vectorize(rho0.rho);
    Eigen::VectorXcd next(kSuperDim);
    for (long n = 0; n < steps; ++n) {
        next.noalias() = step * x;
        x.swap(next);
        if ((n & 255) == 255 || n + 1 == steps) {
            cplx tr = 0.0;
            for (int k = 0; k < kDim; ++k) tr += x[k * (kDim + 1)];
            const double drift = std::abs(tr - trace0);
            if (!std::isfinite(drift) || drift > 1e-4) {
                throw NumericalError("time evolution unstable (trace drift " + std::to_string(drift) +
                                     "); use a smaller dt than " + std::to_string(h));
            }
        }
    }
    DensityMatrix out;
    out.rho = unvectorize(x);
    return out;
}

SteadyState steady_state(const Liouvillian& L) {
    if (L.superop.rows() != kSuperDim || L.superop.cols() != kSuperDim) {
        throw DomainError("Liouvillian must be 256 x 256");
    }
    Eigen::BDCSVD<SuperOp> svd(L.superop, Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double scale = std::max(1.0, sv[0]);
    const double tol = 1e-10 * scale;

    SteadyState out;
    out.null_dimension = static_cast<int>((sv.array() < tol).count());
    if (out.null_dimension == 0) {
        // Accept the smallest singular vector if it is still tiny on an
        // absolute scale; a true generator always has one.
        if (sv[kSuperDim - 1] > 1e-6 * scale) {
            throw NumericalError("Liouvillian has no null space (smallest singular value " +
                                 std::to_string(sv[kSuperDim - 1]) + ")");
        }
        out.null_dimension = 1;
    }

    if (out.null_dimension == 1) {
        const Eigen::VectorXcd v = svd.matrixV().col(kSuperDim - 1);
        out.state.rho = unvectorize(v);
    } else {
        out.degenerate = true;
        DensityMatrix rho = DensityMatrix::ground();
        const double dt = default_time_step(L);
        for (int chunk = 0; chunk < 200; ++chunk) {
            DensityMatrix next = evolve(rho, L, 10.0, dt);
            const double change = (next.rho - rho.rho).cwiseAbs().maxCoeff();
            rho = std::move(next);
            if (change < 1e-12) break;
        }
        out.state = rho;
    }
    out.state.normalize();
    out.residual = (L.superop * vectorize(out.state.rho)).norm();
    return out;
}

}  // namespace ddf
