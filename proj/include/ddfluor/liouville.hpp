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

#include <Eigen/Dense>

#include "ddfluor/geometry.hpp"
#include "ddfluor/types.hpp"

namespace ddf {

// Two-atom product basis |i_1> ⊗ |j_2>, levels i, j ∈ {1, 2, 3, 4} with |4>
// the ground state. Basis index = 4 (i - 1) + (j - 1).
inline constexpr int kLevels = 4;
inline constexpr int kDim = kLevels * kLevels;
inline constexpr int kSuperDim = kDim * kDim;
inline constexpr int kGround = 4;

constexpr int basis_index(int level1, int level2) { return kLevels * (level1 - 1) + (level2 - 1); }

/// Raising operator S_{i+}^{(atom)} = |i_atom><4_atom| ⊗ 1 on the other atom.
/// atom ∈ {1, 2}, transition ∈ {1, 2, 3}.
Op16 raising(int atom, int transition);
inline Op16 lowering(int atom, int transition) { return raising(atom, transition).adjoint(); }

/// Projector |i_1 j_2><i_1 j_2|.
Op16 product_projector(int level1, int level2);

/// Occupation of `level` on `atom`, traced over the other atom.
Op16 level_projector(int atom, int level);

struct DensityMatrix {
    Op16 rho = Op16::Zero();

    static DensityMatrix ground();
    static DensityMatrix pure(int level1, int level2);

    double trace_real() const { return rho.trace().real(); }
    double hermiticity_error() const { return (rho - rho.adjoint()).cwiseAbs().maxCoeff(); }
    double min_eigenvalue() const;
    double population(int atom, int level) const;

    /// Hermitian part rescaled to unit trace.
    void normalize();
};

/// Superoperator on column-major vec(ρ): vec(ρ)[i + 16 j] = ρ(i, j), so that
/// A ρ B maps to (B^T ⊗ A) vec(ρ).
struct Liouvillian {
    Eigen::MatrixXcd superop;

    Op16 apply(const Op16& rho) const;
};

Eigen::VectorXcd vectorize(const Op16& m);
Op16 unvectorize(const Eigen::VectorXcd& v);

/// Superoperator of ρ ↦ A ρ B.
Eigen::MatrixXcd sandwich(const Op16& left, const Op16& right);

/// Interaction-picture Hamiltonian (units of ħγ): detuning term, standing-wave
/// drive on the |2> ↔ |4> transitions, and the coherent dipole-dipole part.
Op16 build_hamiltonian(const Geometry& g, const DriveConfig& d, const CouplingSet& c);

/// L[ρ] = -i[H, ρ] + single-atom decay + cross-atom collective decay.
Liouvillian build_liouvillian(const Op16& hamiltonian, const CouplingSet& c);

/// Convenience: couplings, Hamiltonian and Liouvillian for one configuration.
Liouvillian assemble_liouvillian(const Geometry& g, const DriveConfig& d);

struct SteadyState {
    DensityMatrix state;
    double residual = 0.0;        ///< ||L vec(ρ)||_2
    int null_dimension = 1;       ///< singular values below tolerance
    bool degenerate = false;      ///< null space not one-dimensional
};

/// Null vector of L, Hermitized and trace-normalized. A degenerate null space
/// is resolved by propagating the ground state to long times and flagged.
SteadyState steady_state(const Liouvillian& L);

/// Fixed-step fourth-order Runge-Kutta propagation of dρ/dt = L[ρ].
/// dt <= 0 selects 0.25 / max row sum of |L|. Throws NumericalError on trace
/// drift above 1e-4.
DensityMatrix evolve(const DensityMatrix& rho0, const Liouvillian& L, double t_final, double dt = 0.0);

/// Default step used by evolve when none is given.
double default_time_step(const Liouvillian& L);

/// One RK4 step for a linear generator, as a matrix: 1 + hL + (hL)²/2 + (hL)³/6 + (hL)⁴/24.
Eigen::MatrixXcd rk4_step_matrix(const Liouvillian& L, double dt);

}  // namespace ddf
