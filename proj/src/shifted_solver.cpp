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

#include "ddfluor/shifted_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ddfluor/error.hpp"

namespace ddf {

ShiftedSolver::ShiftedSolver(const Eigen::MatrixXcd& a) {
    if (a.rows() != a.cols()) throw DomainError("ShiftedSolver needs a square matrix");
    Eigen::HessenbergDecomposition<Eigen::MatrixXcd> hd(a);
    hessenberg_ = hd.matrixH();
    q_ = hd.matrixQ();
    norm_ = std::max(1.0, hessenberg_.cwiseAbs().rowwise().sum().maxCoeff());
}

double ShiftedSolver::solve_reduced(cplx shift, const Eigen::MatrixXcd& rhs, Eigen::MatrixXcd& out) const {
    const Eigen::Index n = hessenberg_.rows();
    Eigen::MatrixXcd m = hessenberg_;
    m.diagonal().array() -= shift;
    out = rhs;

    double min_pivot = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        if (std::abs(m(k + 1, k)) > std::abs(m(k, k))) {
            m.row(k).tail(n - k).swap(m.row(k + 1).tail(n - k));
            out.row(k).swap(out.row(k + 1));
        }
        const cplx pivot = m(k, k);
        min_pivot = std::min(min_pivot, std::abs(pivot));
        if (pivot == cplx(0.0)) continue;
        const cplx factor = m(k + 1, k) / pivot;
        if (factor == cplx(0.0)) continue;
        m.row(k + 1).tail(n - k) -= factor * m.row(k).tail(n - k);
        out.row(k + 1) -= factor * out.row(k);
    }
    min_pivot = std::min(min_pivot, std::abs(m(n - 1, n - 1)));
    if (min_pivot == 0.0) return 0.0;

    // Upper-triangular back substitution.
    for (Eigen::Index k = n - 1; k >= 0; --k) {
        if (k + 1 < n) out.row(k) -= m.row(k).tail(n - k - 1) * out.bottomRows(n - k - 1);
        out.row(k) /= m(k, k);
    }
    return min_pivot / norm_;
}

Eigen::MatrixXcd ShiftedSolver::solve(cplx shift, const Eigen::MatrixXcd& rhs) const {
    Eigen::MatrixXcd y;
    const double pivot = solve_reduced(shift, q_.adjoint() * rhs, y);
    if (pivot == 0.0) throw NumericalError("shifted system is exactly singular");
    return q_ * y;
}

}  // namespace ddf
