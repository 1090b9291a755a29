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

#include "ddfluor/types.hpp"

namespace ddf {

/// Repeated solves of (A - s I) x = b for many complex shifts s.
///
/// A is reduced once to upper Hessenberg form A = Q H Q†; each shift then
/// costs one O(n²) elimination of H - s I with adjacent-row pivoting.
class ShiftedSolver {
public:
    explicit ShiftedSolver(const Eigen::MatrixXcd& a);

    Eigen::Index size() const { return hessenberg_.rows(); }

    /// Right-hand sides and results in the Hessenberg frame: y = (H - sI)^{-1} c
    /// with c = Q† b. Returns the smallest pivot modulus relative to ||H||.
    double solve_reduced(cplx shift, const Eigen::MatrixXcd& rhs, Eigen::MatrixXcd& out) const;

    /// x = (A - sI)^{-1} b in the original frame.
    Eigen::MatrixXcd solve(cplx shift, const Eigen::MatrixXcd& rhs) const;

    const Eigen::MatrixXcd& q() const { return q_; }
    double norm() const { return norm_; }

private:
    Eigen::MatrixXcd hessenberg_;
    Eigen::MatrixXcd q_;
    double norm_ = 0.0;
};

}  // namespace ddf
