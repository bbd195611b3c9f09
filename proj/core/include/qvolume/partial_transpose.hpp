// Copyright 2026 The qvolume Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "qvolume/hermitian.hpp"
#include "qvolume/operator_basis.hpp"
#include "qvolume/positivity.hpp"

namespace qvolume {

/// Transposition of subsystem A: <ij| rho^{T_A} |kl> = <kj| rho |il>, where the
/// composite index of |ij> is i * n_b + j. Throws InvalidPartition unless
/// rho.dim() == n_a * n_b.
HermitianMatrix partial_transpose(const HermitianMatrix &rho, int n_a, int n_b);

/// True iff the partial transpose of rho is positive semidefinite within tol.
/// rho is assumed to be a state; this is not re-verified.
bool is_ppt(const HermitianMatrix &rho, int n_a, int n_b, double tol = kDefaultPsdTolerance);

/// is_ppt(coords_to_matrix(v), n_A, n_B, tol). Families whose generators are
/// mapped to +-themselves by the transposition are evaluated in coordinate
/// space by flipping signs; the others go through the matrix path.
bool ppt_predicate_on_coords(const CoordinateVector &v, double tol = kDefaultPsdTolerance);

namespace detail {

/// Writes the partial transpose of `in` into `out` (resized as needed).
/// `in` and `out` must not alias.
void partial_transpose_into(const ComplexMatrix &in, int n_a, int n_b, ComplexMatrix &out);

}  // namespace detail

}  // namespace qvolume
