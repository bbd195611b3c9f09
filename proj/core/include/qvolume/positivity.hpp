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

#include <span>
#include <vector>

#include "qvolume/hermitian.hpp"

namespace qvolume {

/// Default eigenvalue tolerance of the positivity tests.
inline constexpr double kDefaultPsdTolerance = 1e-10;

/// Coefficients of det(xi I - A) = sum_k (-1)^k c_k xi^(n-k); c_k is the k-th
/// elementary symmetric polynomial of the eigenvalues of A.
struct NewtonCoefficients {
    int n = 0;
    std::vector<double> c;  // c[0..n], c[0] == 1
};

/// p_k = Tr(A^k) for k = 1..k_max, by repeated multiplication with the running power.
std::vector<double> power_traces(const HermitianMatrix &a, int k_max);

/// Newton identities: c_k = (1/k) sum_{i=1..k} (-1)^(i+1) p_i c_{k-i}.
/// `p` holds p_1..p_m with m >= n. Throws InvalidInput unless |p_1 - 1| <= 1e-9;
/// p_1 is then treated as exactly 1.
NewtonCoefficients newton_coefficients(std::span<const double> p, int n);

/// Positive semidefiniteness by Descartes' rule: A >= -tol * I iff every
/// characteristic coefficient of A + tol * I is non-negative.
///
/// Each coefficient is compared with a floating-point noise floor that scales
/// with the magnitude of the terms in the Newton recursion. A coefficient below
/// minus its floor rejects the matrix. When some coefficient lies within the
/// floor of zero (several eigenvalues near -tol, as for rank-deficient boundary
/// states) its sign is not reliable and the eigenvalue test decides instead.
/// Throws InvalidInput unless A has unit trace within 1e-9.
bool is_psd_newton(const HermitianMatrix &a, double tol = kDefaultPsdTolerance);

/// Oracle: smallest eigenvalue from a dense Hermitian eigensolver >= -tol.
/// Throws NumericalFailure if the solver does not converge.
bool is_psd_eigen(const HermitianMatrix &a, double tol = kDefaultPsdTolerance);

/// Smallest eigenvalue via the dense eigensolver.
double min_eigenvalue(const HermitianMatrix &a);

/// 1/sqrt(n(n-1)): Hilbert-Schmidt radius around I/n inside which every
/// unit-trace Hermitian matrix is positive (Tr A^2 <= 1/(n-1)).
double mehta_radius(int n);

/// sqrt((n-1)/n): Hilbert-Schmidt radius around I/n containing every state (Tr A^2 <= 1).
double outer_radius(int n);

namespace detail {

/// Hot-path test used by the samplers. `a` must be Hermitian; no trace check.
/// Dispatches to fixed-size kernels for n in {2, 3, 4, 6, 8, 9}.
bool newton_psd(const ComplexMatrix &a, double tol);

/// Characteristic coefficients of a Hermitian matrix of arbitrary trace,
/// with the accompanying noise floor per coefficient.
void newton_coefficients_with_floor(const ComplexMatrix &a, std::vector<double> &c, std::vector<double> &floor);

}  // namespace detail

}  // namespace qvolume
