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

#include <complex>

#include <Eigen/Dense>

namespace qvolume {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// Tolerance for self-checks of matrices the library builds itself.
inline constexpr double kConstructionTolerance = 1e-12;
/// Tolerance for Hermiticity / unit-trace checks on caller-supplied matrices.
inline constexpr double kInputTolerance = 1e-9;

/// A square complex matrix equal to its conjugate transpose.
///
/// The checked constructor rejects inputs whose anti-Hermitian part exceeds the
/// tolerance and then symmetrizes, so `matrix()` is exactly Hermitian.
class HermitianMatrix {
   public:
    HermitianMatrix() = default;

    /// Throws InvalidInput if `m` is not square or max |m - m^dagger| > tol.
    explicit HermitianMatrix(ComplexMatrix m, double tol = kInputTolerance);

    /// Wraps `m` without checking or symmetrizing. Caller guarantees Hermiticity.
    static HermitianMatrix unchecked(ComplexMatrix m);

    static HermitianMatrix identity(int n);

    int dim() const {
        return static_cast<int>(m_.rows());
    }
    const ComplexMatrix &matrix() const {
        return m_;
    }
    Complex operator()(int row, int col) const {
        return m_(row, col);
    }

    double trace() const {
        return m_.trace().real();
    }

    /// Hilbert-Schmidt norm sqrt(Tr A^2).
    double hs_norm() const {
        return m_.norm();
    }

    HermitianMatrix operator+(const HermitianMatrix &other) const;
    HermitianMatrix operator-(const HermitianMatrix &other) const;
    HermitianMatrix operator*(double s) const;

   private:
    ComplexMatrix m_;
};

/// Real Hilbert-Schmidt inner product Tr(A B) of two Hermitian matrices.
double hs_inner(const HermitianMatrix &a, const HermitianMatrix &b);

/// Kronecker product; Hermitian factors give a Hermitian product.
HermitianMatrix kron(const HermitianMatrix &a, const HermitianMatrix &b);

/// max_{jk} |m_jk - conj(m_kj)|.
double hermiticity_defect(const ComplexMatrix &m);

}  // namespace qvolume
