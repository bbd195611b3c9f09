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

#include "qvolume/hermitian.hpp"

#include <limits>
#include <string>

#include "qvolume/errors.hpp"

namespace qvolume {

HermitianMatrix::HermitianMatrix(ComplexMatrix m, double tol) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw InvalidInput(
            "HermitianMatrix: expected a non-empty square matrix, got " + std::to_string(m.rows()) + "x" +
            std::to_string(m.cols()));
    }
    double defect = hermiticity_defect(m);
    if (defect > tol) {
        throw InvalidInput("HermitianMatrix: matrix is not Hermitian (defect " + std::to_string(defect) + ")");
    }
    m_ = (m + m.adjoint()) * 0.5;
}

HermitianMatrix HermitianMatrix::unchecked(ComplexMatrix m) {
    HermitianMatrix h;
    h.m_ = std::move(m);
    return h;
}

HermitianMatrix HermitianMatrix::identity(int n) {
    return unchecked(ComplexMatrix::Identity(n, n));
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix &other) const {
    return unchecked(m_ + other.m_);
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix &other) const {
    return unchecked(m_ - other.m_);
}

HermitianMatrix HermitianMatrix::operator*(double s) const {
    return unchecked(m_ * s);
}

double hs_inner(const HermitianMatrix &a, const HermitianMatrix &b) {
    // Tr(AB) = sum_jk A_jk B_kj = sum_jk A_jk conj(B_jk) for Hermitian B.
    return a.matrix().cwiseProduct(b.matrix().conjugate()).sum().real();
}

HermitianMatrix kron(const HermitianMatrix &a, const HermitianMatrix &b) {
    const int na = a.dim();
    const int nb = b.dim();
    ComplexMatrix out(na * nb, na * nb);
    for (int i = 0; i < na; ++i) {
        for (int k = 0; k < na; ++k) {
            out.block(i * nb, k * nb, nb, nb) = a(i, k) * b.matrix();
        }
    }
    return HermitianMatrix::unchecked(std::move(out));
}

double hermiticity_defect(const ComplexMatrix &m) {
    if (m.rows() != m.cols()) {
        return std::numeric_limits<double>::infinity();
    }
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace qvolume
