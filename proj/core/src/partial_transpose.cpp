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

#include "qvolume/partial_transpose.hpp"

#include <string>
#include <vector>

#include "qvolume/errors.hpp"

namespace qvolume {

namespace detail {

void partial_transpose_into(const ComplexMatrix &in, int n_a, int n_b, ComplexMatrix &out) {
    if (n_a < 1 || n_b < 1 || in.rows() != static_cast<Eigen::Index>(n_a) * n_b || in.cols() != in.rows()) {
        throw InvalidPartition(
            "partial_transpose: matrix of size " + std::to_string(in.rows()) + " does not split as " +
            std::to_string(n_a) + " x " + std::to_string(n_b));
    }
    out.resize(in.rows(), in.cols());
    for (int i = 0; i < n_a; ++i) {
        for (int k = 0; k < n_a; ++k) {
            // Block (i, k) of the output is block (k, i) of the input.
            out.block(i * n_b, k * n_b, n_b, n_b) = in.block(k * n_b, i * n_b, n_b, n_b);
        }
    }
}

}  // namespace detail

HermitianMatrix partial_transpose(const HermitianMatrix &rho, int n_a, int n_b) {
    ComplexMatrix out;
    detail::partial_transpose_into(rho.matrix(), n_a, n_b, out);
    return HermitianMatrix::unchecked(std::move(out));
}

bool is_ppt(const HermitianMatrix &rho, int n_a, int n_b, double tol) {
    ComplexMatrix out;
    detail::partial_transpose_into(rho.matrix(), n_a, n_b, out);
    return detail::newton_psd(out, tol);
}

bool ppt_predicate_on_coords(const CoordinateVector &v, double tol) {
    const StateFamily &family = v.family();
    const auto &signs = family.transpose_signs();
    ComplexMatrix m;
    if (!signs.empty()) {
        std::vector<double> flipped(v.coords());
        for (size_t i = 0; i < flipped.size(); ++i) {
            flipped[i] *= signs[i];
        }
        family.assemble(flipped, m);
        return detail::newton_psd(m, tol);
    }
    ComplexMatrix rho;
    family.assemble(v.coords(), rho);
    detail::partial_transpose_into(rho, family.n_a(), family.n_b(), m);
    return detail::newton_psd(m, tol);
}

}  // namespace qvolume
