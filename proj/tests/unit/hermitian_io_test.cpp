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

#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qvolume/errors.hpp"
#include "qvolume/hermitian.hpp"
#include "qvolume/matrix_io.hpp"
#include "qvolume/operator_basis.hpp"

using namespace qvolume;

TEST(HermitianMatrix, RejectsNonHermitianInput) {
    ComplexMatrix m(2, 2);
    m << 1.0, Complex(0.0, 1.0), Complex(0.0, 1.0), 0.0;
    EXPECT_THROW(HermitianMatrix{m}, InvalidInput);
    EXPECT_THROW(HermitianMatrix{ComplexMatrix(2, 3)}, InvalidInput);
}

TEST(HermitianMatrix, SymmetrizesWithinTolerance) {
    ComplexMatrix m(2, 2);
    m << 0.5, Complex(0.1, 1e-11), Complex(0.1, 0.0), 0.5;
    HermitianMatrix h(m);
    EXPECT_EQ(hermiticity_defect(h.matrix()), 0.0);
    EXPECT_DOUBLE_EQ(h.trace(), 1.0);
}

TEST(HermitianMatrix, KronMatchesLiteral) {
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            ComplexMatrix expected = qvolume::testing::kron_literal(qvolume::testing::pauli_literal(a),
                                                                    qvolume::testing::pauli_literal(b));
            EXPECT_EQ((kron(pauli(a), pauli(b)).matrix() - expected).norm(), 0.0);
        }
    }
}

TEST(HermitianMatrix, HsInnerIsTraceOfProduct) {
    qvolume::testing::Rng rng(3);
    auto a = qvolume::testing::random_state(5, 5, rng);
    auto b = qvolume::testing::random_state(5, 2, rng);
    EXPECT_NEAR(hs_inner(a, b), (a.matrix() * b.matrix()).trace().real(), 1e-15);
    EXPECT_NEAR(a.hs_norm() * a.hs_norm(), hs_inner(a, a), 1e-15);
}

TEST(MatrixIo, FormatAndParseComplex) {
    EXPECT_EQ(format_complex({0.25, -0.5}), "0.25-0.5j");
    EXPECT_EQ(format_complex({1.0, 0.0}), "1+0j");
    EXPECT_EQ(parse_complex("0.25-0.5j"), Complex(0.25, -0.5));
    EXPECT_EQ(parse_complex("-1e-3+2E+2j"), Complex(-1e-3, 200.0));
    EXPECT_EQ(parse_complex("0.5"), Complex(0.5, 0.0));
    EXPECT_EQ(parse_complex("+0.5"), Complex(0.5, 0.0));
    EXPECT_EQ(parse_complex("-2j"), Complex(0.0, -2.0));
    EXPECT_EQ(parse_complex("1-j"), Complex(1.0, -1.0));
    EXPECT_THROW(parse_complex("abc"), InvalidInput);
    EXPECT_THROW(parse_complex("1+xj"), InvalidInput);
}

TEST(MatrixIo, RoundTripIsExact) {
    qvolume::testing::Rng rng(17);
    auto rho = qvolume::testing::random_state(6, 3, rng);
    std::stringstream ss;
    write_matrix(ss, rho.matrix());
    ComplexMatrix back = read_matrix(ss);
    EXPECT_EQ(back, rho.matrix());
}

TEST(MatrixIo, ReaderSkipsCommentsAndRejectsBadInput) {
    std::istringstream ok("# Bell state\n2\n0.5 0\n0 0.5\n");
    ComplexMatrix m = read_matrix(ok);
    EXPECT_EQ(m(0, 0), Complex(0.5, 0.0));
    std::istringstream truncated("2\n0.5 0\n0\n");
    EXPECT_THROW(read_matrix(truncated), InvalidInput);
    std::istringstream trailing("1\n1 2\n");
    EXPECT_THROW(read_matrix(trailing), InvalidInput);
    std::istringstream bad_dim("x\n");
    EXPECT_THROW(read_matrix(bad_dim), InvalidInput);
    std::istringstream empty("");
    EXPECT_THROW(read_matrix(empty), InvalidInput);
}
