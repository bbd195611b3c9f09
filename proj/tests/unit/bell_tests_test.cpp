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

#include "qvolume/bell_tests.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qvolume/errors.hpp"
#include "qvolume/partial_transpose.hpp"

using namespace qvolume;
using qvolume::testing::Rng;

namespace {

TwoQubitBloch bell_diagonal_bloch(double x, double y, double z) {
    auto f = make_family(FamilyId::bell_diagonal);
    return bloch_decompose(coords_to_matrix(CoordinateVector(f, {x, y, z})));
}

ComplexMatrix spin_operator(const Eigen::Vector3d &v) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    for (int a = 0; a < 3; ++a) m += v(a) * ComplexMatrix(qvolume::testing::pauli_literal(a));
    return m;
}

// Tr(rho (v.sigma x w.sigma)) computed from the density matrix.
double correlation(const HermitianMatrix &rho, const Eigen::Vector3d &v, const Eigen::Vector3d &w) {
    return (rho.matrix() * qvolume::testing::kron_literal(spin_operator(v), spin_operator(w))).trace().real();
}

double local_a(const HermitianMatrix &rho, const Eigen::Vector3d &v) {
    return (rho.matrix() * qvolume::testing::kron_literal(spin_operator(v), ComplexMatrix::Identity(2, 2))).trace().real();
}

double local_b(const HermitianMatrix &rho, const Eigen::Vector3d &w) {
    return (rho.matrix() * qvolume::testing::kron_literal(ComplexMatrix::Identity(2, 2), spin_operator(w))).trace().real();
}

// Maximum of the CHSH expression over v1, v2 for fixed w1, w2 (Cauchy-Schwarz).
double chsh_max_over_v(const Eigen::Matrix3d &c, const Eigen::Vector3d &w1, const Eigen::Vector3d &w2) {
    return 2.0 * (c * (w1 + w2)).norm() + 2.0 * (c * (w1 - w2)).norm();
}

HermitianMatrix mixed_rank_state(Rng &rng, int trial) {
    return qvolume::testing::random_state(4, 1 + trial % 4, rng);
}

}  // namespace

TEST(BlochDecompose, Examples) {
    auto b = bloch_decompose(HermitianMatrix(qvolume::testing::phi_plus()));
    EXPECT_NEAR(b.tau_a.norm() + b.tau_b.norm(), 0.0, 1e-15);
    Eigen::Matrix3d expected = Eigen::Vector3d(0.5, -0.5, 0.5).asDiagonal();
    EXPECT_NEAR((b.corr - expected).norm(), 0.0, 1e-15);
    auto zero = bloch_decompose(HermitianMatrix::identity(4) * 0.25);
    EXPECT_EQ(zero.corr.norm() + zero.tau_a.norm() + zero.tau_b.norm(), 0.0);
    auto bd = bell_diagonal_bloch(0.1, 0.2, -0.3);
    Eigen::Matrix3d expected_bd = Eigen::Vector3d(0.1, 0.2, -0.3).asDiagonal();
    EXPECT_NEAR((bd.corr - expected_bd).norm(), 0.0, 1e-15);
    EXPECT_THROW(bloch_decompose(HermitianMatrix::identity(6)), InvalidInput);
}

TEST(BlochDecompose, ReconstructsStateAndCorrelations) {
    Rng rng(1);
    auto two_qubit = make_family(FamilyId::two_qubit);
    for (int trial = 0; trial < 50; ++trial) {
        auto rho = qvolume::testing::random_state(4, 4, rng);
        auto b = bloch_decompose(rho);
        ComplexMatrix rebuilt = ComplexMatrix::Identity(4, 4) / 4.0;
        for (int i = 0; i < 3; ++i) {
            Eigen::Vector3d e = Eigen::Vector3d::Unit(i);
            rebuilt += 0.5 * b.tau_a(i) * qvolume::testing::kron_literal(spin_operator(e), ComplexMatrix::Identity(2, 2));
            rebuilt += 0.5 * b.tau_b(i) * qvolume::testing::kron_literal(ComplexMatrix::Identity(2, 2), spin_operator(e));
            for (int j = 0; j < 3; ++j) {
                rebuilt += 0.5 * b.corr(i, j) *
                           qvolume::testing::kron_literal(spin_operator(e), spin_operator(Eigen::Vector3d::Unit(j)));
            }
        }
        EXPECT_NEAR((rebuilt - rho.matrix()).norm(), 0.0, 1e-12);
        // The two_qubit coordinates are (tau_a, tau_b, corr row-major).
        auto coords = matrix_to_coords(two_qubit, rho);
        for (int i = 0; i < 3; ++i) {
            EXPECT_NEAR(coords[static_cast<size_t>(i)], b.tau_a(i), 1e-12);
            EXPECT_NEAR(coords[static_cast<size_t>(3 + i)], b.tau_b(i), 1e-12);
            for (int j = 0; j < 3; ++j) EXPECT_NEAR(coords[static_cast<size_t>(6 + 3 * i + j)], b.corr(i, j), 1e-12);
        }
        RngStream vr(static_cast<std::uint64_t>(trial), 0);
        Eigen::Vector3d v = random_unit_vector(vr);
        Eigen::Vector3d w = Eigen::Vector3d(0.3, -0.4, 0.866).normalized();
        EXPECT_NEAR(correlation(rho, v, w), 2.0 * v.dot(b.corr * w), 1e-12);
        EXPECT_NEAR(local_a(rho, v), 2.0 * v.dot(b.tau_a), 1e-12);
        EXPECT_NEAR(local_b(rho, w), 2.0 * w.dot(b.tau_b), 1e-12);
    }
}

TEST(BlochMap, MatchesDecompositionForTwoQubitFamilies) {
    RngStream rng(2, 0);
    for (FamilyId id : {FamilyId::bell_diagonal, FamilyId::x_states, FamilyId::rebit_rebit, FamilyId::two_qubit}) {
        auto f = make_family(id);
        BlochMap map(*f);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> x(static_cast<size_t>(f->d()));
            for (double &v : x) v = 0.2 * rng.normal();
            auto a = map(x);
            auto b = bloch_decompose(coords_to_matrix(CoordinateVector(f, x)));
            EXPECT_NEAR((a.corr - b.corr).norm() + (a.tau_a - b.tau_a).norm() + (a.tau_b - b.tau_b).norm(), 0.0, 1e-14);
        }
    }
    EXPECT_THROW(BlochMap(*make_family(FamilyId::qbqt_i)), InvalidInput);
}

TEST(Chsh, TsirelsonPointOfBellState) {
    auto b = bloch_decompose(HermitianMatrix(qvolume::testing::phi_plus()));
    ChshSetting s{Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitZ(),
                  (Eigen::Vector3d::UnitX() + Eigen::Vector3d::UnitZ()) / std::sqrt(2.0),
                  (Eigen::Vector3d::UnitX() - Eigen::Vector3d::UnitZ()) / std::sqrt(2.0)};
    EXPECT_NEAR(chsh_value(b, s), 2.0 * std::numbers::sqrt2, 1e-14);
}

TEST(Chsh, ValueIsTheCorrelationSum) {
    Rng rng(3);
    RngStream srng(3, 0);
    for (int trial = 0; trial < 100; ++trial) {
        auto rho = mixed_rank_state(rng, trial);
        auto b = bloch_decompose(rho);
        auto s = random_chsh_setting(srng);
        const double literal = correlation(rho, s.v1, s.w1) + correlation(rho, s.v1, s.w2) +
                               correlation(rho, s.v2, s.w1) - correlation(rho, s.v2, s.w2);
        EXPECT_NEAR(chsh_value(b, s), literal, 1e-12);
        // Linear in C, and symmetric under w1 <-> w2 with v2 -> -v2.
        TwoQubitBloch doubled = b;
        doubled.corr *= 2.0;
        EXPECT_NEAR(chsh_value(doubled, s), 2.0 * chsh_value(b, s), 1e-12);
        ChshSetting swapped{s.v1, -s.v2, s.w2, s.w1};
        EXPECT_NEAR(chsh_value(b, swapped), chsh_value(b, s), 1e-12);
    }
    TwoQubitBloch zero;
    EXPECT_EQ(chsh_value(zero, random_chsh_setting(srng)), 0.0);
}

TEST(Chsh, HorodeckiExamples) {
    EXPECT_TRUE(violates_chsh(bloch_decompose(HermitianMatrix(qvolume::testing::phi_plus()))));
    EXPECT_NEAR(chsh_eigen_sum(bloch_decompose(HermitianMatrix(qvolume::testing::phi_plus()))), 0.5, 1e-15);
    EXPECT_FALSE(violates_chsh(TwoQubitBloch{}));
    auto b = bell_diagonal_bloch(0.45, -0.45, 0.45);
    EXPECT_NEAR(chsh_eigen_sum(b), 0.405, 1e-15);
    EXPECT_TRUE(violates_chsh(b));
    auto ev = qvolume::testing::eigenvalues(
        coords_to_matrix(CoordinateVector(make_family(FamilyId::bell_diagonal), {0.45, -0.45, 0.45})).matrix());
    EXPECT_NEAR(ev[0], 0.025, 1e-15);
    EXPECT_NEAR(ev[3], 0.925, 1e-15);
    auto near = bell_diagonal_bloch(0.35, 0.35, 0.0);
    EXPECT_FALSE(violates_chsh(near));
    EXPECT_FALSE(violates_12m(near));
}

TEST(Chsh, HorodeckiCriterionMatchesBruteForce) {
    Rng rng(4);
    RngStream srng(4, 0);
    int compared = 0, violating = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        auto b = bloch_decompose(mixed_rank_state(rng, trial));
        const double margin = chsh_eigen_sum(b) - 0.25;
        if (std::abs(margin) <= 0.01) {
            continue;
        }
        double best = 0.0;
        for (int k = 0; k < 100000 && best <= 2.0; ++k) {
            best = std::max(best, chsh_max_over_v(b.corr, random_unit_vector(srng), random_unit_vector(srng)));
        }
        ++compared;
        violating += margin > 0 ? 1 : 0;
        EXPECT_EQ(violates_chsh(b), best > 2.0) << "margin " << margin;
    }
    EXPECT_GT(compared, 700);
    EXPECT_GT(violating, 100);
}

TEST(TwelveSettings, Examples) {
    EXPECT_TRUE(violates_12m(bell_diagonal_bloch(0.45, -0.45, 0.45)));
    EXPECT_FALSE(violates_12m(TwoQubitBloch{}));
}

TEST(TwelveSettings, EqualsUnionOfFixedSettings) {
    const double r = 1.0 / std::sqrt(2.0);
    std::vector<ChshSetting> settings;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            for (double sj : {1.0, -1.0}) {
                Eigen::Vector3d ei = Eigen::Vector3d::Unit(i), ej = Eigen::Vector3d::Unit(j);
                settings.push_back({ei, ej, r * (ei + sj * ej), r * (ei - sj * ej)});
            }
        }
    }
    ASSERT_EQ(settings.size(), 12u);
    Rng rng(5);
    for (int trial = 0; trial < 20000; ++trial) {
        auto b = bloch_decompose(mixed_rank_state(rng, trial));
        double best = 0.0;
        for (const auto &s : settings) best = std::max(best, std::abs(chsh_value(b, s)));
        if (std::abs(best - 2.0) < 1e-9) continue;
        EXPECT_EQ(violates_12m(b), best > 2.0);
    }
}

TEST(SoundnessChain, TwelveImpliesChshImpliesEntangled) {
    Rng rng(6);
    for (int trial = 0; trial < 20000; ++trial) {
        auto rho = mixed_rank_state(rng, trial);
        auto b = bloch_decompose(rho);
        if (violates_12m(b)) {
            EXPECT_TRUE(violates_chsh(b));
        }
        if (violates_chsh(b)) {
            EXPECT_FALSE(is_ppt(rho, 2, 2));
        }
    }
}

TEST(CollinsGisin, ValueMatchesExpectationValues) {
    Rng rng(7);
    RngStream srng(7, 0);
    for (int trial = 0; trial < 100; ++trial) {
        auto rho = mixed_rank_state(rng, trial);
        auto b = bloch_decompose(rho);
        auto s = random_cg_setting(srng);
        // Expectation values E(.) = Tr(rho .), with E(v.sigma x w.sigma) = 2<v, C w> etc.,
        // enter the expression with the normalization of the Bloch decomposition (halved).
        const double literal =
            2.0 + 0.5 * (local_a(rho, s.v1) + local_a(rho, s.v2) + local_b(rho, s.w1) + local_b(rho, s.w2)) +
            0.5 * (correlation(rho, s.v1, s.w1) + correlation(rho, s.v1, s.w2) + correlation(rho, s.v1, s.w3) +
                   correlation(rho, s.v2, s.w1) + correlation(rho, s.v2, s.w2) - correlation(rho, s.v2, s.w3) +
                   correlation(rho, s.v3, s.w1) - correlation(rho, s.v3, s.w2));
        EXPECT_NEAR(cg_value(b, s), literal, 1e-12);
        EXPECT_GE(cg_value(b, s), cg_min_over_v(b, s.w1, s.w2, s.w3) - 1e-12);
    }
    EXPECT_EQ(cg_value(TwoQubitBloch{}, random_cg_setting(srng)), 2.0);
}

TEST(CollinsGisin, MinOverVIsExact) {
    Rng rng(8);
    RngStream srng(8, 0);
    for (int trial = 0; trial < 20; ++trial) {
        auto b = bloch_decompose(mixed_rank_state(rng, trial));
        const Eigen::Vector3d w1 = random_unit_vector(srng), w2 = random_unit_vector(srng), w3 = random_unit_vector(srng);
        const double analytic = cg_min_over_v(b, w1, w2, w3);
        double best = 1e9;
        for (int k = 0; k < 100000; ++k) {
            best = std::min(best, cg_value(b, {random_unit_vector(srng), random_unit_vector(srng),
                                               random_unit_vector(srng), w1, w2, w3}));
        }
        EXPECT_GE(best, analytic - 1e-12);
        EXPECT_LT(best - analytic, 0.1);
    }
    EXPECT_EQ(cg_min_over_v(TwoQubitBloch{}, Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitY(), Eigen::Vector3d::UnitZ()), 2.0);
}

TEST(CollinsGisin, BellDiagonalBody) {
    EXPECT_NEAR(cg_bell_diagonal_value({0.45, -0.45, 0.45}), -0.25, 1e-15);
    EXPECT_TRUE(violates_cg_bell_diagonal({0.45, -0.45, 0.45}));
    EXPECT_FALSE(violates_cg_bell_diagonal({0.0, 0.0, 0.0}));
    EXPECT_NEAR(cg_bell_diagonal_value({0.3, 0.3, 0.0}), 0.5, 1e-15);
    EXPECT_FALSE(violates_cg_bell_diagonal({0.3, 0.3, 0.0}));
    // Order does not matter.
    EXPECT_DOUBLE_EQ(cg_bell_diagonal_value({0.1, -0.4, 0.2}), cg_bell_diagonal_value({0.2, 0.1, 0.4}));
}

TEST(CollinsGisin, OptimizerFindsBodyViolation) {
    auto b = bell_diagonal_bloch(0.45, -0.45, 0.45);
    OptimizerConfig cfg;
    cfg.use_lower_bound = false;
    RngStream rng(9, 0);
    auto best = minimize_cg(b, cfg, rng, 1.0);  // do not stop early
    EXPECT_LE(best.value, -0.25 + 1e-9);
    EXPECT_NEAR(cg_min_over_v(b, best.w1, best.w2, best.w3), best.value, 1e-15);
    EXPECT_TRUE(violates_cg_optimized(b, cfg, rng));
    EXPECT_FALSE(violates_cg_optimized(TwoQubitBloch{}, cfg, rng));
    EXPECT_NEAR(best.w1.norm(), 1.0, 1e-12);
}

TEST(CollinsGisin, OptimizerReachesBodyMinimumOnBellDiagonalStates) {
    Rng rng(10);
    RngStream srng(10, 0);
    OptimizerConfig converged;
    converged.use_lower_bound = false;
    converged.max_iterations = 1000;
    OptimizerConfig standard;
    standard.use_lower_bound = false;
    for (int trial = 0; trial < 200; ++trial) {
        auto p = qvolume::testing::uniform_tetrahedron_point(rng);
        auto b = bell_diagonal_bloch(p[0], p[1], p[2]);
        const double body = cg_bell_diagonal_value(p);
        EXPECT_NEAR(minimize_cg(b, converged, srng, 10.0).value, body, 1e-6);
        // Near the violation threshold the default iteration budget is already tight.
        if (std::abs(body) < 0.05) {
            EXPECT_NEAR(minimize_cg(b, standard, srng, 10.0).value, body, 1e-8);
        }
    }
}

TEST(CollinsGisin, OptimizedAgreesWithBodyOnBellDiagonalSample) {
    Rng rng(11);
    RngStream srng(11, 0);
    OptimizerConfig cfg;
    int agree = 0, violating = 0;
    const int n = 10000;
    for (int trial = 0; trial < n; ++trial) {
        auto p = qvolume::testing::uniform_tetrahedron_point(rng);
        const bool body = violates_cg_bell_diagonal(p);
        violating += body ? 1 : 0;
        agree += (body == violates_cg_optimized(bell_diagonal_bloch(p[0], p[1], p[2]), cfg, srng)) ? 1 : 0;
    }
    EXPECT_GE(agree, n - n / 1000);
    EXPECT_GT(violating, 200);
}

TEST(CollinsGisin, LowerBoundIsSound) {
    Rng rng(12);
    RngStream srng(12, 0);
    OptimizerConfig cfg;
    cfg.use_lower_bound = false;
    cfg.restarts = 8;
    int pruned = 0;
    for (int trial = 0; trial < 500; ++trial) {
        auto b = bloch_decompose(mixed_rank_state(rng, trial));
        const double bound = cg_lower_bound(b);
        EXPECT_LE(bound, minimize_cg(b, cfg, srng, 10.0).value + 1e-12);
        for (int k = 0; k < 200; ++k) {
            EXPECT_LE(bound, cg_min_over_v(b, random_unit_vector(srng), random_unit_vector(srng), random_unit_vector(srng)) + 1e-12);
        }
        pruned += bound >= 0.0 ? 1 : 0;
    }
    // The bound is informative for a sizeable share of these states.
    EXPECT_GT(pruned, 20);
}

TEST(CollinsGisin, DetectionIsMonotoneInRestarts) {
    Rng rng(13);
    std::vector<TwoQubitBloch> states;
    for (int trial = 0; trial < 2000; ++trial) states.push_back(bloch_decompose(mixed_rank_state(rng, trial)));
    int previous = -1;
    for (int restarts : {1, 2, 4, 8, 32}) {
        OptimizerConfig cfg;
        cfg.restarts = restarts;
        RngStream srng(13, 0);
        int detected = 0;
        for (const auto &b : states) detected += violates_cg_optimized(b, cfg, srng) ? 1 : 0;
        EXPECT_GE(detected, previous) << restarts;
        previous = detected;
    }
    EXPECT_GT(previous, 100);
}

TEST(RandomScan, SoundAndMonotone) {
    Rng rng(14);
    RngStream zero_rng(1, 0);
    const auto zero_flags = random_measurement_scan(TwoQubitBloch{}, 50, zero_rng);
    EXPECT_FALSE(zero_flags.chsh_violated);
    EXPECT_FALSE(zero_flags.cg_violated);
    for (int trial = 0; trial < 300; ++trial) {
        auto b = bloch_decompose(mixed_rank_state(rng, trial));
        RngStream a(static_cast<std::uint64_t>(trial), 0);
        auto first = first_violation_indices(b, 200, a);
        bool prev_chsh = false, prev_cg = false;
        for (int m : {1, 5, 20, 200}) {
            RngStream s(static_cast<std::uint64_t>(trial), 0);
            auto flags = random_measurement_scan(b, m, s);
            EXPECT_EQ(flags.chsh_violated, first.chsh <= m);
            EXPECT_EQ(flags.cg_violated, first.cg <= m);
            EXPECT_TRUE(!prev_chsh || flags.chsh_violated);
            EXPECT_TRUE(!prev_cg || flags.cg_violated);
            prev_chsh = flags.chsh_violated;
            prev_cg = flags.cg_violated;
            if (flags.chsh_violated) EXPECT_TRUE(violates_chsh(b));
        }
    }
    RngStream s(1, 0);
    EXPECT_THROW(random_measurement_scan(TwoQubitBloch{}, 0, s), InvalidConfig);
}
