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

#include "qvolume/operator_basis.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "qvolume/errors.hpp"
#include "qvolume/partial_transpose.hpp"

namespace qvolume {

namespace {

constexpr Complex kI{0.0, 1.0};

HermitianMatrix from_entries(int n, std::initializer_list<std::tuple<int, int, Complex>> entries) {
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    for (const auto &[r, c, v] : entries) {
        m(r, c) = v;
    }
    return HermitianMatrix::unchecked(std::move(m));
}

OperatorBasis normalized_basis(int n, const std::vector<HermitianMatrix> &raw, double norm) {
    OperatorBasis basis;
    basis.dim = n;
    basis.identity_element = HermitianMatrix::identity(n) * (1.0 / std::sqrt(static_cast<double>(n)));
    basis.generators.reserve(raw.size());
    for (const auto &g : raw) {
        basis.generators.push_back(g * (1.0 / norm));
    }
    return basis;
}

const HermitianMatrix &id2() {
    static const HermitianMatrix m = HermitianMatrix::identity(2);
    return m;
}

const HermitianMatrix &id3() {
    static const HermitianMatrix m = HermitianMatrix::identity(3);
    return m;
}

const HermitianMatrix &id4() {
    static const HermitianMatrix m = HermitianMatrix::identity(4);
    return m;
}

// I, sx, sy, sz indexed 0..3.
HermitianMatrix pauli4(int k) {
    return k == 0 ? id2() : pauli(k - 1);
}

HermitianMatrix pp(int a, int b) {
    return kron(pauli4(a), pauli4(b));
}

// The 15 two-qubit generators in the order used by the two_qubit family:
// sigma_i (x) I, I (x) sigma_j, then sigma_i (x) sigma_j with i major.
std::vector<HermitianMatrix> two_qubit_generators() {
    std::vector<HermitianMatrix> gens;
    for (int i = 1; i <= 3; ++i) {
        gens.push_back(pp(i, 0));
    }
    for (int j = 1; j <= 3; ++j) {
        gens.push_back(pp(0, j));
    }
    for (int i = 1; i <= 3; ++i) {
        for (int j = 1; j <= 3; ++j) {
            gens.push_back(pp(i, j));
        }
    }
    return gens;
}

constexpr int X = 1;
constexpr int Y = 2;
constexpr int Z = 3;

StateFamily build_family(FamilyId id) {
    std::vector<HermitianMatrix> gens;
    std::vector<double> scales;
    auto uniform = [&](double s) {
        scales.assign(gens.size(), s);
    };
    const double inv_sqrt6 = 1.0 / std::sqrt(6.0);
    const double inv_2sqrt2 = 1.0 / (2.0 * std::sqrt(2.0));

    switch (id) {
        case FamilyId::bell_diagonal:
            gens = {pp(X, X), pp(Y, Y), pp(Z, Z)};
            uniform(0.5);
            return StateFamily(id, 2, 2, std::move(gens), std::move(scales));
        case FamilyId::x_states:
            gens = {pp(Z, 0), pp(0, Z), pp(X, X), pp(X, Y), pp(Y, X), pp(Y, Y), pp(Z, Z)};
            uniform(0.5);
            return StateFamily(id, 2, 2, std::move(gens), std::move(scales));
        case FamilyId::rebit_rebit:
            gens = {pp(0, X), pp(0, Z), pp(X, 0), pp(Z, 0), pp(X, X), pp(X, Z), pp(Y, Y), pp(Z, X), pp(Z, Z)};
            uniform(0.5);
            return StateFamily(id, 2, 2, std::move(gens), std::move(scales));
        case FamilyId::two_qubit:
            gens = two_qubit_generators();
            uniform(0.5);
            return StateFamily(id, 2, 2, std::move(gens), std::move(scales));
        case FamilyId::qbqt_i:
            for (int j = 1; j <= 8; ++j) {
                gens.push_back(kron(pauli(1), gell_mann_matrix(j)));
            }
            uniform(0.5);
            return StateFamily(id, 2, 3, std::move(gens), std::move(scales));
        case FamilyId::qbqt_ii:
        case FamilyId::qbqt_iii: {
            const int last = id == FamilyId::qbqt_ii ? 4 : 8;
            for (int a = 0; a < 3; ++a) {
                for (int j = 1; j <= last; ++j) {
                    gens.push_back(kron(pauli(a), gell_mann_matrix(j)));
                }
            }
            uniform(0.5);
            return StateFamily(id, 2, 3, std::move(gens), std::move(scales));
        }
        case FamilyId::qubit_qutrit:
            for (int a = 0; a < 3; ++a) {
                gens.push_back(kron(pauli(a), id3()));
                scales.push_back(inv_sqrt6);
            }
            for (int j = 1; j <= 8; ++j) {
                gens.push_back(kron(id2(), gell_mann_matrix(j)));
                scales.push_back(0.5);
            }
            for (int a = 0; a < 3; ++a) {
                for (int j = 1; j <= 8; ++j) {
                    gens.push_back(kron(pauli(a), gell_mann_matrix(j)));
                    scales.push_back(0.5);
                }
            }
            return StateFamily(id, 2, 3, std::move(gens), std::move(scales));
        case FamilyId::qubit_ququart: {
            // The four-level basis reuses the 15 two-qubit generators.
            const auto m = two_qubit_generators();
            for (int a = 0; a < 3; ++a) {
                gens.push_back(kron(pauli(a), id4()));
            }
            for (const auto &mj : m) {
                gens.push_back(kron(id2(), mj));
            }
            for (int a = 0; a < 3; ++a) {
                for (const auto &mj : m) {
                    gens.push_back(kron(pauli(a), mj));
                }
            }
            uniform(inv_2sqrt2);
            return StateFamily(id, 2, 4, std::move(gens), std::move(scales));
        }
        case FamilyId::qutrit_qutrit:
            for (int i = 1; i <= 8; ++i) {
                gens.push_back(kron(gell_mann_matrix(i), id3()));
                scales.push_back(inv_sqrt6);
            }
            for (int j = 1; j <= 8; ++j) {
                gens.push_back(kron(id3(), gell_mann_matrix(j)));
                scales.push_back(inv_sqrt6);
            }
            for (int i = 1; i <= 8; ++i) {
                for (int j = 1; j <= 8; ++j) {
                    gens.push_back(kron(gell_mann_matrix(i), gell_mann_matrix(j)));
                    scales.push_back(0.5);
                }
            }
            return StateFamily(id, 3, 3, std::move(gens), std::move(scales));
    }
    throw UnknownFamily("unknown family id");
}

}  // namespace

HermitianMatrix pauli(int axis) {
    switch (axis) {
        case 0:
            return from_entries(2, {{0, 1, 1.0}, {1, 0, 1.0}});
        case 1:
            return from_entries(2, {{0, 1, -kI}, {1, 0, kI}});
        case 2:
            return from_entries(2, {{0, 0, 1.0}, {1, 1, -1.0}});
        default:
            throw InvalidInput("pauli: axis must be 0, 1 or 2");
    }
}

HermitianMatrix gell_mann_matrix(int index) {
    switch (index) {
        case 1:
            return from_entries(3, {{0, 1, 1.0}, {1, 0, 1.0}});
        case 2:
            return from_entries(3, {{0, 1, -kI}, {1, 0, kI}});
        case 3:
            return from_entries(3, {{0, 0, 1.0}, {1, 1, -1.0}});
        case 4:
            return from_entries(3, {{0, 2, 1.0}, {2, 0, 1.0}});
        case 5:
            return from_entries(3, {{0, 2, -kI}, {2, 0, kI}});
        case 6:
            return from_entries(3, {{1, 2, 1.0}, {2, 1, 1.0}});
        case 7:
            return from_entries(3, {{1, 2, -kI}, {2, 1, kI}});
        case 8: {
            const double s = 1.0 / std::sqrt(3.0);
            return from_entries(3, {{0, 0, s}, {1, 1, s}, {2, 2, -2.0 * s}});
        }
        default:
            throw InvalidInput("gell_mann_matrix: index must be in 1..8");
    }
}

OperatorBasis pauli_basis() {
    return normalized_basis(2, {pauli(0), pauli(1), pauli(2)}, std::sqrt(2.0));
}

OperatorBasis gell_mann_basis() {
    std::vector<HermitianMatrix> raw;
    for (int i = 1; i <= 8; ++i) {
        raw.push_back(gell_mann_matrix(i));
    }
    return normalized_basis(3, raw, std::sqrt(2.0));
}

OperatorBasis generalized_gell_mann_basis(int n) {
    if (n < 2) {
        throw InvalidDimension("generalized_gell_mann_basis: n must be >= 2, got " + std::to_string(n));
    }
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    OperatorBasis basis;
    basis.dim = n;
    basis.identity_element = HermitianMatrix::identity(n) * (1.0 / std::sqrt(static_cast<double>(n)));
    basis.generators.reserve(static_cast<size_t>(n * n - 1));

    for (int j = 0; j < n; ++j) {
        for (int k = j + 1; k < n; ++k) {
            ComplexMatrix m = ComplexMatrix::Zero(n, n);
            m(j, k) = inv_sqrt2;
            m(k, j) = inv_sqrt2;
            basis.generators.push_back(HermitianMatrix::unchecked(std::move(m)));
        }
    }
    for (int j = 0; j < n; ++j) {
        for (int k = j + 1; k < n; ++k) {
            ComplexMatrix m = ComplexMatrix::Zero(n, n);
            m(j, k) = -kI * inv_sqrt2;
            m(k, j) = kI * inv_sqrt2;
            basis.generators.push_back(HermitianMatrix::unchecked(std::move(m)));
        }
    }
    for (int l = 1; l < n; ++l) {
        ComplexMatrix m = ComplexMatrix::Zero(n, n);
        const double s = 1.0 / std::sqrt(static_cast<double>(l * (l + 1)));
        for (int j = 0; j < l; ++j) {
            m(j, j) = s;
        }
        m(l, l) = -l * s;
        basis.generators.push_back(HermitianMatrix::unchecked(std::move(m)));
    }
    return basis;
}

std::string_view family_name(FamilyId id) {
    switch (id) {
        case FamilyId::bell_diagonal:
            return "bell_diagonal";
        case FamilyId::x_states:
            return "x_states";
        case FamilyId::rebit_rebit:
            return "rebit_rebit";
        case FamilyId::two_qubit:
            return "two_qubit";
        case FamilyId::qbqt_i:
            return "qbqt_i";
        case FamilyId::qbqt_ii:
            return "qbqt_ii";
        case FamilyId::qbqt_iii:
            return "qbqt_iii";
        case FamilyId::qubit_qutrit:
            return "qubit_qutrit";
        case FamilyId::qubit_ququart:
            return "qubit_ququart";
        case FamilyId::qutrit_qutrit:
            return "qutrit_qutrit";
    }
    return "unknown";
}

FamilyId parse_family(std::string_view name) {
    for (FamilyId id : kAllFamilies) {
        if (family_name(id) == name) {
            return id;
        }
    }
    throw UnknownFamily("unknown family '" + std::string(name) + "'");
}

StateFamily::StateFamily(
    FamilyId id, int n_a, int n_b, std::vector<HermitianMatrix> generators, std::vector<double> scales)
    : id_(id), n_(n_a * n_b), n_a_(n_a), n_b_(n_b), generators_(std::move(generators)), scales_(std::move(scales)) {
    if (generators_.size() != scales_.size() || generators_.empty()) {
        throw InvalidInput("StateFamily: generator and scale lists must be non-empty and of equal length");
    }
    const int d = this->d();
    metric_.resize(static_cast<size_t>(d));
    entry_begin_.reserve(static_cast<size_t>(d) + 1);
    entry_begin_.push_back(0);
    bool sign_diagonal = true;
    std::vector<int> signs;
    ComplexMatrix transposed;

    for (int i = 0; i < d; ++i) {
        const auto &g = generators_[static_cast<size_t>(i)].matrix();
        if (g.rows() != n_ || g.cols() != n_) {
            throw DimensionMismatch("StateFamily: generator has wrong dimension");
        }
        if (hermiticity_defect(g) > kConstructionTolerance || std::abs(g.trace()) > kConstructionTolerance) {
            throw NumericalFailure("StateFamily: generators must be Hermitian and traceless");
        }
        const double s = scales_[static_cast<size_t>(i)];
        metric_[static_cast<size_t>(i)] = std::abs(s) * g.norm();
        for (int c = 0; c < n_; ++c) {
            for (int r = 0; r < n_; ++r) {
                if (g(r, c) != Complex(0.0, 0.0)) {
                    entries_.push_back({c * n_ + r, s * g(r, c)});
                }
            }
        }
        entry_begin_.push_back(static_cast<int>(entries_.size()));

        detail::partial_transpose_into(g, n_a_, n_b_, transposed);
        if ((transposed - g).cwiseAbs().maxCoeff() <= kConstructionTolerance) {
            signs.push_back(1);
        } else if ((transposed + g).cwiseAbs().maxCoeff() <= kConstructionTolerance) {
            signs.push_back(-1);
        } else {
            sign_diagonal = false;
        }
    }
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            if (std::abs(hs_inner(generators_[static_cast<size_t>(i)], generators_[static_cast<size_t>(j)])) >
                kConstructionTolerance) {
                throw NumericalFailure("StateFamily: generators must be pairwise orthogonal");
            }
        }
    }
    if (sign_diagonal) {
        transpose_signs_ = std::move(signs);
    }
}

double StateFamily::min_metric_scale() const {
    return *std::min_element(metric_.begin(), metric_.end());
}

double StateFamily::max_metric_scale() const {
    return *std::max_element(metric_.begin(), metric_.end());
}

void StateFamily::add_terms(std::span<const double> coords, ComplexMatrix &out) const {
    Complex *data = out.data();
    const int d = this->d();
    for (int i = 0; i < d; ++i) {
        const double a = coords[static_cast<size_t>(i)];
        if (a == 0.0) {
            continue;
        }
        for (int e = entry_begin_[static_cast<size_t>(i)]; e < entry_begin_[static_cast<size_t>(i) + 1]; ++e) {
            const Entry &entry = entries_[static_cast<size_t>(e)];
            data[entry.offset] += a * entry.value;
        }
    }
}

void StateFamily::assemble(std::span<const double> coords, ComplexMatrix &out) const {
    out.setZero(n_, n_);
    const double diag = 1.0 / n_;
    for (int k = 0; k < n_; ++k) {
        out(k, k) = diag;
    }
    add_terms(coords, out);
}

void StateFamily::assemble_direction(std::span<const double> dir, ComplexMatrix &out) const {
    out.setZero(n_, n_);
    add_terms(dir, out);
}

FamilyHandle make_family(FamilyId id) {
    static std::mutex mutex;
    static std::array<FamilyHandle, kAllFamilies.size()> cache;
    const auto slot = static_cast<size_t>(id);
    std::lock_guard<std::mutex> lock(mutex);
    if (!cache[slot]) {
        cache[slot] = std::make_shared<const StateFamily>(build_family(id));
    }
    return cache[slot];
}

FamilyHandle make_family(std::string_view name) {
    return make_family(parse_family(name));
}

CoordinateVector::CoordinateVector(FamilyHandle family, std::vector<double> coords)
    : family_(std::move(family)), coords_(std::move(coords)) {
    if (!family_) {
        throw InvalidInput("CoordinateVector: null family");
    }
    if (coords_.size() != static_cast<size_t>(family_->d())) {
        throw DimensionMismatch(
            "CoordinateVector: family " + std::string(family_->name()) + " expects " + std::to_string(family_->d()) +
            " coordinates, got " + std::to_string(coords_.size()));
    }
}

CoordinateVector CoordinateVector::zero(FamilyHandle family) {
    const auto d = static_cast<size_t>(family->d());
    return CoordinateVector(std::move(family), std::vector<double>(d, 0.0));
}

HermitianMatrix coords_to_matrix(const CoordinateVector &v) {
    ComplexMatrix m;
    v.family().assemble(v.coords(), m);
    return HermitianMatrix::unchecked(std::move(m));
}

CoordinateVector matrix_to_coords(const FamilyHandle &family, const HermitianMatrix &a) {
    if (a.dim() != family->n()) {
        throw DimensionMismatch(
            "matrix_to_coords: expected dimension " + std::to_string(family->n()) + ", got " +
            std::to_string(a.dim()));
    }
    if (std::abs(a.trace() - 1.0) > kInputTolerance) {
        throw InvalidInput("matrix_to_coords: matrix does not have unit trace");
    }
    const int d = family->d();
    std::vector<double> coords(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) {
        const auto &g = family->generators()[static_cast<size_t>(i)];
        const double s = family->coefficient_scale()[static_cast<size_t>(i)];
        // Tr(scale_i G_i * scale_i G_i) = metric_i^2, so the coefficient along G_i is
        // Tr(G_i A) / (scale_i * Tr(G_i^2)).
        coords[static_cast<size_t>(i)] = hs_inner(g, a) / (s * hs_inner(g, g));
    }
    CoordinateVector v(family, std::move(coords));
    const double residual = (coords_to_matrix(v).matrix() - a.matrix()).norm();
    if (residual > kInputTolerance) {
        throw OutOfSubspace(
            "matrix_to_coords: matrix lies outside the " + std::string(family->name()) + " subspace (residual " +
            std::to_string(residual) + ")");
    }
    return v;
}

}  // namespace qvolume
