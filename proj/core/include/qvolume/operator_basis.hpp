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

#include <array>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qvolume/hermitian.hpp"

namespace qvolume {

/// Orthonormal Hermitian operator basis of an n-level system: the normalized
/// identity plus n^2 - 1 traceless generators with Tr(T_i T_j) = delta_ij.
struct OperatorBasis {
    int dim = 0;
    HermitianMatrix identity_element;
    std::vector<HermitianMatrix> generators;
};

/// Unnormalized Pauli matrices. `axis` is 0, 1, 2 for x, y, z.
HermitianMatrix pauli(int axis);

/// Unnormalized Gell-Mann matrix gamma_index, index in 1..8, Tr(gamma_i gamma_j) = 2 delta_ij.
HermitianMatrix gell_mann_matrix(int index);

OperatorBasis pauli_basis();
OperatorBasis gell_mann_basis();

/// Generalized Gell-Mann basis for n >= 2, ordered as: symmetric
/// (E_jk + E_kj)/sqrt(2) for j < k lexicographically, then antisymmetric
/// (-i E_jk + i E_kj)/sqrt(2) in the same order, then diagonal
/// diag(1,...,1,-l,0,...)/sqrt(l(l+1)) for l = 1..n-1.
OperatorBasis generalized_gell_mann_basis(int n);

enum class FamilyId {
    bell_diagonal,
    x_states,
    rebit_rebit,
    two_qubit,
    qbqt_i,
    qbqt_ii,
    qbqt_iii,
    qubit_qutrit,
    qubit_ququart,
    qutrit_qutrit,
};

inline constexpr std::array<FamilyId, 10> kAllFamilies = {
    FamilyId::bell_diagonal, FamilyId::x_states,    FamilyId::rebit_rebit,  FamilyId::two_qubit,
    FamilyId::qbqt_i,        FamilyId::qbqt_ii,     FamilyId::qbqt_iii,     FamilyId::qubit_qutrit,
    FamilyId::qubit_ququart, FamilyId::qutrit_qutrit,
};

std::string_view family_name(FamilyId id);

/// Throws UnknownFamily.
FamilyId parse_family(std::string_view name);

/// A d-dimensional affine slice of the unit-trace Hermitian matrices on
/// C^{n_A} (x) C^{n_B}:  rho(a) = I/n + sum_i scale_i * a_i * G_i.
///
/// Instances are immutable and shared between threads; obtain them from
/// `make_family`.
class StateFamily {
   public:
    StateFamily(FamilyId id, int n_a, int n_b, std::vector<HermitianMatrix> generators, std::vector<double> scales);

    FamilyId id() const {
        return id_;
    }
    std::string_view name() const {
        return family_name(id_);
    }
    int n() const {
        return n_;
    }
    int n_a() const {
        return n_a_;
    }
    int n_b() const {
        return n_b_;
    }
    int d() const {
        return static_cast<int>(generators_.size());
    }

    const std::vector<HermitianMatrix> &generators() const {
        return generators_;
    }
    const std::vector<double> &coefficient_scale() const {
        return scales_;
    }

    /// Hilbert-Schmidt norm of scale_i * G_i, per coordinate. The coordinate
    /// map is an isometry up to this factor.
    const std::vector<double> &metric_scale() const {
        return metric_;
    }
    double min_metric_scale() const;
    double max_metric_scale() const;

    /// Partial transposition on subsystem A maps G_i to sign_i * G_i for every
    /// family built from Pauli / Gell-Mann tensor products. Empty if some
    /// generator is not mapped to +-itself.
    const std::vector<int> &transpose_signs() const {
        return transpose_signs_;
    }

    /// Writes I/n + sum_i scale_i coords_i G_i into `out` (resized to n x n).
    void assemble(std::span<const double> coords, ComplexMatrix &out) const;

    /// Writes sum_i scale_i dir_i G_i into `out` (the traceless part only).
    void assemble_direction(std::span<const double> dir, ComplexMatrix &out) const;

   private:
    struct Entry {
        int offset;  // column-major offset into the n x n matrix
        Complex value;
    };

    void add_terms(std::span<const double> coords, ComplexMatrix &out) const;

    FamilyId id_;
    int n_;
    int n_a_;
    int n_b_;
    std::vector<HermitianMatrix> generators_;
    std::vector<double> scales_;
    std::vector<double> metric_;
    std::vector<int> transpose_signs_;
    std::vector<int> entry_begin_;  // d + 1 offsets into entries_
    std::vector<Entry> entries_;
};

using FamilyHandle = std::shared_ptr<const StateFamily>;

/// Returns the shared, lazily built instance of the named family.
FamilyHandle make_family(FamilyId id);
/// Throws UnknownFamily.
FamilyHandle make_family(std::string_view name);

/// Real coordinates of one candidate state of a family.
class CoordinateVector {
   public:
    /// Throws DimensionMismatch if coords.size() != family->d().
    CoordinateVector(FamilyHandle family, std::vector<double> coords);

    static CoordinateVector zero(FamilyHandle family);

    const StateFamily &family() const {
        return *family_;
    }
    const FamilyHandle &family_handle() const {
        return family_;
    }
    const std::vector<double> &coords() const {
        return coords_;
    }
    std::size_t size() const {
        return coords_.size();
    }
    double operator[](std::size_t i) const {
        return coords_[i];
    }

   private:
    FamilyHandle family_;
    std::vector<double> coords_;
};

HermitianMatrix coords_to_matrix(const CoordinateVector &v);

/// Inverse of coords_to_matrix on the family subspace.
/// Throws DimensionMismatch (wrong n), InvalidInput (|Tr A - 1| > 1e-9) or
/// OutOfSubspace (reconstruction residual > 1e-9 in HS norm).
CoordinateVector matrix_to_coords(const FamilyHandle &family, const HermitianMatrix &a);

}  // namespace qvolume
