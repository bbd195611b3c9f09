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

#include "qvolume/positivity.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qvolume/errors.hpp"

namespace qvolume {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Tr(XY) for Hermitian X, Y: the real dot product of the underlying storage.
template <typename Mat>
double hermitian_dot(const Mat &x, const Mat &y) {
    const auto len = 2 * x.size();
    Eigen::Map<const Eigen::VectorXd> xv(reinterpret_cast<const double *>(x.data()), len);
    Eigen::Map<const Eigen::VectorXd> yv(reinterpret_cast<const double *>(y.data()), len);
    return xv.dot(yv);
}

// Evaluates the characteristic coefficients of `m + shift*I` level by level:
// the k-th power is only formed once every coefficient it is not needed for
// has been checked. p_{2a-1} = Tr(P_a P_{a-1}) and p_{2a} = Tr(P_a P_a), so
// ceil(n/2) - 1 matrix products cover all n power traces.
//
// A coefficient below minus its noise floor proves the matrix is not positive
// semidefinite; one inside [-floor, floor] leaves the sign undecided.
enum class Verdict { psd, not_psd, undecided };

// Returns not_psd as soon as some coefficient drops below minus its noise floor
// when `early_exit` is set. Coefficients and floors are written to `c_out`
// and `floor_out` when those are non-null (sized n + 1).
template <typename Mat>
Verdict newton_kernel(Mat m, double shift, bool early_exit, double *c_out, double *floor_out) {
    const int n = static_cast<int>(m.rows());
    m.diagonal().array() += shift;

    constexpr int kStack = 32;
    double p_stack[kStack + 2];
    double c_stack[kStack + 1];
    double h_stack[kStack + 1];
    std::vector<double> p_heap;
    std::vector<double> c_heap;
    std::vector<double> h_heap;
    double *p = p_stack;
    double *c = c_stack;
    double *h = h_stack;
    if (n > kStack) {
        p_heap.resize(static_cast<size_t>(n) + 2);
        c_heap.resize(static_cast<size_t>(n) + 1);
        h_heap.resize(static_cast<size_t>(n) + 1);
        p = p_heap.data();
        c = c_heap.data();
        h = h_heap.data();
    }
    const double kappa = 32.0 * n * kEps;

    p[0] = n;
    c[0] = 1.0;
    h[0] = 1.0;
    bool ok = true;
    bool undecided = false;

    // Magnitude bound for |p_i|: exact for even i, Cauchy-Schwarz for odd i.
    auto magnitude = [&](int i) {
        return (i % 2 == 0) ? p[i] : std::sqrt(std::max(p[i - 1] * p[i + 1], p[i] * p[i]));
    };
    // Extends c and h to index k using p_1..p_k (p_{k+1} must exist for odd k).
    auto advance = [&](int k) {
        double sum = 0.0;
        double mag = 0.0;
        for (int i = 1; i <= k; ++i) {
            const double term = p[i] * c[k - i];
            sum += (i % 2 == 1) ? term : -term;
            mag += magnitude(i) * h[k - i];
        }
        c[k] = sum / k;
        h[k] = mag / k;
        if (c_out != nullptr) {
            c_out[k] = c[k];
            floor_out[k] = kappa * h[k];
        }
        if (c[k] < -kappa * h[k]) {
            ok = false;
        } else if (c[k] <= kappa * h[k]) {
            undecided = true;
        }
    };

    if (c_out != nullptr) {
        c_out[0] = 1.0;
        floor_out[0] = 0.0;
    }
    p[1] = m.trace().real();
    p[2] = m.squaredNorm();
    advance(1);
    if (n >= 2) {
        advance(2);
    }
    if (early_exit && !ok) {
        return Verdict::not_psd;
    }

    Mat prev = m;
    Mat cur = m * m;
    for (int level = 2; 2 * level - 1 <= n; ++level) {
        if (level > 2) {
            Mat next = cur * m;
            prev = std::move(cur);
            cur = std::move(next);
        }
        p[2 * level - 1] = hermitian_dot(cur, prev);
        p[2 * level] = cur.squaredNorm();
        advance(2 * level - 1);
        if (2 * level <= n) {
            advance(2 * level);
        }
        if (early_exit && !ok) {
            return Verdict::not_psd;
        }
    }
    if (!ok) {
        return Verdict::not_psd;
    }
    return undecided ? Verdict::undecided : Verdict::psd;
}

// Coefficients within rounding noise of zero (several eigenvalues of the
// shifted matrix within ~sqrt(eps) of zero) cannot be signed reliably; the
// eigenvalue test settles those rare cases.
bool resolve(Verdict v, const ComplexMatrix &a, double tol) {
    if (v != Verdict::undecided) {
        return v == Verdict::psd;
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a, Eigen::EigenvaluesOnly);
    return solver.info() == Eigen::Success && solver.eigenvalues().minCoeff() >= -tol;
}

template <int N>
bool fixed_kernel(const ComplexMatrix &a, double tol) {
    using Mat = Eigen::Matrix<Complex, N, N>;
    return resolve(newton_kernel<Mat>(Mat(Eigen::Map<const Mat>(a.data())), tol, true, nullptr, nullptr), a, tol);
}

void require_unit_trace(const HermitianMatrix &a, const char *where) {
    const double tr = a.trace();
    if (std::abs(tr - 1.0) > kInputTolerance) {
        throw InvalidInput(std::string(where) + ": matrix must have unit trace, got " + std::to_string(tr));
    }
}

}  // namespace

std::vector<double> power_traces(const HermitianMatrix &a, int k_max) {
    if (k_max < 1) {
        throw InvalidInput("power_traces: k_max must be >= 1");
    }
    std::vector<double> p;
    p.reserve(static_cast<size_t>(k_max));
    ComplexMatrix power = a.matrix();
    for (int k = 1; k <= k_max; ++k) {
        if (k > 1) {
            power = (power * a.matrix()).eval();
        }
        p.push_back(power.trace().real());
    }
    return p;
}

NewtonCoefficients newton_coefficients(std::span<const double> p, int n) {
    if (n < 1) {
        throw InvalidDimension("newton_coefficients: n must be >= 1");
    }
    if (p.size() < static_cast<size_t>(n)) {
        throw InvalidInput(
            "newton_coefficients: need " + std::to_string(n) + " power traces, got " + std::to_string(p.size()));
    }
    if (std::abs(p[0] - 1.0) > kInputTolerance) {
        throw InvalidInput("newton_coefficients: unit trace required, p_1 = " + std::to_string(p[0]));
    }
    NewtonCoefficients out;
    out.n = n;
    out.c.assign(static_cast<size_t>(n) + 1, 0.0);
    out.c[0] = 1.0;
    // Unit-trace specialization: p_1 is taken as exactly 1, so c_1 = 1 and
    // c_2 = 1/2 - p_2/2 as in the closed forms.
    auto power = [&](int i) { return i == 1 ? 1.0 : p[static_cast<size_t>(i - 1)]; };
    for (int k = 1; k <= n; ++k) {
        double sum = 0.0;
        for (int i = 1; i <= k; ++i) {
            const double term = power(i) * out.c[static_cast<size_t>(k - i)];
            sum += (i % 2 == 1) ? term : -term;
        }
        out.c[static_cast<size_t>(k)] = sum / k;
    }
    return out;
}

bool is_psd_newton(const HermitianMatrix &a, double tol) {
    require_unit_trace(a, "is_psd_newton");
    if (tol < 0.0) {
        throw InvalidInput("is_psd_newton: tol must be >= 0");
    }
    return detail::newton_psd(a.matrix(), tol);
}

double min_eigenvalue(const HermitianMatrix &a) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericalFailure("min_eigenvalue: eigensolver did not converge");
    }
    return solver.eigenvalues().minCoeff();
}

bool is_psd_eigen(const HermitianMatrix &a, double tol) {
    return min_eigenvalue(a) >= -tol;
}

double mehta_radius(int n) {
    if (n < 2) {
        throw InvalidDimension("mehta_radius: n must be >= 2");
    }
    return 1.0 / std::sqrt(static_cast<double>(n) * (n - 1));
}

double outer_radius(int n) {
    if (n < 2) {
        throw InvalidDimension("outer_radius: n must be >= 2");
    }
    return std::sqrt(static_cast<double>(n - 1) / n);
}

namespace detail {

bool newton_psd(const ComplexMatrix &a, double tol) {
    switch (a.rows()) {
        case 2:
            return fixed_kernel<2>(a, tol);
        case 3:
            return fixed_kernel<3>(a, tol);
        case 4:
            return fixed_kernel<4>(a, tol);
        case 6:
            return fixed_kernel<6>(a, tol);
        case 8:
            return fixed_kernel<8>(a, tol);
        case 9:
            return fixed_kernel<9>(a, tol);
        default:
            return resolve(newton_kernel<ComplexMatrix>(a, tol, true, nullptr, nullptr), a, tol);
    }
}

void newton_coefficients_with_floor(const ComplexMatrix &a, std::vector<double> &c, std::vector<double> &floor) {
    const auto n = static_cast<size_t>(a.rows());
    c.assign(n + 1, 0.0);
    floor.assign(n + 1, 0.0);
    newton_kernel<ComplexMatrix>(a, 0.0, false, c.data(), floor.data());
}

}  // namespace detail

}  // namespace qvolume
