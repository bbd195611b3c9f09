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

// Microbenchmarks of the hot paths: the coefficient-based positivity test
// against a full eigensolve, the partial-transpose PPT test, one hit-and-run
// step per family, and the Bell-test predicates on two-qubit states.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "qvolume/bell_tests.hpp"
#include "qvolume/operator_basis.hpp"
#include "qvolume/partial_transpose.hpp"
#include "qvolume/positivity.hpp"
#include "qvolume/samplers.hpp"

namespace {

using namespace qvolume;

// Random unit-trace Hermitian matrices near the state space: half are states.
std::vector<HermitianMatrix> test_matrices(int n, int count) {
    std::mt19937_64 gen(42);
    std::normal_distribution<double> normal;
    std::vector<HermitianMatrix> out;
    for (int t = 0; t < count; ++t) {
        ComplexMatrix g(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                g(i, j) = Complex(normal(gen), normal(gen));
            }
        }
        ComplexMatrix h = g * g.adjoint();
        h /= h.trace().real();
        h.diagonal().array() -= (t % 2 == 0 ? 0.0 : 0.3 / n);
        h.diagonal().array() += (1.0 - h.trace().real()) / n;
        out.push_back(HermitianMatrix::unchecked(h));
    }
    return out;
}

void BM_PsdNewton(benchmark::State &state) {
    const auto matrices = test_matrices(static_cast<int>(state.range(0)), 256);
    size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(is_psd_newton(matrices[i++ % matrices.size()]));
    }
}
BENCHMARK(BM_PsdNewton)->Arg(4)->Arg(6)->Arg(8)->Arg(9)->Arg(16);

void BM_PsdEigen(benchmark::State &state) {
    const auto matrices = test_matrices(static_cast<int>(state.range(0)), 256);
    size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(is_psd_eigen(matrices[i++ % matrices.size()]));
    }
}
BENCHMARK(BM_PsdEigen)->Arg(4)->Arg(6)->Arg(8)->Arg(9)->Arg(16);

void BM_Ppt(benchmark::State &state) {
    const int na = static_cast<int>(state.range(0));
    const int nb = static_cast<int>(state.range(1));
    const auto matrices = test_matrices(na * nb, 256);
    size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(is_ppt(matrices[i++ % matrices.size()], na, nb));
    }
}
BENCHMARK(BM_Ppt)->Args({2, 2})->Args({2, 3})->Args({2, 4})->Args({3, 3});

void BM_HitAndRunStep(benchmark::State &state) {
    const auto id = static_cast<FamilyId>(state.range(0));
    HitAndRunChain chain(make_family(id), RngStream(7, 0));
    for (auto _ : state) {
        chain.step();
        benchmark::DoNotOptimize(chain.coords().data());
    }
    state.SetLabel(std::string(family_name(id)));
    state.counters["psd_tests_per_step"] =
        static_cast<double>(chain.diagnostics().psd_evaluations) / static_cast<double>(chain.steps_taken());
}
BENCHMARK(BM_HitAndRunStep)->DenseRange(0, static_cast<int>(kAllFamilies.size()) - 1);

std::vector<TwoQubitBloch> two_qubit_states(int count) {
    FamilyHandle family = make_family(FamilyId::two_qubit);
    HitAndRunChain chain(family, RngStream(11, 0));
    BlochMap bloch(*family);
    std::vector<TwoQubitBloch> out;
    for (int t = 0; t < count; ++t) {
        chain.step();
        out.push_back(bloch(chain.coords()));
    }
    return out;
}

void BM_Chsh(benchmark::State &state) {
    const auto states = two_qubit_states(256);
    size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(violates_chsh(states[i++ % states.size()]));
    }
}
BENCHMARK(BM_Chsh);

void BM_CgOptimized(benchmark::State &state) {
    const auto states = two_qubit_states(256);
    OptimizerConfig config;
    config.use_lower_bound = state.range(0) != 0;
    RngStream rng(5, 0);
    size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(violates_cg_optimized(states[i++ % states.size()], config, rng));
    }
    state.SetLabel(config.use_lower_bound ? "with lower-bound prune" : "full search");
}
BENCHMARK(BM_CgOptimized)->Arg(1)->Arg(0);

}  // namespace

BENCHMARK_MAIN();
