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

#include "qvolume/predicates.hpp"

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qvolume/errors.hpp"
#include "qvolume/partial_transpose.hpp"
#include "qvolume/samplers.hpp"

using namespace qvolume;

namespace {

bool evaluate(TargetPredicate &p, const FamilyHandle &f, std::vector<double> coords) {
    ComplexMatrix rho;
    f->assemble(coords, rho);
    return p.test({*f, coords, rho});
}

}  // namespace

TEST(Predicates, Factory) {
    auto bell = make_family(FamilyId::bell_diagonal);
    for (const auto &name : predicate_names()) {
        auto p = make_predicate(name, bell);
        EXPECT_EQ(p->name(), name);
    }
    EXPECT_THROW(make_predicate("nonsense", bell), InvalidConfig);
    EXPECT_THROW(make_predicate("chsh", make_family(FamilyId::qbqt_ii)), InvalidConfig);
    EXPECT_THROW(make_predicate("cg-body", make_family(FamilyId::two_qubit)), InvalidConfig);
    EXPECT_NO_THROW(make_predicate("ppt", make_family(FamilyId::qutrit_qutrit)));
    PredicateOptions bad;
    bad.scan_settings = 0;
    EXPECT_THROW(make_predicate("cg-scan", bell, bad), InvalidConfig);
}

TEST(Predicates, BellStateAndOrigin) {
    auto bell = make_family(FamilyId::bell_diagonal);
    for (const char *name : {"chsh", "12m", "cg-body", "cg", "cg-or-chsh"}) {
        auto p = make_predicate(name, bell);
        EXPECT_TRUE(evaluate(*p, bell, {0.45, -0.45, 0.45})) << name;
        EXPECT_FALSE(evaluate(*p, bell, {0.0, 0.0, 0.0})) << name;
    }
    auto ppt = make_predicate("ppt", bell);
    EXPECT_FALSE(evaluate(*ppt, bell, {0.5, -0.5, 0.5}));
    EXPECT_TRUE(evaluate(*ppt, bell, {0.0, 0.0, 0.0}));
    auto always = make_predicate("true", bell);
    EXPECT_TRUE(evaluate(*always, bell, {0.5, -0.5, 0.5}));
}

TEST(Predicates, PptMatchesMatrixPathOnEveryFamily) {
    RngStream rng(1, 0);
    for (FamilyId id : kAllFamilies) {
        auto f = make_family(id);
        auto p = make_predicate("ppt", f);
        HitAndRunChain chain(f, RngStream(1, static_cast<std::uint64_t>(id)));
        for (int i = 0; i < 300; ++i) {
            chain.step();
            ComplexMatrix pt = qvolume::testing::transpose_first(chain.rho(), f->n_a(), f->n_b());
            const double lmin = qvolume::testing::min_eig(pt);
            if (std::abs(lmin) < 1e-8) continue;
            EXPECT_EQ(p->test(chain.view()), lmin >= 0.0) << f->name();
        }
    }
}

TEST(Predicates, ForkedRandomizedPredicatesAreReproducible) {
    auto f = make_family(FamilyId::two_qubit);
    PredicateOptions opt;
    opt.scan_settings = 5;
    auto base = make_predicate("cg-scan", f, opt);
    auto a = base->fork(3, 7);
    auto b = base->fork(3, 7);
    HitAndRunChain chain(f, RngStream(2, 0));
    for (int i = 0; i < 2000; ++i) {
        chain.step();
        EXPECT_EQ(a->test(chain.view()), b->test(chain.view()));
    }
}

TEST(Predicates, FunctionPredicate) {
    auto f = make_family(FamilyId::bell_diagonal);
    auto p = make_function_predicate("first-positive", [](const StateView &s) { return s.coords[0] > 0.0; });
    EXPECT_TRUE(evaluate(*p, f, {0.1, 0.0, 0.0}));
    EXPECT_FALSE(p->fork(0, 0)->test({*f, std::vector<double>{-0.1, 0.0, 0.0}, ComplexMatrix::Identity(4, 4)}));
}
