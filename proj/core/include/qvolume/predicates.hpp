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

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qvolume/bell_tests.hpp"
#include "qvolume/hermitian.hpp"
#include "qvolume/operator_basis.hpp"
#include "qvolume/positivity.hpp"
#include "qvolume/rng.hpp"

namespace qvolume {

/// A state handed to a target predicate: its coordinates and its matrix.
struct StateView {
    const StateFamily &family;
    std::span<const double> coords;
    const ComplexMatrix &rho;
};

/// A property of states whose volume fraction is estimated by the samplers.
///
/// Instances may hold scratch space and random streams, so each sampling
/// chain works on its own copy obtained from `fork`.
class TargetPredicate {
   public:
    virtual ~TargetPredicate() = default;

    virtual std::string name() const = 0;
    virtual bool test(const StateView &state) = 0;

    /// Independent copy for one chain. Randomized predicates reseed from
    /// (seed, stream_id); deterministic ones ignore the arguments.
    virtual std::unique_ptr<TargetPredicate> fork(std::uint64_t seed, std::uint64_t stream_id) const = 0;
};

using PredicatePtr = std::unique_ptr<TargetPredicate>;

struct PredicateOptions {
    double psd_tol = kDefaultPsdTolerance;   // positivity of the partial transpose
    double bell_tol = kDefaultBellTolerance;  // Bell-violation thresholds
    OptimizerConfig optimizer{};              // cg / cg-or-chsh
    int scan_settings = 100;                  // cg-scan / chsh-scan
};

/// Names accepted by make_predicate.
const std::vector<std::string> &predicate_names();

/// Builds one of: ppt, chsh, 12m, cg-body, cg (alias cg-opt), cg-or-chsh,
/// cg-scan, chsh-scan, true. Throws InvalidConfig for unknown names and for
/// Bell predicates on families that are not two-qubit (cg-body requires
/// bell_diagonal).
PredicatePtr make_predicate(std::string_view name, const FamilyHandle &family, const PredicateOptions &options = {});

/// Wraps a deterministic callable as a predicate.
PredicatePtr make_function_predicate(std::string name, std::function<bool(const StateView &)> fn);

/// Several properties evaluated together on each state, for properties that
/// share work (e.g. one scan of random settings answering many m at once).
class StateClassifier {
   public:
    virtual ~StateClassifier() = default;
    /// One label per output flag.
    virtual std::vector<std::string> labels() const = 0;
    /// Writes one flag per label into `out` (out.size() == labels().size()).
    virtual void classify(const StateView &state, std::span<bool> out) = 0;
    /// Independent copy for chain `chain`, reseeded from (seed, chain).
    virtual std::unique_ptr<StateClassifier> fork(std::uint64_t seed, std::uint64_t chain) const = 0;
};
using ClassifierPtr = std::unique_ptr<StateClassifier>;

/// Evaluates the predicates one after another. Chain c forks predicate k with
/// stream id (c + 1) << 32 | k.
ClassifierPtr make_predicate_classifier(std::span<const TargetPredicate *const> predicates);

/// Random-measurement scan curve on two-qubit states. For every m in `grid`
/// (ascending, >= 1) reports three flags, in this order: some of the first m
/// random CG settings is violated ("cg-scan:m"), some of the first m CHSH
/// settings ("chsh-scan:m"), either of the two ("cg-or-chsh-scan:m"). The
/// settings are drawn once per state, so each flag is monotone in m and the
/// union flag equals the OR of the other two. Chain c draws from stream
/// (c + 1) << 32. Throws InvalidConfig for non-two-qubit families or a bad grid.
ClassifierPtr make_scan_curve_classifier(const FamilyHandle &family, std::vector<int> grid,
                                         double bell_tol = kDefaultBellTolerance);

}  // namespace qvolume
