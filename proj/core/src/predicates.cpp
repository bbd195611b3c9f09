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

#include <algorithm>
#include <vector>

#include "qvolume/errors.hpp"
#include "qvolume/partial_transpose.hpp"

namespace qvolume {

namespace {

class PptPredicate final : public TargetPredicate {
   public:
    explicit PptPredicate(double tol) : tol_(tol) {
    }
    std::string name() const override {
        return "ppt";
    }
    bool test(const StateView &s) override {
        const auto &signs = s.family.transpose_signs();
        if (!signs.empty()) {
            flipped_.assign(s.coords.begin(), s.coords.end());
            for (size_t i = 0; i < flipped_.size(); ++i) {
                flipped_[i] *= signs[i];
            }
            s.family.assemble(flipped_, scratch_);
        } else {
            detail::partial_transpose_into(s.rho, s.family.n_a(), s.family.n_b(), scratch_);
        }
        return detail::newton_psd(scratch_, tol_);
    }
    PredicatePtr fork(std::uint64_t, std::uint64_t) const override {
        return std::make_unique<PptPredicate>(tol_);
    }

   private:
    double tol_;
    std::vector<double> flipped_;
    ComplexMatrix scratch_;
};

enum class BellKind { chsh, twelve, cg_body, cg_opt, cg_or_chsh, cg_scan, chsh_scan };

class BellPredicate final : public TargetPredicate {
   public:
    BellPredicate(BellKind kind, std::string name, std::shared_ptr<const BlochMap> map, PredicateOptions options,
                  std::uint64_t seed, std::uint64_t stream_id)
        : kind_(kind), name_(std::move(name)), map_(std::move(map)), options_(options), rng_(seed, stream_id) {
    }
    std::string name() const override {
        return name_;
    }
    bool test(const StateView &s) override {
        const double tol = options_.bell_tol;
        if (kind_ == BellKind::cg_body) {
            return violates_cg_bell_diagonal({s.coords[0], s.coords[1], s.coords[2]}, tol);
        }
        const TwoQubitBloch b = (*map_)(s.coords);
        switch (kind_) {
            case BellKind::chsh:
                return violates_chsh(b, tol);
            case BellKind::twelve:
                return violates_12m(b, tol);
            case BellKind::cg_opt:
                return violates_cg_optimized(b, options_.optimizer, rng_, tol);
            case BellKind::cg_or_chsh: {
                // Always consume the optimizer's draw so the stream does not depend on the CHSH outcome.
                const bool cg = violates_cg_optimized(b, options_.optimizer, rng_, tol);
                return cg || violates_chsh(b, tol);
            }
            case BellKind::cg_scan:
                return random_measurement_scan(b, options_.scan_settings, rng_, tol).cg_violated;
            case BellKind::chsh_scan:
                return random_measurement_scan(b, options_.scan_settings, rng_, tol).chsh_violated;
            case BellKind::cg_body:
                break;
        }
        return false;
    }
    PredicatePtr fork(std::uint64_t seed, std::uint64_t stream_id) const override {
        return std::make_unique<BellPredicate>(kind_, name_, map_, options_, seed, stream_id);
    }

   private:
    BellKind kind_;
    std::string name_;
    std::shared_ptr<const BlochMap> map_;
    PredicateOptions options_;
    RngStream rng_;
};

class FunctionPredicate final : public TargetPredicate {
   public:
    FunctionPredicate(std::string name, std::function<bool(const StateView &)> fn)
        : name_(std::move(name)), fn_(std::move(fn)) {
    }
    std::string name() const override {
        return name_;
    }
    bool test(const StateView &s) override {
        return fn_(s);
    }
    PredicatePtr fork(std::uint64_t, std::uint64_t) const override {
        return std::make_unique<FunctionPredicate>(name_, fn_);
    }

   private:
    std::string name_;
    std::function<bool(const StateView &)> fn_;
};

class PredicateListClassifier final : public StateClassifier {
   public:
    explicit PredicateListClassifier(std::vector<PredicatePtr> preds) : preds_(std::move(preds)) {
    }
    std::vector<std::string> labels() const override {
        std::vector<std::string> out;
        for (const auto &p : preds_) {
            out.push_back(p->name());
        }
        return out;
    }
    void classify(const StateView &s, std::span<bool> out) override {
        for (size_t k = 0; k < preds_.size(); ++k) {
            out[k] = preds_[k]->test(s);
        }
    }
    ClassifierPtr fork(std::uint64_t seed, std::uint64_t chain) const override {
        std::vector<PredicatePtr> forked;
        for (size_t k = 0; k < preds_.size(); ++k) {
            forked.push_back(preds_[k]->fork(seed, ((chain + 1) << 32) | k));
        }
        return std::make_unique<PredicateListClassifier>(std::move(forked));
    }

   private:
    std::vector<PredicatePtr> preds_;
};

class ScanCurveClassifier final : public StateClassifier {
   public:
    ScanCurveClassifier(std::shared_ptr<const BlochMap> map, std::vector<int> grid, double tol, std::uint64_t seed,
                        std::uint64_t stream_id)
        : map_(std::move(map)), grid_(std::move(grid)), tol_(tol), rng_(seed, stream_id) {
    }
    std::vector<std::string> labels() const override {
        std::vector<std::string> out;
        for (int m : grid_) {
            const std::string suffix = ":" + std::to_string(m);
            out.push_back("cg-scan" + suffix);
            out.push_back("chsh-scan" + suffix);
            out.push_back("cg-or-chsh-scan" + suffix);
        }
        return out;
    }
    void classify(const StateView &s, std::span<bool> out) override {
        const FirstViolation first = first_violation_indices((*map_)(s.coords), grid_.back(), rng_, tol_);
        for (size_t g = 0; g < grid_.size(); ++g) {
            const bool cg = first.cg <= grid_[g];
            const bool chsh = first.chsh <= grid_[g];
            out[3 * g] = cg;
            out[3 * g + 1] = chsh;
            out[3 * g + 2] = cg || chsh;
        }
    }
    ClassifierPtr fork(std::uint64_t seed, std::uint64_t chain) const override {
        return std::make_unique<ScanCurveClassifier>(map_, grid_, tol_, seed, (chain + 1) << 32);
    }

   private:
    std::shared_ptr<const BlochMap> map_;
    std::vector<int> grid_;
    double tol_;
    RngStream rng_;
};

}  // namespace

ClassifierPtr make_predicate_classifier(std::span<const TargetPredicate *const> predicates) {
    if (predicates.empty()) {
        throw InvalidConfig("at least one predicate is required");
    }
    std::vector<PredicatePtr> copies;
    for (size_t k = 0; k < predicates.size(); ++k) {
        copies.push_back(predicates[k]->fork(0, k));
    }
    return std::make_unique<PredicateListClassifier>(std::move(copies));
}

ClassifierPtr make_scan_curve_classifier(const FamilyHandle &family, std::vector<int> grid, double bell_tol) {
    if (family->n_a() != 2 || family->n_b() != 2) {
        throw InvalidConfig("scan curve needs a two-qubit family, got " + std::string(family->name()));
    }
    if (grid.empty() || grid.front() < 1 || !std::is_sorted(grid.begin(), grid.end()) ||
        std::adjacent_find(grid.begin(), grid.end()) != grid.end()) {
        throw InvalidConfig("scan curve grid must be strictly ascending and start at >= 1");
    }
    return std::make_unique<ScanCurveClassifier>(std::make_shared<const BlochMap>(*family), std::move(grid), bell_tol,
                                                 0, 0);
}

const std::vector<std::string> &predicate_names() {
    static const std::vector<std::string> names = {"ppt",     "chsh",       "12m",     "cg-body",   "cg",
                                                   "cg-opt",  "cg-or-chsh", "cg-scan", "chsh-scan", "true"};
    return names;
}

PredicatePtr make_predicate(std::string_view name, const FamilyHandle &family, const PredicateOptions &options) {
    if (name == "ppt") {
        return std::make_unique<PptPredicate>(options.psd_tol);
    }
    if (name == "true") {
        return make_function_predicate("true", [](const StateView &) { return true; });
    }
    BellKind kind;
    if (name == "chsh") {
        kind = BellKind::chsh;
    } else if (name == "12m") {
        kind = BellKind::twelve;
    } else if (name == "cg-body") {
        kind = BellKind::cg_body;
    } else if (name == "cg" || name == "cg-opt") {
        kind = BellKind::cg_opt;
    } else if (name == "cg-or-chsh") {
        kind = BellKind::cg_or_chsh;
    } else if (name == "cg-scan") {
        kind = BellKind::cg_scan;
    } else if (name == "chsh-scan") {
        kind = BellKind::chsh_scan;
    } else {
        throw InvalidConfig("unknown predicate '" + std::string(name) + "'");
    }
    if (family->n_a() != 2 || family->n_b() != 2) {
        throw InvalidConfig(
            "predicate '" + std::string(name) + "' needs a two-qubit family, got " + std::string(family->name()));
    }
    if (kind == BellKind::cg_body && family->id() != FamilyId::bell_diagonal) {
        throw InvalidConfig("predicate 'cg-body' is only defined for bell_diagonal");
    }
    if ((kind == BellKind::cg_scan || kind == BellKind::chsh_scan) && options.scan_settings < 1) {
        throw InvalidConfig("scan_settings must be >= 1");
    }
    if ((kind == BellKind::cg_opt || kind == BellKind::cg_or_chsh) &&
        (options.optimizer.restarts < 1 || options.optimizer.max_iterations < 1)) {
        throw InvalidConfig("optimizer restarts and iterations must be >= 1");
    }
    auto map = std::make_shared<const BlochMap>(*family);
    return std::make_unique<BellPredicate>(kind, std::string(name), std::move(map), options, 0, 0);
}

PredicatePtr make_function_predicate(std::string name, std::function<bool(const StateView &)> fn) {
    return std::make_unique<FunctionPredicate>(std::move(name), std::move(fn));
}

}  // namespace qvolume
