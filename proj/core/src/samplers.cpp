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

#include "qvolume/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "qvolume/errors.hpp"

namespace qvolume {

namespace {

constexpr double kBisectionFloor = 1e-12;
constexpr int kMaxDegenerateDirections = 1000;
constexpr std::uint64_t kProgressStride = 1 << 16;

double squared_norm(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) {
        s += v * v;
    }
    return s;
}

}  // namespace

void muller_ball_sample_into(std::span<double> out, double r, RngStream &rng) {
    const int d = static_cast<int>(out.size());
    if (d < 1) {
        throw InvalidDimension("muller_ball_sample: d must be >= 1");
    }
    if (!(r > 0.0)) {
        throw InvalidConfig("muller_ball_sample: radius must be positive");
    }
    double norm = 0.0;
    do {
        rng.fill_normal(out);
        norm = std::sqrt(squared_norm(out));
    } while (norm < 1e-300);
    const double u = rng.uniform();
    const double scale = r * std::pow(u, 1.0 / d) / norm;
    for (double &v : out) {
        v *= scale;
    }
}

std::vector<double> muller_ball_sample(int d, double r, RngStream &rng) {
    if (d < 1) {
        throw InvalidDimension("muller_ball_sample: d must be >= 1");
    }
    std::vector<double> out(static_cast<size_t>(d));
    muller_ball_sample_into(out, r, rng);
    return out;
}

CoordinateRadii coordinate_radii(const StateFamily &family) {
    return {mehta_radius(family.n()) / family.max_metric_scale(), outer_radius(family.n()) / family.min_metric_scale()};
}

// ---------------------------------------------------------------------------
// Multiphase product estimator.

void MultiphaseConfig::validate() const {
    if (radii.size() < 2) {
        throw InvalidConfig("multiphase: at least two phases are required");
    }
    if (!(radii.front() > 0.0)) {
        throw InvalidConfig("multiphase: radii must be positive");
    }
    for (size_t i = 1; i < radii.size(); ++i) {
        if (!(radii[i] > radii[i - 1])) {
            throw InvalidConfig("multiphase: radii must be strictly ascending");
        }
    }
    if (samples_per_phase == 0) {
        throw InvalidConfig("multiphase: samples per phase must be positive");
    }
    if (repetitions < 2) {
        throw InvalidConfig("multiphase: at least two repetitions are required");
    }
    if (min_hits < 1) {
        throw InvalidConfig("multiphase: min_hits must be >= 1");
    }
}

int default_phase_count(int d) {
    const double m = std::ceil(d * std::log(static_cast<double>(d)));
    return std::max(2, static_cast<int>(m));
}

MultiphaseConfig make_multiphase_config(const StateFamily &family, std::uint64_t samples_per_phase, int repetitions,
                                        int phases) {
    const int m = phases > 0 ? phases : default_phase_count(family.d());
    if (m < 2) {
        throw InvalidConfig("multiphase: at least two phases are required");
    }
    const CoordinateRadii radii = coordinate_radii(family);
    MultiphaseConfig config;
    config.samples_per_phase = samples_per_phase;
    config.repetitions = repetitions;
    config.radii.resize(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
        config.radii[static_cast<size_t>(i)] =
            radii.inner * std::pow(radii.outer / radii.inner, static_cast<double>(i) / (m - 1));
    }
    config.radii.back() = radii.outer;
    return config;
}

RatioEstimate multiphase_estimate(const FamilyHandle &family, const TargetPredicate &predicate,
                                  const MultiphaseConfig &config, std::uint64_t seed, const RunControl &control) {
    config.validate();
    const int d = family->d();
    const size_t m = config.radii.size();
    const std::uint64_t n = config.samples_per_phase;
    const std::uint64_t total_units = static_cast<std::uint64_t>(config.repetitions) * m;

    std::vector<double> ratios;
    std::vector<PhaseRecord> per_phase(m);
    std::vector<std::vector<std::uint64_t>> states_per_rep;
    std::uint64_t drawn = 0;
    std::vector<double> x(static_cast<size_t>(d));
    ComplexMatrix rho;

    for (int rep = 0; rep < config.repetitions && !control.cancelled(); ++rep) {
        RngStream rng(seed, static_cast<std::uint64_t>(rep));
        PredicatePtr target = predicate.fork(seed, (static_cast<std::uint64_t>(rep) + 1) << 32);
        std::vector<PhaseRecord> rep_phase(m);
        std::vector<std::uint64_t> rep_states;
        double estimate = 0.0;
        bool aborted = false;
        for (size_t i = 0; i < m; ++i) {
            const double r = config.radii[i];
            const double r_prev_sq = i > 0 ? config.radii[i - 1] * config.radii[i - 1] : 0.0;
            std::uint64_t states = 0, hits = 0, states_in = 0, hits_in = 0;
            for (std::uint64_t k = 0; k < n; ++k) {
                muller_ball_sample_into(x, r, rng);
                family->assemble(x, rho);
                if (!detail::newton_psd(rho, config.psd_tol)) {
                    continue;
                }
                const bool inner = i > 0 && squared_norm(x) <= r_prev_sq;
                const bool hit = target->test({*family, x, rho});
                ++states;
                hits += hit ? 1 : 0;
                states_in += inner ? 1 : 0;
                hits_in += (inner && hit) ? 1 : 0;
            }
            drawn += n;
            rep_phase[i] = {r, n, states, hits};
            rep_states.push_back(states);
            if (control.progress) {
                control.progress(static_cast<std::uint64_t>(rep) * m + i + 1, total_units);
            }
            if (states < config.min_hits) {
                aborted = true;
                break;
            }
            const double phase_fraction = static_cast<double>(hits) / static_cast<double>(states);
            if (i == 0 || hits_in == 0 || states_in == 0) {
                estimate = phase_fraction;
            } else {
                const double inner_fraction = static_cast<double>(hits_in) / static_cast<double>(states_in);
                estimate *= phase_fraction / inner_fraction;
            }
        }
        states_per_rep.push_back(std::move(rep_states));
        if (aborted) {
            continue;
        }
        ratios.push_back(estimate);
        for (size_t i = 0; i < m; ++i) {
            per_phase[i].radius = rep_phase[i].radius;
            per_phase[i].samples += rep_phase[i].samples;
            per_phase[i].states += rep_phase[i].states;
            per_phase[i].target_hits += rep_phase[i].target_hits;
        }
    }
    if (ratios.size() < 2) {
        const std::string what = "multiphase: only " + std::to_string(ratios.size()) + " of " +
                                 std::to_string(states_per_rep.size()) + " repetitions found at least " +
                                 std::to_string(config.min_hits) + " states in every phase";
        throw InsufficientStatistics(what, std::move(states_per_rep));
    }
    const MeanAndSigma stats = repetition_statistics(ratios);
    RatioEstimate out;
    out.mean = stats.mean;
    out.sigma = stats.sigma;
    out.samples = drawn;
    out.blocks_or_reps = ratios.size();
    out.method = Method::multiphase;
    out.predicate_name = predicate.name();
    out.seed = seed;
    out.per_phase = std::move(per_phase);
    return out;
}

// ---------------------------------------------------------------------------
// Hit-and-run.

WalkDiagnostics &WalkDiagnostics::operator+=(const WalkDiagnostics &o) {
    steps += o.steps;
    psd_evaluations += o.psd_evaluations;
    rejection_draws += o.rejection_draws;
    degenerate_directions += o.degenerate_directions;
    return *this;
}

HitAndRunChain::HitAndRunChain(FamilyHandle family, RngStream rng, double psd_tol)
    : HitAndRunChain(family, std::move(rng), std::vector<double>(static_cast<size_t>(family->d()), 0.0), psd_tol) {
}

HitAndRunChain::HitAndRunChain(FamilyHandle family, RngStream rng, std::vector<double> start, double psd_tol)
    : family_(std::move(family)),
      rng_(std::move(rng)),
      psd_tol_(psd_tol),
      start_bound_(coordinate_radii(*family_).outer),
      coords_(std::move(start)),
      direction_(coords_.size()) {
    if (coords_.size() != static_cast<size_t>(family_->d())) {
        throw DimensionMismatch("HitAndRunChain: start point has wrong length");
    }
    family_->assemble(coords_, rho_);
    if (!detail::newton_psd(rho_, psd_tol_)) {
        throw InvalidInput("HitAndRunChain: start point is not a state");
    }
}

bool HitAndRunChain::is_state_at(double t) {
    trial_ = rho_ + t * dir_matrix_;
    ++diagnostics_.psd_evaluations;
    return detail::newton_psd(trial_, psd_tol_);
}

double HitAndRunChain::bound_along(double sign) {
    double b = start_bound_;
    if (is_state_at(sign * b)) {
        return 2.0 * b;
    }
    for (;;) {
        const double previous = b;
        b *= 0.5;
        if (b < kBisectionFloor) {
            return 0.0;
        }
        if (is_state_at(sign * b)) {
            return previous;
        }
    }
}

void HitAndRunChain::step() {
    double plus = 0.0;
    double minus = 0.0;
    for (int attempt = 0;; ++attempt) {
        if (attempt == kMaxDegenerateDirections) {
            throw DegenerateDirection("hit-and-run: no direction with interior points after " +
                                      std::to_string(kMaxDegenerateDirections) + " attempts");
        }
        double norm = 0.0;
        do {
            rng_.fill_normal(direction_);
            norm = std::sqrt(squared_norm(direction_));
        } while (norm < 1e-300);
        for (double &v : direction_) {
            v /= norm;
        }
        family_->assemble_direction(direction_, dir_matrix_);
        plus = bound_along(1.0);
        minus = bound_along(-1.0);
        if (plus > 0.0 || minus > 0.0) {
            break;
        }
        ++diagnostics_.degenerate_directions;
    }
    // Rejection sampling on [-minus, plus]; at least half of it lies inside the set.
    double t = 0.0;
    for (;;) {
        ++diagnostics_.rejection_draws;
        t = -minus + (plus + minus) * rng_.uniform();
        if (is_state_at(t)) {
            break;
        }
    }
    for (size_t i = 0; i < coords_.size(); ++i) {
        coords_[i] += t * direction_[i];
    }
    family_->assemble(coords_, rho_);
    ++diagnostics_.steps;
}

void HitAndRunConfig::validate() const {
    if (chains < 1) {
        throw InvalidConfig("hit-and-run: chains must be >= 1");
    }
    if (block_size == 0) {
        throw InvalidConfig("hit-and-run: block size must be positive");
    }
    if (total_samples < 2 * block_size) {
        throw InvalidConfig("hit-and-run: total samples (" + std::to_string(total_samples) +
                            ") must be at least twice the block size (" + std::to_string(block_size) + ")");
    }
    const std::uint64_t c = static_cast<std::uint64_t>(chains);
    std::uint64_t blocks = 0;
    for (std::uint64_t k = 0; k < c; ++k) {
        blocks += (total_samples / c + (k < total_samples % c ? 1 : 0)) / block_size;
    }
    if (blocks < 2) {
        throw InvalidConfig("hit-and-run: the chains fill only " + std::to_string(blocks) +
                            " full blocks; at least two are required (use fewer chains or a smaller block size)");
    }
}

HitAndRunResult hit_and_run_ratio(const FamilyHandle &family, std::span<const TargetPredicate *const> predicates,
                                  const HitAndRunConfig &config, const RunControl &control) {
    config.validate();
    if (predicates.empty()) {
        throw InvalidConfig("hit-and-run: at least one predicate is required");
    }
    return hit_and_run_ratio(family, *make_predicate_classifier(predicates), config, control);
}

HitAndRunResult hit_and_run_ratio(const FamilyHandle &family, const StateClassifier &classifier,
                                  const HitAndRunConfig &config, const RunControl &control) {
    config.validate();
    const std::vector<std::string> labels = classifier.labels();
    const size_t n_chains = static_cast<size_t>(config.chains);
    const size_t n_preds = labels.size();

    struct ChainOutput {
        std::vector<BlockAccumulator> accumulators;
        WalkDiagnostics diagnostics;
        std::uint64_t recorded = 0;
        bool cancelled = false;
        std::exception_ptr error;
    };
    std::vector<ChainOutput> outputs(n_chains);
    std::atomic<std::uint64_t> done{0};

    auto run_chain = [&](size_t c) {
        ChainOutput &out = outputs[c];
        try {
            const std::uint64_t share =
                config.total_samples / n_chains + (c < config.total_samples % n_chains ? 1 : 0);
            ClassifierPtr local = classifier.fork(config.seed, c);
            std::unique_ptr<bool[]> flags(new bool[n_preds]);
            for (size_t k = 0; k < n_preds; ++k) {
                out.accumulators.emplace_back(config.block_size);
            }
            HitAndRunChain chain(family, RngStream(config.seed, c), config.psd_tol);
            for (std::uint64_t i = 0; i < config.burn_in; ++i) {
                chain.step();
            }
            std::uint64_t pending = 0;
            for (std::uint64_t i = 0; i < share; ++i) {
                chain.step();
                local->classify(chain.view(), std::span<bool>(flags.get(), n_preds));
                for (size_t k = 0; k < n_preds; ++k) {
                    out.accumulators[k].add(flags[k]);
                }
                ++out.recorded;
                if (++pending == kProgressStride) {
                    const std::uint64_t total_done = done.fetch_add(pending) + pending;
                    pending = 0;
                    if (control.progress) {
                        control.progress(total_done, config.total_samples);
                    }
                }
                if (out.recorded % config.block_size == 0 && control.cancelled()) {
                    out.cancelled = true;
                    break;
                }
            }
            done.fetch_add(pending);
            out.diagnostics = chain.diagnostics();
        } catch (...) {
            out.error = std::current_exception();
        }
    };

    if (n_chains == 1) {
        run_chain(0);
    } else {
        std::vector<std::thread> workers;
        workers.reserve(n_chains);
        for (size_t c = 0; c < n_chains; ++c) {
            workers.emplace_back(run_chain, c);
        }
        for (auto &w : workers) {
            w.join();
        }
    }

    HitAndRunResult result;
    std::uint64_t recorded = 0;
    for (const auto &out : outputs) {
        if (out.error) {
            std::rethrow_exception(out.error);
        }
        result.diagnostics += out.diagnostics;
        result.cancelled = result.cancelled || out.cancelled;
        recorded += out.recorded;
    }
    for (size_t k = 0; k < n_preds; ++k) {
        std::vector<double> fractions;
        for (const auto &out : outputs) {
            const auto &f = out.accumulators[k].fractions();
            fractions.insert(fractions.end(), f.begin(), f.end());
        }
        if (fractions.size() < 2) {
            throw InsufficientStatistics("hit-and-run: cancelled before two blocks were completed", {});
        }
        const BlockStatistics stats = block_fraction_statistics(fractions);
        RatioEstimate est;
        est.mean = stats.mean;
        est.sigma = stats.sigma_mean;
        est.samples = recorded;
        est.blocks_or_reps = stats.n_blocks;
        est.method = Method::hitrun;
        est.predicate_name = labels[k];
        est.seed = config.seed;
        result.estimates.push_back(std::move(est));
        result.block_fractions.push_back(std::move(fractions));
    }
    return result;
}

RatioEstimate hit_and_run_ratio(const FamilyHandle &family, const TargetPredicate &predicate,
                                std::uint64_t total_samples, std::uint64_t block_size, std::uint64_t seed) {
    HitAndRunConfig config;
    config.total_samples = total_samples;
    config.block_size = block_size;
    config.seed = seed;
    const TargetPredicate *preds[] = {&predicate};
    return std::move(hit_and_run_ratio(family, preds, config).estimates.front());
}

}  // namespace qvolume
