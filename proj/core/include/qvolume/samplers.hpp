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

#include <atomic>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qvolume/estimation.hpp"
#include "qvolume/operator_basis.hpp"
#include "qvolume/positivity.hpp"
#include "qvolume/predicates.hpp"
#include "qvolume/rng.hpp"

namespace qvolume {

/// Uniform point in the d-dimensional ball of radius r:
/// r * u^(1/d) * v / |v| with v standard normal and u uniform on [0, 1).
std::vector<double> muller_ball_sample(int d, double r, RngStream &rng);

/// Same as muller_ball_sample, writing into `out` (d = out.size()).
void muller_ball_sample_into(std::span<double> out, double r, RngStream &rng);

/// Ball radii in family coordinates. `inner` bounds a ball made of states
/// only, `outer` a ball containing every state of the family.
struct CoordinateRadii {
    double inner = 0.0;
    double outer = 0.0;
};

/// Hilbert-Schmidt radii of positivity.hpp converted with the family metric:
/// inner = mehta_radius(n) / max metric scale, outer = outer_radius(n) / min metric scale.
CoordinateRadii coordinate_radii(const StateFamily &family);

/// Cooperative cancellation and progress reporting for long runs.
struct RunControl {
    const std::atomic<bool> *cancel = nullptr;
    /// Called from worker threads with (completed units, total units); must be thread-safe.
    std::function<void(std::uint64_t, std::uint64_t)> progress;

    bool cancelled() const {
        return cancel != nullptr && cancel->load(std::memory_order_relaxed);
    }
};

struct MultiphaseConfig {
    std::vector<double> radii;  // ascending, coordinate units; radii.size() is the phase count m
    std::uint64_t samples_per_phase = 1000000;
    int repetitions = 20;
    std::uint64_t min_hits = 10;
    double psd_tol = kDefaultPsdTolerance;

    /// Throws InvalidConfig if m < 2, radii are not strictly ascending and
    /// positive, or any count is zero (repetitions must be >= 2).
    void validate() const;
};

/// max(2, ceil(d ln d)) phases.
int default_phase_count(int d);

/// Geometric schedule r_i = r_1 (r_m / r_1)^((i-1)/(m-1)) from the inner to
/// the outer coordinate radius. `phases` <= 0 selects default_phase_count.
MultiphaseConfig make_multiphase_config(const StateFamily &family, std::uint64_t samples_per_phase, int repetitions,
                                        int phases = 0);

/// Product estimator of vol(target states) / vol(states). Repetition k uses
/// RngStream(seed, k). Repetitions with a phase of fewer than `min_hits`
/// states are discarded; throws InsufficientStatistics if fewer than two remain.
RatioEstimate multiphase_estimate(const FamilyHandle &family, const TargetPredicate &predicate,
                                  const MultiphaseConfig &config, std::uint64_t seed, const RunControl &control = {});

/// Counters of one or more hit-and-run chains.
struct WalkDiagnostics {
    std::uint64_t steps = 0;
    std::uint64_t psd_evaluations = 0;
    std::uint64_t rejection_draws = 0;         // draws of t, accepted or not
    std::uint64_t degenerate_directions = 0;  // directions resampled because both bounds vanished

    double mean_draws_per_step() const {
        return steps == 0 ? 0.0 : static_cast<double>(rejection_draws) / static_cast<double>(steps);
    }
    WalkDiagnostics &operator+=(const WalkDiagnostics &o);
};

/// Hit-and-run walker over the states of a family. The current point is always
/// a state (positive semidefinite within `psd_tol`).
class HitAndRunChain {
   public:
    /// Starts at the maximally mixed state.
    HitAndRunChain(FamilyHandle family, RngStream rng, double psd_tol = kDefaultPsdTolerance);
    /// Starts at `start`; throws InvalidInput if it is not a state.
    HitAndRunChain(FamilyHandle family, RngStream rng, std::vector<double> start,
                   double psd_tol = kDefaultPsdTolerance);

    /// One hit-and-run move. Throws DegenerateDirection if 1000 consecutive
    /// directions have no interior point on either side.
    void step();

    const StateFamily &family() const {
        return *family_;
    }
    std::span<const double> coords() const {
        return coords_;
    }
    const ComplexMatrix &rho() const {
        return rho_;
    }
    std::uint64_t steps_taken() const {
        return diagnostics_.steps;
    }
    const WalkDiagnostics &diagnostics() const {
        return diagnostics_;
    }
    StateView view() const {
        return {*family_, coords_, rho_};
    }

   private:
    bool is_state_at(double t);
    double bound_along(double sign);

    FamilyHandle family_;
    RngStream rng_;
    double psd_tol_;
    double start_bound_;
    std::vector<double> coords_;
    std::vector<double> direction_;
    ComplexMatrix rho_;
    ComplexMatrix dir_matrix_;
    ComplexMatrix trial_;
    WalkDiagnostics diagnostics_;
};

struct HitAndRunConfig {
    std::uint64_t total_samples = 10000000;
    std::uint64_t block_size = 1000000;
    int chains = 1;
    std::uint64_t burn_in = 0;  // steps discarded per chain before recording
    double psd_tol = kDefaultPsdTolerance;
    std::uint64_t seed = 0;

    /// Throws InvalidConfig unless the chains together fill at least two blocks.
    void validate() const;
};

struct HitAndRunResult {
    std::vector<RatioEstimate> estimates;  // one per predicate, in input order
    /// Per-predicate block fractions, chain by chain in chain order.
    std::vector<std::vector<double>> block_fractions;
    WalkDiagnostics diagnostics;
    bool cancelled = false;  // stopped early; estimates cover the completed blocks
};

/// Runs `config.chains` independent chains (stream id = chain index, each on
/// its own thread) from the maximally mixed state, splitting total_samples
/// between them, and evaluates every predicate on every visited state.
/// Blocks never span chains; the trailing partial block of a chain is dropped.
/// Predicates are forked per chain with stream id (chain + 1) << 32 | index.
HitAndRunResult hit_and_run_ratio(const FamilyHandle &family, std::span<const TargetPredicate *const> predicates,
                                  const HitAndRunConfig &config, const RunControl &control = {});

/// Same as above for a classifier: one estimate per label. Chain c uses
/// classifier.fork(seed, c).
HitAndRunResult hit_and_run_ratio(const FamilyHandle &family, const StateClassifier &classifier,
                                  const HitAndRunConfig &config, const RunControl &control = {});
/// Single-predicate, single-chain convenience form.
RatioEstimate hit_and_run_ratio(const FamilyHandle &family, const TargetPredicate &predicate,
                                std::uint64_t total_samples, std::uint64_t block_size, std::uint64_t seed);

}  // namespace qvolume
