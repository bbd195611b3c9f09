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
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qvolume {

enum class Method { multiphase, hitrun };

const char *method_name(Method m);

/// Counts of one multiphase phase, summed over the valid repetitions.
struct PhaseRecord {
    double radius = 0.0;
    std::uint64_t samples = 0;      // Muller draws in the ball
    std::uint64_t states = 0;       // draws that are states
    std::uint64_t target_hits = 0;  // states satisfying the target predicate
};

/// Result of one estimation run.
struct RatioEstimate {
    double mean = 0.0;
    double sigma = 0.0;  // repetition std (multiphase) or sigma of the mean (hit-and-run)
    std::uint64_t samples = 0;
    std::uint64_t blocks_or_reps = 0;
    Method method = Method::hitrun;
    std::string predicate_name;
    std::uint64_t seed = 0;
    std::optional<std::vector<PhaseRecord>> per_phase;
};

struct MeanAndSigma {
    double mean = 0.0;
    double sigma = 0.0;
};

struct BlockStatistics {
    double mean = 0.0;
    double sigma_mean = 0.0;
    std::uint64_t n_blocks = 0;
};

/// Per-block success fractions; the trailing partial block is discarded.
std::vector<double> block_fractions(std::span<const bool> bits, std::uint64_t block_size);

/// Mean of the block fractions, sample standard deviation sigma_B of the
/// fractions and sigma_mean = sigma_B / sqrt(N_I). Throws InvalidConfig unless
/// at least two full blocks exist.
BlockStatistics block_statistics(std::span<const bool> bits, std::uint64_t block_size);

/// Same reduction starting from already computed block fractions.
BlockStatistics block_fraction_statistics(std::span<const double> fractions);

/// Arithmetic mean and sample standard deviation (divisor s - 1).
/// Throws InvalidConfig if fewer than two values are given.
MeanAndSigma repetition_statistics(std::span<const double> values);

/// Streaming block counter for one chain: feed predicate bits, collect the
/// fractions of completed blocks.
class BlockAccumulator {
   public:
    explicit BlockAccumulator(std::uint64_t block_size);

    void add(bool bit) {
        hits_ += bit ? 1 : 0;
        if (++filled_ == block_size_) {
            close_block();
        }
    }

    std::uint64_t block_size() const {
        return block_size_;
    }
    const std::vector<double> &fractions() const {
        return fractions_;
    }
    /// Hits inside completed blocks.
    std::uint64_t completed_hits() const {
        return completed_hits_;
    }

   private:
    void close_block();

    std::uint64_t block_size_;
    std::uint64_t filled_ = 0;
    std::uint64_t hits_ = 0;
    std::uint64_t completed_hits_ = 0;
    std::vector<double> fractions_;
};

}  // namespace qvolume
