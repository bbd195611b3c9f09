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

#include "qvolume/estimation.hpp"

#include <cmath>
#include <string>

#include "qvolume/errors.hpp"

namespace qvolume {

const char *method_name(Method m) {
    return m == Method::multiphase ? "multiphase" : "hitrun";
}

std::vector<double> block_fractions(std::span<const bool> bits, std::uint64_t block_size) {
    if (block_size == 0) {
        throw InvalidConfig("block_size must be positive");
    }
    BlockAccumulator acc(block_size);
    for (bool b : bits) {
        acc.add(b);
    }
    return acc.fractions();
}

BlockStatistics block_statistics(std::span<const bool> bits, std::uint64_t block_size) {
    if (block_size == 0 || bits.size() / block_size < 2) {
        throw InvalidConfig(
            "block statistics need at least two full blocks: " + std::to_string(bits.size()) + " bits, block size " +
            std::to_string(block_size));
    }
    auto fractions = block_fractions(bits, block_size);
    return block_fraction_statistics(fractions);
}

BlockStatistics block_fraction_statistics(std::span<const double> fractions) {
    if (fractions.size() < 2) {
        throw InvalidConfig("block statistics need at least two full blocks, got " + std::to_string(fractions.size()));
    }
    MeanAndSigma ms = repetition_statistics(fractions);
    BlockStatistics out;
    out.mean = ms.mean;
    out.n_blocks = fractions.size();
    out.sigma_mean = ms.sigma / std::sqrt(static_cast<double>(fractions.size()));
    return out;
}

MeanAndSigma repetition_statistics(std::span<const double> values) {
    if (values.size() < 2) {
        throw InvalidConfig("repetition statistics need at least two values, got " + std::to_string(values.size()));
    }
    const double s = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    const double mean = sum / s;
    double sq = 0.0;
    for (double v : values) {
        sq += (v - mean) * (v - mean);
    }
    return {mean, std::sqrt(sq / (s - 1.0))};
}

BlockAccumulator::BlockAccumulator(std::uint64_t block_size) : block_size_(block_size) {
    if (block_size == 0) {
        throw InvalidConfig("block_size must be positive");
    }
}

void BlockAccumulator::close_block() {
    fractions_.push_back(static_cast<double>(hits_) / static_cast<double>(block_size_));
    completed_hits_ += hits_;
    hits_ = 0;
    filled_ = 0;
}

}  // namespace qvolume
