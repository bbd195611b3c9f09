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
#include <cstdint>
#include <limits>
#include <random>
#include <span>

namespace qvolume {

/// xoshiro256++ generator seeded through splitmix64. Stream k starts k jumps
/// (2^128 steps each) after the seed's base state, so streams never overlap.
/// Any 64-bit stream id is reached in constant time: the jump is linear over
/// GF(2), and its powers 2^b are tabulated once per process.
///
/// Satisfies UniformRandomBitGenerator.
class RngStream {
   public:
    using result_type = std::uint64_t;

    explicit RngStream(std::uint64_t seed = 0, std::uint64_t stream_id = 0);

    static constexpr result_type min() {
        return 0;
    }
    static constexpr result_type max() {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() {
        return next();
    }
    std::uint64_t next();

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }
    /// Standard normal variate.
    double normal() {
        return normal_(*this);
    }
    /// Fills `out` with independent standard normal variates.
    void fill_normal(std::span<double> out);

    std::uint64_t seed() const {
        return seed_;
    }
    std::uint64_t stream_id() const {
        return stream_id_;
    }

    /// Advances the state by 2^128 steps.
    void jump();
    /// The generator state 2^128 steps after `state`.
    static std::array<std::uint64_t, 4> jump_state(std::array<std::uint64_t, 4> state);

   private:

    std::array<std::uint64_t, 4> s_{};
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::normal_distribution<double> normal_;
};

}  // namespace qvolume
