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

#include "qvolume/rng.hpp"

#include <memory>

namespace qvolume {

namespace {

std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

std::uint64_t splitmix64(std::uint64_t &state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

using State = std::array<std::uint64_t, 4>;

// A linear map on GF(2)^256, stored as the images of the 256 unit vectors.
struct BitMatrix {
    std::array<State, 256> columns;

    State apply(const State &v) const {
        State out{};
        for (size_t j = 0; j < 256; ++j) {
            if ((v[j / 64] >> (j % 64)) & 1U) {
                for (size_t w = 0; w < 4; ++w) {
                    out[w] ^= columns[j][w];
                }
            }
        }
        return out;
    }
};

// powers[b] advances the state by 2^b jumps.
using JumpTable = std::array<BitMatrix, 64>;

std::unique_ptr<const JumpTable> build_jump_table() {
    auto table = std::make_unique<JumpTable>();
    for (size_t j = 0; j < 256; ++j) {
        State unit{};
        unit[j / 64] = std::uint64_t{1} << (j % 64);
        (*table)[0].columns[j] = RngStream::jump_state(unit);
    }
    for (size_t b = 1; b < 64; ++b) {
        for (size_t j = 0; j < 256; ++j) {
            (*table)[b].columns[j] = (*table)[b - 1].apply((*table)[b - 1].columns[j]);
        }
    }
    return table;
}

const JumpTable &jump_table() {
    static const std::unique_ptr<const JumpTable> table = build_jump_table();
    return *table;
}

// Below this many jumps, jumping directly is cheaper than building the table.
constexpr std::uint64_t kDirectJumps = 16;

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_id_(stream_id) {
    std::uint64_t sm = seed;
    for (auto &word : s_) {
        word = splitmix64(sm);
    }
    if (stream_id < kDirectJumps) {
        for (std::uint64_t k = 0; k < stream_id; ++k) {
            jump();
        }
        return;
    }
    const JumpTable &table = jump_table();
    for (size_t b = 0; b < 64; ++b) {
        if ((stream_id >> b) & 1U) {
            s_ = table[b].apply(s_);
        }
    }
}

std::array<std::uint64_t, 4> RngStream::jump_state(std::array<std::uint64_t, 4> state) {
    RngStream g;
    g.s_ = state;
    g.jump();
    return g.s_;
}

std::uint64_t RngStream::next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

void RngStream::jump() {
    static constexpr std::uint64_t kJump[] = {
        0x180ec6d33cfd0abaULL, 0xd5a61266f0c9392cULL, 0xa9582618e03fc9aaULL, 0x39abdc4529b1661cULL};
    std::array<std::uint64_t, 4> acc{};
    for (std::uint64_t word : kJump) {
        for (int b = 0; b < 64; ++b) {
            if (word & (std::uint64_t{1} << b)) {
                for (int i = 0; i < 4; ++i) {
                    acc[static_cast<size_t>(i)] ^= s_[static_cast<size_t>(i)];
                }
            }
            next();
        }
    }
    s_ = acc;
}

void RngStream::fill_normal(std::span<double> out) {
    for (double &x : out) {
        x = normal_(*this);
    }
}

}  // namespace qvolume
