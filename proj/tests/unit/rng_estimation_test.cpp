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

#include <cmath>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "qvolume/errors.hpp"
#include "qvolume/estimation.hpp"
#include "qvolume/rng.hpp"

using namespace qvolume;

TEST(RngStream, ReproducibleAndDistinctStreams) {
    RngStream a(42, 3), b(42, 3), c(42, 4), d(43, 3);
    std::set<std::uint64_t> firsts;
    for (int i = 0; i < 1000; ++i) {
        const auto x = a.next();
        EXPECT_EQ(x, b.next());
        firsts.insert(x);
    }
    EXPECT_EQ(firsts.size(), 1000u);
    EXPECT_NE(RngStream(42, 3).next(), c.next());
    EXPECT_NE(RngStream(42, 3).next(), d.next());
}

TEST(RngStream, TabulatedJumpsMatchSequentialJumps) {
    RngStream direct(9, 0);
    for (int k = 0; k < 37; ++k) {
        direct.jump();
    }
    RngStream tabulated(9, 37);
    for (int i = 0; i < 8; ++i) {
        EXPECT_EQ(direct.next(), tabulated.next());
    }
    const std::uint64_t far = std::uint64_t{1} << 32;
    RngStream stepped(9, far);
    stepped.jump();
    RngStream composed(9, far | 1U);
    for (int i = 0; i < 8; ++i) {
        EXPECT_EQ(stepped.next(), composed.next());
    }
}

TEST(RngStream, ReferenceOutputOfXoshiro) {
    // Seed state produced by splitmix64 from 0, first outputs of xoshiro256++.
    std::uint64_t sm = 0;
    auto splitmix = [&sm] {
        std::uint64_t z = (sm += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    std::uint64_t s[4] = {splitmix(), splitmix(), splitmix(), splitmix()};
    auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
    RngStream rng(0, 0);
    for (int i = 0; i < 100; ++i) {
        const std::uint64_t expected = rotl(s[0] + s[3], 23) + s[0];
        const std::uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        EXPECT_EQ(rng.next(), expected);
    }
}

TEST(RngStream, UniformAndNormalMoments) {
    RngStream rng(1, 0);
    const int n = 200000;
    double su = 0.0, sn = 0.0, sn2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        su += u;
        const double z = rng.normal();
        sn += z;
        sn2 += z * z;
    }
    EXPECT_NEAR(su / n, 0.5, 0.003);
    EXPECT_NEAR(sn / n, 0.0, 0.01);
    EXPECT_NEAR(sn2 / n, 1.0, 0.01);
}

TEST(RngStream, StreamsAreUncorrelated) {
    RngStream a(5, 0), b(5, 1);
    const int n = 100000;
    double sab = 0.0;
    for (int i = 0; i < n; ++i) {
        sab += (a.uniform() - 0.5) * (b.uniform() - 0.5);
    }
    // Var of the product is 1/144, so the mean has sigma 1/(12 sqrt(n)).
    EXPECT_LT(std::abs(sab / n), 5.0 / (12.0 * std::sqrt(n)));
}

TEST(BlockStatistics, AllTrue) {
    std::unique_ptr<bool[]> arr(new bool[1000]);
    for (int i = 0; i < 1000; ++i) arr[i] = true;
    auto s = block_statistics(std::span<const bool>(arr.get(), 1000), 100);
    EXPECT_EQ(s.mean, 1.0);
    EXPECT_EQ(s.sigma_mean, 0.0);
    EXPECT_EQ(s.n_blocks, 10u);
}

TEST(BlockStatistics, AlternatingBitsHaveZeroSpread) {
    const size_t n = 100000;
    std::unique_ptr<bool[]> arr(new bool[n]);
    for (size_t i = 0; i < n; ++i) arr[i] = i % 2 == 0;
    auto s = block_statistics(std::span<const bool>(arr.get(), n), 10000);
    EXPECT_EQ(s.mean, 0.5);
    EXPECT_EQ(s.sigma_mean, 0.0);
}

TEST(BlockStatistics, FairCoinSigma) {
    const size_t n = 1000000;
    std::unique_ptr<bool[]> arr(new bool[n]);
    RngStream rng(9, 0);
    for (size_t i = 0; i < n; ++i) arr[i] = (rng.next() >> 63) != 0;
    auto s = block_statistics(std::span<const bool>(arr.get(), n), 10000);
    EXPECT_EQ(s.n_blocks, 100u);
    const double expected = std::sqrt(0.25 / 10000) / std::sqrt(100.0);
    EXPECT_GT(s.sigma_mean, expected / 1.2);
    EXPECT_LT(s.sigma_mean, expected * 1.2);
}

TEST(BlockStatistics, TrailingPartialBlockDiscarded) {
    std::unique_ptr<bool[]> arr(new bool[250]);
    for (int i = 0; i < 250; ++i) arr[i] = i >= 200;
    auto s = block_statistics(std::span<const bool>(arr.get(), 250), 100);
    EXPECT_EQ(s.n_blocks, 2u);
    EXPECT_EQ(s.mean, 0.0);
}

TEST(BlockStatistics, TooFewBlocks) {
    std::unique_ptr<bool[]> arr(new bool[150]());
    EXPECT_THROW(block_statistics(std::span<const bool>(arr.get(), 150), 100), InvalidConfig);
    EXPECT_THROW(block_statistics(std::span<const bool>(arr.get(), 150), 0), InvalidConfig);
}

TEST(BlockStatistics, PermutationInvariantAndMergeable) {
    std::vector<double> f = {0.1, 0.4, 0.3, 0.2, 0.25, 0.35};
    std::vector<double> g = {0.35, 0.2, 0.1, 0.25, 0.4, 0.3};
    auto a = block_fraction_statistics(f);
    auto b = block_fraction_statistics(g);
    EXPECT_NEAR(a.mean, b.mean, 1e-15);
    EXPECT_NEAR(a.sigma_mean, b.sigma_mean, 1e-15);
    std::vector<double> f1(f.begin(), f.begin() + 3), f2(f.begin() + 3, f.end());
    EXPECT_NEAR(a.mean, 0.5 * (block_fraction_statistics(f1).mean + block_fraction_statistics(f2).mean), 1e-15);
}

TEST(RepetitionStatistics, Examples) {
    auto a = repetition_statistics(std::vector<double>{0.5, 0.5, 0.5});
    EXPECT_EQ(a.mean, 0.5);
    EXPECT_EQ(a.sigma, 0.0);
    auto b = repetition_statistics(std::vector<double>{0.4, 0.6});
    EXPECT_NEAR(b.mean, 0.5, 1e-15);
    EXPECT_NEAR(b.sigma, std::sqrt(0.02), 1e-15);
    EXPECT_THROW(repetition_statistics(std::vector<double>{0.4}), InvalidConfig);
}

TEST(BlockAccumulator, StreamsBlocks) {
    BlockAccumulator acc(4);
    for (int i = 0; i < 10; ++i) acc.add(i % 4 == 0);
    ASSERT_EQ(acc.fractions().size(), 2u);
    EXPECT_EQ(acc.fractions()[0], 0.25);
    EXPECT_EQ(acc.completed_hits(), 2u);
    EXPECT_THROW(BlockAccumulator(0), InvalidConfig);
}
