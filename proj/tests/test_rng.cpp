// Copyright 2026 The bellst Authors
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

#include "bellst/rng.hpp"

#include <cmath>
#include <set>

#include "gtest/gtest.h"

using namespace bellst;

TEST(counter_rng, deterministic_and_order_free) {
    CounterRng rng(42);
    // Same (seed, index) always gives the same word, in any query order.
    uint64_t w5 = rng.word(5);
    uint64_t w0 = rng.word(0);
    EXPECT_EQ(rng.word(5), w5);
    EXPECT_EQ(CounterRng(42).word(0), w0);
    EXPECT_NE(w0, w5);
}

TEST(counter_rng, uniform_in_unit_interval) {
    CounterRng rng(7);
    double lo = 1, hi = 0;
    for (uint64_t i = 0; i < 10000; i++) {
        double u = rng.uniform(i);
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    // Spread sanity: 10k draws should cover most of the interval.
    EXPECT_LT(lo, 0.01);
    EXPECT_GT(hi, 0.99);
}

TEST(counter_rng, derive_distinguishes_paths) {
    std::set<uint64_t> seeds;
    seeds.insert(CounterRng::derive(1, {0}));
    seeds.insert(CounterRng::derive(1, {1}));
    seeds.insert(CounterRng::derive(1, {0, 0}));
    seeds.insert(CounterRng::derive(1, {0, 1}));
    seeds.insert(CounterRng::derive(2, {0}));
    EXPECT_EQ(seeds.size(), 5u);
    EXPECT_EQ(CounterRng::derive(1, {3, 4}), CounterRng::derive(1, {3, 4}));
}

TEST(counter_rng, gaussian_moments) {
    CounterRng rng(99);
    const int n = 200000;
    double sum = 0, sum2 = 0;
    for (int i = 0; i < n; i++) {
        double z0, z1;
        gaussian_pair(rng, i, &z0, &z1);
        sum += z0 + z1;
        sum2 += z0 * z0 + z1 * z1;
    }
    double mean = sum / (2 * n);
    double var = sum2 / (2 * n) - mean * mean;
    EXPECT_NEAR(mean, 0.0, 0.01);
    EXPECT_NEAR(var, 1.0, 0.02);
}

TEST(haar_unitary, is_unitary_and_deterministic) {
    for (size_t n : {2u, 3u, 4u}) {
        ComplexMatrix u = haar_unitary(n, 1000 + n);
        ComplexMatrix gram = u.adjoint() * u;
        EXPECT_LT((gram - ComplexMatrix::identity(n)).max_abs(), 1e-12) << "n=" << n;
        ComplexMatrix again = haar_unitary(n, 1000 + n);
        EXPECT_EQ((u - again).max_abs(), 0.0);
        ComplexMatrix other = haar_unitary(n, 2000 + n);
        EXPECT_GT((u - other).max_abs(), 1e-3);
    }
}

TEST(haar_unitary, first_column_uniform_on_sphere) {
    // The first column of a Haar unitary is uniform on the complex sphere, so
    // E|u_00|^2 = 1/n. Loose statistical check.
    const size_t n = 2;
    const int trials = 4000;
    double acc = 0;
    for (int t = 0; t < trials; t++) {
        ComplexMatrix u = haar_unitary(n, 5000 + t);
        acc += std::norm(u(0, 0));
    }
    EXPECT_NEAR(acc / trials, 1.0 / n, 0.02);
}
