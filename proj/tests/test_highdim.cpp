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

#include "bellst/highdim.hpp"

#include <cmath>

#include "gtest/gtest.h"

#include "bellst/noise.hpp"

using namespace bellst;

namespace {

std::vector<double> normalized(std::vector<double> c) {
    double n2 = 0;
    for (double v : c) {
        n2 += v * v;
    }
    for (double &v : c) {
        v /= std::sqrt(n2);
    }
    return c;
}

CorrelationTable exact_table(const SchmidtState &s) {
    QuditSettings qs = build_qudit_settings(s);
    return born_table(s.to_density(), qs.alice, qs.bob);
}

}  // namespace

TEST(block_pairing, layouts) {
    BlockPairing p4 = BlockPairing::make(4, PairingId::primary);
    ASSERT_EQ(p4.blocks.size(), 2u);
    EXPECT_EQ(p4.blocks[0].label(), "01");
    EXPECT_EQ(p4.blocks[1].label(), "23");

    BlockPairing s4 = BlockPairing::make(4, PairingId::secondary);
    EXPECT_EQ(s4.blocks[0].label(), "12");
    EXPECT_EQ(s4.blocks[1].label(), "03");

    BlockPairing p3 = BlockPairing::make(3, PairingId::primary);
    ASSERT_EQ(p3.blocks.size(), 2u);
    EXPECT_EQ(p3.blocks[0].label(), "01");
    EXPECT_EQ(p3.blocks[1].label(), "2");
    EXPECT_TRUE(p3.blocks[1].singleton());

    BlockPairing s3 = BlockPairing::make(3, PairingId::secondary);
    EXPECT_EQ(s3.blocks[0].label(), "12");
    EXPECT_EQ(s3.blocks[1].label(), "0");

    EXPECT_THROW(BlockPairing::make(5, PairingId::primary), std::invalid_argument);
}

TEST(qudit_settings, measurement_counts_match_scenario) {
    // d = 4: Alice 3 settings x 4 outcomes = 12 projectors, Bob 4 x 4 = 16;
    // the joint table has 3 * 4 * 16 = 192 probabilities.
    SchmidtState s = SchmidtState::make(4, {0.5, 0.5, 0.5, 0.5});
    QuditSettings qs = build_qudit_settings(s);
    ASSERT_EQ(qs.alice.size(), 3u);
    ASSERT_EQ(qs.bob.size(), 4u);
    int alice_projectors = 0, bob_projectors = 0;
    for (const auto &m : qs.alice) {
        m.validate();
        alice_projectors += m.outcomes();
    }
    for (const auto &m : qs.bob) {
        m.validate();
        bob_projectors += m.outcomes();
    }
    EXPECT_EQ(alice_projectors, 12);
    EXPECT_EQ(bob_projectors, 16);
    CorrelationTable t = exact_table(s);
    EXPECT_EQ(t.probs.size(), 192u);
    t.validate();
}

TEST(qudit_settings, exact_tables_pass_no_signalling) {
    for (auto coeffs : {normalized({0.8, 0.4, 0.4, 0.2}), normalized({0.7, 0.5, 0.4, 0.32})}) {
        CorrelationTable t = exact_table(SchmidtState::make(4, coeffs));
        EXPECT_TRUE(check_no_signalling(t, 1e-12).pass);
    }
    CorrelationTable t3 = exact_table(SchmidtState::make(3, normalized({0.8, 0.5, 0.33})));
    EXPECT_TRUE(check_no_signalling(t3, 1e-12).pass);
}

TEST(block_reduce, weights_and_conditionals) {
    // (0.8, 0.4, 0.4, 0.2): primary blocks weigh 0.64+0.16 = 0.8 and
    // 0.16+0.04 = 0.2; secondary blocks 0.16+0.16 = 0.32 and 0.64+0.04 = 0.68.
    SchmidtState s = SchmidtState::make(4, {0.8, 0.4, 0.4, 0.2});
    CorrelationTable t = exact_table(s);

    BlockPairing prim = BlockPairing::make(4, PairingId::primary);
    PairingSettings ps = pairing_settings(PairingId::primary);
    BlockReduction r0 = block_reduce(t, prim.blocks[0], ps);
    BlockReduction r1 = block_reduce(t, prim.blocks[1], ps);
    EXPECT_NEAR(r0.weight, 0.8, 1e-12);
    EXPECT_NEAR(r1.weight, 0.2, 1e-12);
    EXPECT_LT(r0.weight_spread, 1e-12);
    EXPECT_FALSE(r0.empty);
    // Conditional tables are 2x2x2x2 (16 cells) and exactly normalized.
    ASSERT_EQ(r0.conditional.probs.size(), 16u);
    r0.conditional.validate();

    BlockPairing sec = BlockPairing::make(4, PairingId::secondary);
    PairingSettings ss = pairing_settings(PairingId::secondary);
    EXPECT_NEAR(block_reduce(t, sec.blocks[0], ss).weight, 0.32, 1e-12);
    EXPECT_NEAR(block_reduce(t, sec.blocks[1], ss).weight, 0.68, 1e-12);
}

TEST(block_reduce, empty_block_flagged) {
    // |00> + |11> only: the {23} block carries no mass.
    SchmidtState s = SchmidtState::make(4, normalized({1, 1, 0, 0}));
    CorrelationTable t = exact_table(s);
    Block b{2, 3};
    BlockReduction r = block_reduce(t, b, pairing_settings(PairingId::primary));
    EXPECT_TRUE(r.empty);
    EXPECT_NEAR(r.weight, 0.0, 1e-12);
}

TEST(extract_blocks, angles_match_coefficient_ratios) {
    SchmidtState s = SchmidtState::make(4, {0.8, 0.4, 0.4, 0.2});
    CorrelationTable t = exact_table(s);
    std::vector<BlockResult> prim = extract_blocks(t, 4, PairingId::primary);
    ASSERT_EQ(prim.size(), 2u);
    // tan(theta) = c1/c0 = 0.5 and c3/c2 = 0.5.
    EXPECT_NEAR(std::tan(prim[0].theta_block), 0.5, 1e-9);
    EXPECT_NEAR(std::tan(prim[1].theta_block), 0.5, 1e-9);
    EXPECT_FALSE(prim[0].flipped);
    EXPECT_FALSE(prim[0].skipped);

    std::vector<BlockResult> sec = extract_blocks(t, 4, PairingId::secondary);
    // {12}: c2/c1 = 1 (theta = pi/4); {03}: c3/c0 = 0.25.
    EXPECT_NEAR(std::tan(sec[0].theta_block), 1.0, 1e-9);
    EXPECT_NEAR(std::tan(sec[1].theta_block), 0.25, 1e-9);
}

TEST(extract_blocks, flipped_block_canonicalized) {
    // c1 > c0 inside the {01} block: extraction must relabel and report the
    // mirrored angle in (pi/4, pi/2].
    SchmidtState s = SchmidtState::make(4, normalized({0.4, 0.8, 0.3, 0.2}));
    CorrelationTable t = exact_table(s);
    std::vector<BlockResult> prim = extract_blocks(t, 4, PairingId::primary);
    EXPECT_TRUE(prim[0].flipped);
    EXPECT_GT(prim[0].theta_block, M_PI / 4);
    EXPECT_NEAR(std::tan(prim[0].theta_block), 2.0, 1e-8);
}

TEST(extract_blocks, singleton_skipped) {
    SchmidtState s = SchmidtState::make(3, normalized({0.8, 0.5, 0.33}));
    CorrelationTable t = exact_table(s);
    std::vector<BlockResult> prim = extract_blocks(t, 3, PairingId::primary);
    ASSERT_EQ(prim.size(), 2u);
    EXPECT_FALSE(prim[0].skipped);
    EXPECT_TRUE(prim[1].skipped);  // singleton {2}
    EXPECT_NEAR(prim[1].weight, 0.33 * 0.33 / (0.64 + 0.25 + 0.1089), 1e-9);
}

TEST(reconstruct, exact_d4) {
    for (auto coeffs :
         {std::vector<double>{0.5, 0.5, 0.5, 0.5}, normalized({0.8, 0.4, 0.4, 0.2}),
          normalized({0.7, 0.5, 0.4, 0.32}), normalized({0.6, 0.55, 0.45, 0.37})}) {
        SchmidtState s = SchmidtState::make(4, coeffs);
        ReconstructedState r = reconstruct_coefficients(exact_table(s), 4);
        ASSERT_EQ(r.coeffs.size(), 4u);
        for (int i = 0; i < 4; i++) {
            EXPECT_NEAR(r.coeffs[i], coeffs[i], 1e-9) << "i=" << i;
        }
        EXPECT_LT(r.consistency_residual, 1e-9);
        EXPECT_FALSE(r.any_degenerate);
        EXPECT_GT(reconstruction_fidelity(r, s), 1.0 - 1e-12);
    }
}

TEST(reconstruct, exact_d3) {
    for (auto coeffs : {normalized({0.8, 0.5, 0.33}), normalized({1, 1, 1})}) {
        SchmidtState s = SchmidtState::make(3, coeffs);
        ReconstructedState r = reconstruct_coefficients(exact_table(s), 3);
        for (int i = 0; i < 3; i++) {
            EXPECT_NEAR(r.coeffs[i], coeffs[i], 1e-9) << "i=" << i;
        }
        EXPECT_LT(r.consistency_residual, 1e-9);
    }
}

TEST(reconstruct, dominant_second_coefficient) {
    // Exercises the flip path end to end.
    SchmidtState s = SchmidtState::make(4, normalized({0.4, 0.8, 0.3, 0.2}));
    ReconstructedState r = reconstruct_coefficients(exact_table(s), 4);
    for (int i = 0; i < 4; i++) {
        EXPECT_NEAR(r.coeffs[i], s.coeffs[i], 1e-9) << "i=" << i;
    }
}

TEST(reconstruct, least_squares_matches_primary_on_exact_tables) {
    SchmidtState s = SchmidtState::make(4, normalized({0.7, 0.5, 0.4, 0.32}));
    CorrelationTable t = exact_table(s);
    ReconstructedState prim = reconstruct_coefficients(t, 4, PairingMode::primary_only);
    ReconstructedState ls = reconstruct_coefficients(t, 4, PairingMode::least_squares);
    for (int i = 0; i < 4; i++) {
        EXPECT_NEAR(ls.coeffs[i], prim.coeffs[i], 1e-8) << "i=" << i;
    }
    EXPECT_FALSE(ls.any_degenerate);
}

TEST(reconstruct, least_squares_improves_noisy_consistency) {
    // Under isotropic noise both modes stay close to the truth; the
    // least-squares assembly must not do worse than the primary chain.
    SchmidtState s = SchmidtState::make(4, normalized({0.7, 0.5, 0.4, 0.32}));
    QuditSettings qs = build_qudit_settings(s);
    DensityMatrix noisy = mix_white(s.to_density(), 0.97);
    CorrelationTable t = born_table(noisy, qs.alice, qs.bob);
    ReconstructedState prim = reconstruct_coefficients(t, 4, PairingMode::primary_only);
    ReconstructedState ls = reconstruct_coefficients(t, 4, PairingMode::least_squares);
    EXPECT_GT(reconstruction_fidelity(prim, s), 0.998);
    EXPECT_GE(reconstruction_fidelity(ls, s) + 1e-9, reconstruction_fidelity(prim, s) - 5e-4);
}

TEST(reconstruct, rejects_bad_dimensions) {
    SchmidtState s = SchmidtState::make(4, {0.5, 0.5, 0.5, 0.5});
    CorrelationTable t = exact_table(s);
    EXPECT_THROW(reconstruct_coefficients(t, 3), std::invalid_argument);
}
