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

#include "bellst/tomo.hpp"

#include <cmath>

#include "gtest/gtest.h"

#include "bellst/noise.hpp"

using namespace bellst;

TEST(tomo_projectors, family_shape) {
    for (int d : {2, 3, 4}) {
        TomographyBasis basis = tomo_projectors(d);
        ASSERT_EQ(basis.projectors.size(), static_cast<size_t>(d * d)) << "d=" << d;
        for (const auto &p : basis.projectors) {
            // Rank-1 projectors: idempotent, unit trace.
            EXPECT_LT((p * p - p).max_abs(), 1e-13);
            EXPECT_NEAR(p.trace().real(), 1.0, 1e-13);
        }
        EXPECT_GT(basis.gram_condition, 1.0);
        EXPECT_LT(basis.gram_condition, 100.0);
    }
    EXPECT_THROW(tomo_projectors(1), std::invalid_argument);
    EXPECT_THROW(tomo_projectors(5), std::invalid_argument);
}

TEST(tomo_probe, joint_count_is_d_fourth) {
    SchmidtState s = SchmidtState::make(4, {0.5, 0.5, 0.5, 0.5});
    TomographyBasis basis = tomo_projectors(4);
    std::vector<double> probs = tomo_probe(s.to_density(), basis);
    EXPECT_EQ(probs.size(), 256u);
    for (double p : probs) {
        EXPECT_GE(p, -1e-13);
        EXPECT_LE(p, 1 + 1e-13);
    }
}

TEST(reconstruct_density, exact_inputs_invert_exactly) {
    for (int d : {2, 3, 4}) {
        std::vector<double> coeffs(d, 0.0);
        double n2 = 0;
        for (int i = 0; i < d; i++) {
            coeffs[i] = 1.0 / (1 + i);
            n2 += coeffs[i] * coeffs[i];
        }
        for (double &c : coeffs) {
            c /= std::sqrt(n2);
        }
        DensityMatrix rho = SchmidtState::make(d, coeffs).to_density();
        TomographyBasis basis = tomo_projectors(d);
        TomographyResult r = reconstruct_density(tomo_probe(rho, basis), basis);
        EXPECT_LT((r.rho.mat() - rho.mat()).max_abs(), 1e-10) << "d=" << d;
        EXPECT_LT(r.projection_distance, 1e-10);
    }
}

TEST(reconstruct_density, mixed_state_roundtrip) {
    DensityMatrix rho = mix_white(SchmidtState::make(2, {0.6, 0.8}).to_density(), 0.85);
    TomographyBasis basis = tomo_projectors(2);
    TomographyResult r = reconstruct_density(tomo_probe(rho, basis), basis);
    EXPECT_LT((r.rho.mat() - rho.mat()).max_abs(), 1e-10);
}

TEST(reconstruct_density, sampled_estimate_is_positive_and_close) {
    DensityMatrix rho = SchmidtState::make(2, {std::cos(0.4), std::sin(0.4)}).to_density();
    TomographyBasis basis = tomo_projectors(2);
    std::vector<double> probs = tomo_probe_sampled(rho, basis, 200000, 909);
    TomographyResult r = reconstruct_density(probs, basis);
    // Linear inversion of noisy frequencies generally leaves the cone; the
    // projection must land back on a valid state close to the truth.
    EXPECT_LT(trace_distance(r.rho, rho), 0.02);
    EXPECT_NEAR(fidelity_to_pure(r.rho, SchmidtState::make(2, {std::cos(0.4), std::sin(0.4)})
                                            .to_state_vector()),
                1.0, 0.01);
}

TEST(tomo_probe_sampled, deterministic_given_seed) {
    DensityMatrix rho = SchmidtState::make(3, {0.6, 0.64, std::sqrt(1 - 0.36 - 0.4096)})
                            .to_density();
    TomographyBasis basis = tomo_projectors(3);
    std::vector<double> a = tomo_probe_sampled(rho, basis, 1000, 5);
    std::vector<double> b = tomo_probe_sampled(rho, basis, 1000, 5);
    EXPECT_EQ(a, b);
    std::vector<double> c = tomo_probe_sampled(rho, basis, 1000, 6);
    EXPECT_NE(a, c);
}

TEST(schmidt_readout, recovers_qubit_angle) {
    for (double theta : {0.1, 0.4, M_PI / 4}) {
        DensityMatrix rho = TargetQubitState::make(theta).schmidt().to_density();
        SchmidtReadout r = schmidt_readout(rho, 2);
        EXPECT_NEAR(r.theta, theta, 1e-12) << theta;
        EXPECT_FALSE(r.theta_degenerate);
        EXPECT_NEAR(r.sector_mass, 1.0, 1e-12);
        EXPECT_NEAR(r.coeffs[0], std::cos(theta), 1e-12);
        EXPECT_NEAR(r.coeffs[1], std::sin(theta), 1e-12);
    }
}

TEST(schmidt_readout, white_noise_cancels_in_ratio) {
    // Isotropic noise adds the same population to |00> and |11>, so the
    // readout angle drifts toward pi/4 but the sector renormalization keeps
    // the coefficients meaningful.
    double theta = 0.3;
    DensityMatrix noisy =
        mix_white(TargetQubitState::make(theta).schmidt().to_density(), 0.95);
    SchmidtReadout r = schmidt_readout(noisy, 2);
    double p00 = 0.95 * std::cos(theta) * std::cos(theta) + 0.05 / 4;
    double p11 = 0.95 * std::sin(theta) * std::sin(theta) + 0.05 / 4;
    EXPECT_NEAR(r.theta, std::atan(std::sqrt(p11 / p00)), 1e-12);
    EXPECT_NEAR(r.sector_mass, p00 + p11, 1e-12);
}

TEST(schmidt_readout, degenerate_when_first_population_empty) {
    DensityMatrix rho = DensityMatrix::from_pure({0, 0, 0, 1});  // |11>
    SchmidtReadout r = schmidt_readout(rho, 2);
    EXPECT_TRUE(r.theta_degenerate);
    EXPECT_NEAR(r.theta, M_PI / 2, 1e-12);
}

TEST(schmidt_readout, qudit_coefficients) {
    std::vector<double> coeffs = {0.8, 0.4, 0.4, 0.2};
    DensityMatrix rho = SchmidtState::make(4, coeffs).to_density();
    SchmidtReadout r = schmidt_readout(rho, 4);
    ASSERT_EQ(r.coeffs.size(), 4u);
    for (int i = 0; i < 4; i++) {
        EXPECT_NEAR(r.coeffs[i], coeffs[i], 1e-12);
    }
}
