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

#ifndef BELLST_TILTED_CHSH_HPP
#define BELLST_TILTED_CHSH_HPP

#include <cstdint>

#include "bellst/bell.hpp"
#include "bellst/qcore.hpp"

namespace bellst {

// One-parameter family of tilted CHSH functionals
//
//   beta_alpha = alpha <A0> + E(0,0) + E(0,1) + E(1,0) - E(1,1),
//
// alpha in [0, 2]. Local hidden-variable models reach 2 + alpha; quantum
// devices reach sqrt(8 + 2 alpha^2), and the unique quantum state attaining
// the maximum (up to local isometries) is cos(theta)|00> + sin(theta)|11>
// with tan(2 theta) = sqrt((4 - alpha^2) / (2 alpha^2)). Observing a maximal
// violation therefore certifies the state: that inversion is what
// extract_theta implements.

/// Quantum maximum sqrt(8 + 2 alpha^2).
double quantum_bound(double alpha);
/// Local hidden-variable maximum 2 + alpha.
double classical_bound(double alpha);

/// Evaluate beta_alpha on a 2-setting/2-outcome table.
double beta_value(const CorrelationTable &table, double alpha);

/// Read the self-tested Schmidt angle out of a correlation table.
///
/// alpha0 is the tilt whose functional the table maximizes, obtained as the
/// stationary point 2 m / sqrt(2 - m^2) of the violation-gap in alpha for
/// m = <A0>, clamped into [0, 2]; theta then inverts the tangent relation
/// above. gap = quantum_bound(alpha0) - beta_value(table, alpha0) measures
/// how far the table falls short of the certifying maximum (0 for ideal
/// tables, > 0 under noise).
struct ExtractionResult {
    double theta = 0;    // in [0, pi/4]
    double alpha0 = 0;   // in [0, 2]
    double gap = 0;
    double mean_a0 = 0;  // pooled <A0>
    /// Set when alpha0 hits the product-state end of the family (m -> 1),
    /// where theta -> 0 and the tilt direction becomes uninformative.
    bool degenerate_product = false;
};
ExtractionResult extract_theta(const CorrelationTable &table);

/// Measurement settings achieving the quantum maximum on the state with
/// Schmidt angle theta: A0 = Z, A1 = X, B_y = cos(mu) Z +/- sin(mu) X with
/// tan(mu) = sin(2 theta), and the matching tilt alpha. theta = 0 yields
/// computational-basis measurements on both sides and sets `degenerate`
/// (every correlation is classical there; nothing can be certified).
struct TiltedSettings {
    ObservableSet alice;
    ObservableSet bob;
    double alpha = 0;
    double mu = 0;
    bool degenerate = false;
};
TiltedSettings optimal_settings(double theta);

/// Alternating best-response maximization of beta_alpha over projective
/// qubit settings for a fixed two-qubit state. Each half-step replaces one
/// party's observables with the matrix sign of its effective operators, which
/// cannot decrease the value; iteration stops when the gain drops below
/// 1e-12 (at most 500 iterations). Runs `restarts` independent restarts from
/// seeded random settings and keeps the best.
struct SeesawResult {
    ObservableSet alice;
    ObservableSet bob;
    double value = 0;
    int iterations = 0;  // iterations used by the winning restart
};
SeesawResult seesaw_maximize(const DensityMatrix &rho, double alpha, int restarts, uint64_t seed);

/// Jointly search the tilt and the settings: minimizes the violation gap
/// quantum_bound(alpha) - seesaw_value(alpha) over alpha in [0, 2] (grid scan
/// plus golden-section refinement). This is the "--reoptimize" path: it
/// certifies a state with no prior knowledge of the correct settings.
///
/// Only tilts whose best strategy strictly violates the classical bound
/// 2 + alpha are admissible: at alpha -> 2 the quantum bound sqrt(8+2a^2)
/// degenerates to 2 + alpha, attained by trivial (identity) measurements on
/// any state, so an unfiltered gap search would always collapse there. If no
/// tilt is admissible the state supports no self-test and the result is
/// flagged degenerate (computational settings, alpha = 2).
struct DiscoveredSettings {
    TiltedSettings settings;  // alpha/mu filled from the search
    double value = 0;
    double gap = 0;
};
DiscoveredSettings discover_settings(const DensityMatrix &rho, int restarts, uint64_t seed);

/// Fidelity of the state extracted by the local swap isometry against the
/// pure target with Schmidt angle theta.
///
/// Each party appends a |0> ancilla and runs H, controlled-Z_hat, H,
/// controlled-X_hat, where Z_hat/X_hat are rebuilt from that party's observed
/// settings (Alice: A0 and A1; Bob: (B0 + B1)/(2 cos mu) and
/// (B0 - B1)/(2 sin mu), regularized through the matrix sign so near-singular
/// combinations stay dichotomic). The returned value is the overlap of the
/// traced-out ancilla pair with cos(theta)|00> + sin(theta)|11>. Linear in
/// rho; equals 1 exactly on the ideal state with optimal settings.
/// Throws std::invalid_argument when theta = 0 (mu = 0 makes X_hat_B
/// undefined).
double swap_fidelity(const DensityMatrix &rho, const ObservableSet &alice,
                     const ObservableSet &bob, double theta);

}  // namespace bellst

#endif
