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

#ifndef BELLST_HIGHDIM_HPP
#define BELLST_HIGHDIM_HPP

#include <string>
#include <vector>

#include "bellst/bell.hpp"
#include "bellst/qcore.hpp"
#include "bellst/tilted_chsh.hpp"

namespace bellst {

// Schmidt-coefficient certification for local dimension d in {3, 4} by
// running the two-qubit tilted self-test inside 2x2 sub-blocks of the
// Schmidt basis. Two complementary pairings of the basis indices are
// measured; the first fixes all coefficient magnitudes block by block, the
// second links neighbouring blocks and provides a consistency check on the
// cross-block ratios.

/// A 2-element block {i, j} (i < j) or a singleton {i} (i == j).
struct Block {
    int i = 0;
    int j = 0;

    bool singleton() const { return i == j; }
    std::string label() const;
};

enum class PairingId { primary, secondary };

struct BlockPairing {
    PairingId id = PairingId::primary;
    std::vector<Block> blocks;

    /// d = 4: primary {01, 23}, secondary {12, 03}.
    /// d = 3: primary {01, 2}, secondary {12, 0}.
    static BlockPairing make(int d, PairingId id);
};

/// Measurement layout produced by build_qudit_settings:
///   Alice x = 0 : computational basis (d outcomes mapped to block cells)
///         x = 1 : primary-pairing block observables
///         x = 2 : secondary-pairing block observables
///   Bob   y = 0, 1 : primary-pairing tilted pair
///         y = 2, 3 : secondary-pairing tilted pair
/// Within a block {i < j} the two-outcome convention maps outcome 0 to the
/// lower index i. Singleton indices are assigned outcome 0 eigenvalue +1 in
/// the block observable of the pairing they are alone in.
struct QuditSettings {
    ObservableSet alice;  // 3 measurements, d outcomes each
    ObservableSet bob;    // 4 measurements, d outcomes each
    /// Blocks whose tilt is undefined because the target state leaves them
    /// (nearly) empty or concentrated on one index; settings fall back to
    /// untilted ones there. Indexed [pairing][block].
    std::vector<std::vector<bool>> degenerate;
};
QuditSettings build_qudit_settings(const SchmidtState &target);

/// Setting indices that probe a pairing: Alice (x0, x1), Bob (y0, y1).
struct PairingSettings {
    int x0, x1, y0, y1;
};
PairingSettings pairing_settings(PairingId id);

/// Conditional 2x2x2x2 table of one block: outcomes restricted to the block
/// cells and renormalized per setting pair. `weight` is the block's share of
/// the total probability mass, averaged over the pairing's 4 setting pairs;
/// `weight_spread` the max-min range across those pairs (0 for exact
/// no-signalling tables). Blocks with weight below 1e-9 are flagged empty
/// and carry no conditional table.
struct BlockReduction {
    Block block;
    double weight = 0;
    double weight_spread = 0;
    bool empty = false;
    CorrelationTable conditional;  // valid iff !empty && !block.singleton()
};
BlockReduction block_reduce(const CorrelationTable &table, const Block &block,
                            const PairingSettings &ps);

/// Two-qubit extraction inside one block. The self-test family only covers
/// angles in [0, pi/4], i.e. blocks whose lower index carries the larger
/// coefficient; when the mass tilts the other way (<A0> < 0 on the
/// conditional table) both parties' outcomes are relabeled, the canonical
/// angle is extracted, and theta_block = pi/2 - theta records the flip.
struct BlockResult {
    Block block;
    double weight = 0;
    double weight_spread = 0;
    double theta_block = 0;  // in [0, pi/2]; tan(theta_block) = c_j / c_i
    bool flipped = false;
    bool skipped = false;     // singleton or empty: no extraction ran
    bool degenerate = false;  // extraction hit the product boundary
    ExtractionResult extraction;  // canonical-angle result (valid iff !skipped)
};
std::vector<BlockResult> extract_blocks(const CorrelationTable &table, int d, PairingId id);

enum class PairingMode {
    primary_only,   // coefficients from the primary pairing, secondary as check
    least_squares,  // refine cross ratios over both pairings (weighted in log space)
};

/// Schmidt-coefficient estimate assembled from block results.
/// consistency_residual = max over secondary pair blocks of
/// |tan(theta_block) - c_j / c_i| evaluated on the final estimate (0/0 -> 0).
struct ReconstructedState {
    int d = 0;
    std::vector<double> coeffs;  // normalized, >= 0
    double consistency_residual = 0;
    bool any_degenerate = false;
    std::vector<BlockResult> primary_blocks;
    std::vector<BlockResult> secondary_blocks;
};
ReconstructedState reconstruct_coefficients(const CorrelationTable &table, int d,
                                            PairingMode mode = PairingMode::primary_only);

/// |<est|ref>|^2 for two Schmidt-diagonal states with equal d.
double reconstruction_fidelity(const ReconstructedState &est, const SchmidtState &reference);

}  // namespace bellst

#endif
