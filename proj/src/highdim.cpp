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

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bellst/errors.hpp"

namespace bellst {

std::string Block::label() const {
    if (singleton()) {
        return std::to_string(i);
    }
    return std::to_string(i) + std::to_string(j);
}

BlockPairing BlockPairing::make(int d, PairingId id) {
    BlockPairing p;
    p.id = id;
    if (d == 4) {
        p.blocks = id == PairingId::primary ? std::vector<Block>{{0, 1}, {2, 3}}
                                            : std::vector<Block>{{1, 2}, {0, 3}};
    } else if (d == 3) {
        p.blocks = id == PairingId::primary ? std::vector<Block>{{0, 1}, {2, 2}}
                                            : std::vector<Block>{{1, 2}, {0, 0}};
    } else {
        throw std::invalid_argument("BlockPairing: d must be 3 or 4");
    }
    return p;
}

PairingSettings pairing_settings(PairingId id) {
    return id == PairingId::primary ? PairingSettings{0, 1, 0, 1} : PairingSettings{0, 2, 2, 3};
}

namespace {

struct BlockAngle {
    double theta = 0;  // in [0, pi/2]
    bool degenerate = false;
};

BlockAngle block_angle(double ci, double cj) {
    BlockAngle a;
    double w = ci * ci + cj * cj;
    if (w < 1e-18) {
        // Empty block: no tilt is defined; fall back to the untilted
        // (maximally-entangled-optimal) settings.
        a.theta = M_PI / 4;
        a.degenerate = true;
        return a;
    }
    a.theta = std::atan2(cj, ci);
    if (a.theta < 1e-9 || a.theta > M_PI / 2 - 1e-9) {
        a.degenerate = true;  // all block mass on one index
    }
    return a;
}

// Basis vectors |i>, (|i> + |j>)/sqrt(2) etc. as d-dim column matrices.
ComplexMatrix basis_proj(int d, int i) {
    ComplexMatrix m(d, d);
    m(i, i) = 1.0;
    return m;
}

// Rank-1 projector onto cos(t)|i> + sin(t)|j>.
ComplexMatrix plane_proj(int d, int i, int j, double t) {
    std::vector<cplx> v(d);
    v[i] = std::cos(t);
    v[j] = std::sin(t);
    return ComplexMatrix::outer(v);
}

// d-outcome measurement from per-block two-outcome directions. For each pair
// block {i < j} the projector assigned to outcome i is the +1 eigenvector of
// cos(angle) Z_B + sin(angle) X_B (Z_B = |i><i| - |j><j|, X_B = |i><j| +
// |j><i|), outcome j the -1 eigenvector; singletons keep |i><i|.
ProjectiveMeasurement block_measurement(int d, const BlockPairing &pairing,
                                        const std::vector<double> &angles) {
    ProjectiveMeasurement m;
    m.projectors.assign(d, ComplexMatrix(d, d));
    for (size_t b = 0; b < pairing.blocks.size(); b++) {
        const Block &blk = pairing.blocks[b];
        if (blk.singleton()) {
            m.projectors[blk.i] = basis_proj(d, blk.i);
            continue;
        }
        // +1 eigenvector of cos(a) Z_B + sin(a) X_B is at polar angle a/2 in
        // the (|i>, |j>) plane; the -1 eigenvector is orthogonal.
        double half = angles[b] / 2.0;
        m.projectors[blk.i] = plane_proj(d, blk.i, blk.j, half);
        m.projectors[blk.j] = plane_proj(d, blk.i, blk.j, half + M_PI / 2);
    }
    return m;
}

}  // namespace

QuditSettings build_qudit_settings(const SchmidtState &target) {
    int d = target.d;
    if (d != 3 && d != 4) {
        throw std::invalid_argument("build_qudit_settings: d must be 3 or 4");
    }
    QuditSettings qs;
    qs.degenerate.assign(2, {});

    // Alice setting 0: computational basis, shared by both pairings as the
    // Z-type input of every block.
    ProjectiveMeasurement computational;
    for (int i = 0; i < d; i++) {
        computational.projectors.push_back(basis_proj(d, i));
    }
    qs.alice.push_back(computational);

    for (PairingId id : {PairingId::primary, PairingId::secondary}) {
        BlockPairing pairing = BlockPairing::make(d, id);
        size_t pi = id == PairingId::primary ? 0 : 1;
        std::vector<double> alice_angles;   // X_B per block
        std::vector<double> bob_plus;       // cos(mu) Z_B + sin(mu) X_B
        std::vector<double> bob_minus;
        for (const Block &blk : pairing.blocks) {
            if (blk.singleton()) {
                qs.degenerate[pi].push_back(false);
                alice_angles.push_back(0);
                bob_plus.push_back(0);
                bob_minus.push_back(0);
                continue;
            }
            BlockAngle ang = block_angle(target.coeffs[blk.i], target.coeffs[blk.j]);
            qs.degenerate[pi].push_back(ang.degenerate);
            double mu = std::atan(std::sin(2.0 * ang.theta));
            alice_angles.push_back(M_PI / 2);  // X_B
            bob_plus.push_back(mu);
            bob_minus.push_back(-mu);
        }
        qs.alice.push_back(block_measurement(d, pairing, alice_angles));
        qs.bob.push_back(block_measurement(d, pairing, bob_plus));
        qs.bob.push_back(block_measurement(d, pairing, bob_minus));
    }
    // Bob ordering built above: primary pair first (y = 0, 1), then
    // secondary (y = 2, 3).
    return qs;
}

BlockReduction block_reduce(const CorrelationTable &table, const Block &block,
                            const PairingSettings &ps) {
    const BellScenario &s = table.scenario;
    int need_x = std::max(ps.x0, ps.x1);
    int need_y = std::max(ps.y0, ps.y1);
    if (s.settings_a <= need_x || s.settings_b <= need_y) {
        throw std::invalid_argument("block_reduce: table lacks the pairing's settings");
    }
    if (block.j >= s.outcomes || block.i > block.j || block.i < 0) {
        throw std::invalid_argument("block_reduce: block indices out of range");
    }

    BlockReduction red;
    red.block = block;

    const int xs[2] = {ps.x0, ps.x1};
    const int ys[2] = {ps.y0, ps.y1};
    double wmin = 1e30, wmax = -1e30, wsum = 0;
    double pair_w[2][2];
    for (int xi = 0; xi < 2; xi++) {
        for (int yi = 0; yi < 2; yi++) {
            double w = 0;
            if (block.singleton()) {
                w = table.p(xs[xi], ys[yi], block.i, block.i);
            } else {
                for (int a : {block.i, block.j}) {
                    for (int b : {block.i, block.j}) {
                        w += table.p(xs[xi], ys[yi], a, b);
                    }
                }
            }
            pair_w[xi][yi] = w;
            wmin = std::min(wmin, w);
            wmax = std::max(wmax, w);
            wsum += w;
        }
    }
    red.weight = wsum / 4.0;
    red.weight_spread = wmax - wmin;
    if (red.weight < 1e-9 || wmin < 1e-12 || block.singleton()) {
        red.empty = red.weight < 1e-9 || wmin < 1e-12;
        return red;
    }

    CorrelationTable cond;
    cond.scenario = BellScenario{2, 2, 2};
    cond.probs.assign(16, 0.0);
    for (int xi = 0; xi < 2; xi++) {
        for (int yi = 0; yi < 2; yi++) {
            const int outs[2] = {block.i, block.j};
            for (int ai = 0; ai < 2; ai++) {
                for (int bi = 0; bi < 2; bi++) {
                    cond.probs[cond.index(xi, yi, ai, bi)] =
                        table.p(xs[xi], ys[yi], outs[ai], outs[bi]) / pair_w[xi][yi];
                }
            }
        }
    }
    cond.validate();
    red.conditional = std::move(cond);
    return red;
}

namespace {

CorrelationTable flip_both_parties(const CorrelationTable &t) {
    CorrelationTable out = t;
    for (int x = 0; x < t.scenario.settings_a; x++) {
        for (int y = 0; y < t.scenario.settings_b; y++) {
            for (int a = 0; a < 2; a++) {
                for (int b = 0; b < 2; b++) {
                    out.probs[out.index(x, y, a, b)] = t.p(x, y, 1 - a, 1 - b);
                }
            }
        }
    }
    return out;
}

}  // namespace

std::vector<BlockResult> extract_blocks(const CorrelationTable &table, int d, PairingId id) {
    if (table.scenario.outcomes != d) {
        throw std::invalid_argument("extract_blocks: table outcomes do not match d");
    }
    BlockPairing pairing = BlockPairing::make(d, id);
    PairingSettings ps = pairing_settings(id);
    std::vector<BlockResult> out;
    for (const Block &blk : pairing.blocks) {
        BlockReduction red = block_reduce(table, blk, ps);
        BlockResult res;
        res.block = blk;
        res.weight = red.weight;
        res.weight_spread = red.weight_spread;
        if (blk.singleton() || red.empty) {
            res.skipped = true;
            res.theta_block = 0;
            out.push_back(res);
            continue;
        }
        ExtractionResult first = extract_theta(red.conditional);
        if (first.mean_a0 < 0) {
            // Mass concentrated on the upper index: relabel both parties
            // (correlators invariant, <A0> changes sign) and mirror the angle.
            res.flipped = true;
            res.extraction = extract_theta(flip_both_parties(red.conditional));
            res.theta_block = M_PI / 2 - res.extraction.theta;
        } else {
            res.extraction = first;
            res.theta_block = res.extraction.theta;
        }
        res.degenerate = res.extraction.degenerate_product;
        out.push_back(res);
    }
    return out;
}

namespace {

// Weighted least squares for log-coefficients: unknowns u_1 .. u_{d-1}
// (u_0 = 0 gauge), one equation u_j - u_i = log(ratio) per usable pair
// block. Returns false when the system is degenerate (unusable ratio or
// singular normal matrix).
bool refine_log_ratios(int d, const std::vector<const BlockResult *> &pair_blocks,
                       std::vector<double> *coeffs) {
    struct Eq {
        int i, j;
        double rhs, w;
    };
    std::vector<Eq> eqs;
    for (const BlockResult *b : pair_blocks) {
        if (b->skipped) {
            return false;
        }
        double r = std::tan(b->theta_block);
        if (!(r > 0) || !std::isfinite(r)) {
            return false;
        }
        eqs.push_back(Eq{b->block.i, b->block.j, std::log(r), b->weight});
    }
    int n = d - 1;
    ComplexMatrix ata(n, n);
    std::vector<cplx> atb(n);
    for (const Eq &e : eqs) {
        // Row has +1 at j, -1 at i (gauge: index 0 contributes nothing).
        int cols[2] = {e.j - 1, e.i - 1};
        double vals[2] = {1.0, -1.0};
        for (int p = 0; p < 2; p++) {
            if (cols[p] < 0) {
                continue;
            }
            for (int q = 0; q < 2; q++) {
                if (cols[q] < 0) {
                    continue;
                }
                ata(cols[p], cols[q]) += e.w * vals[p] * vals[q];
            }
            atb[cols[p]] += e.w * vals[p] * e.rhs;
        }
    }
    std::vector<cplx> u;
    try {
        u = solve_linear(ata, atb);
    } catch (const NumericError &) {
        return false;
    }
    std::vector<double> c(d);
    c[0] = 1.0;
    for (int i = 1; i < d; i++) {
        c[i] = std::exp(u[i - 1].real());
    }
    double norm = 0;
    for (double v : c) {
        norm += v * v;
    }
    norm = std::sqrt(norm);
    for (int i = 0; i < d; i++) {
        c[i] /= norm;
    }
    *coeffs = std::move(c);
    return true;
}

}  // namespace

ReconstructedState reconstruct_coefficients(const CorrelationTable &table, int d,
                                            PairingMode mode) {
    ReconstructedState st;
    st.d = d;
    st.primary_blocks = extract_blocks(table, d, PairingId::primary);
    st.secondary_blocks = extract_blocks(table, d, PairingId::secondary);

    std::vector<double> raw(d, 0.0);
    for (const BlockResult &b : st.primary_blocks) {
        double amp = std::sqrt(std::max(0.0, b.weight));
        if (b.block.singleton()) {
            raw[b.block.i] = amp;
        } else if (!b.skipped) {
            raw[b.block.i] = amp * std::cos(b.theta_block);
            raw[b.block.j] = amp * std::sin(b.theta_block);
        }
        st.any_degenerate = st.any_degenerate || b.degenerate || (b.skipped && !b.block.singleton());
    }
    for (const BlockResult &b : st.secondary_blocks) {
        st.any_degenerate = st.any_degenerate || b.degenerate || (b.skipped && !b.block.singleton());
    }

    double norm = 0;
    for (double v : raw) {
        norm += v * v;
    }
    if (norm <= 0) {
        throw NumericError("reconstruct_coefficients: no probability mass in any block");
    }
    norm = std::sqrt(norm);
    for (double &v : raw) {
        v /= norm;
    }
    st.coeffs = raw;

    if (mode == PairingMode::least_squares) {
        std::vector<const BlockResult *> pair_blocks;
        for (const auto &b : st.primary_blocks) {
            if (!b.block.singleton()) {
                pair_blocks.push_back(&b);
            }
        }
        for (const auto &b : st.secondary_blocks) {
            if (!b.block.singleton()) {
                pair_blocks.push_back(&b);
            }
        }
        std::vector<double> refined;
        if (refine_log_ratios(d, pair_blocks, &refined)) {
            st.coeffs = refined;
        } else {
            // Ratio system unusable (empty or one-sided block); keep the
            // primary-pairing estimate and record the degeneracy.
            st.any_degenerate = true;
        }
    }

    // Cross-pairing consistency: the secondary blocks predict coefficient
    // ratios that the final estimate must reproduce.
    double resid = 0;
    for (const BlockResult &b : st.secondary_blocks) {
        if (b.block.singleton() || b.skipped) {
            continue;
        }
        double ci = st.coeffs[b.block.i];
        double cj = st.coeffs[b.block.j];
        double predicted = std::tan(b.theta_block);
        if (ci == 0 && cj == 0) {
            continue;  // 0/0: no constraint
        }
        double actual = ci == 0 ? INFINITY : cj / ci;
        double dev = std::abs(predicted - actual);
        if (std::isnan(dev)) {
            dev = INFINITY;
        }
        resid = std::max(resid, dev);
    }
    st.consistency_residual = resid;
    return st;
}

double reconstruction_fidelity(const ReconstructedState &est, const SchmidtState &reference) {
    if (est.d != reference.d) {
        throw std::invalid_argument("reconstruction_fidelity: dimension mismatch");
    }
    double overlap = 0;
    for (int i = 0; i < est.d; i++) {
        overlap += est.coeffs[i] * reference.coeffs[i];
    }
    return overlap * overlap;
}

}  // namespace bellst
