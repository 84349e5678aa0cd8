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

#ifndef BELLST_TOMO_HPP
#define BELLST_TOMO_HPP

#include <cstdint>
#include <vector>

#include "bellst/qcore.hpp"

namespace bellst {

// Reference tomography channel, used as the trusted baseline the
// device-independent estimates are compared against. Per party the
// informationally complete projector family is
//   |i><i|                    for i < d,
//   |e+_ij><e+_ij|, e+ = (|i> + |j>)/sqrt(2)    for i < j,
//   |ei_ij><ei_ij|, ei = (|i> + i|j>)/sqrt(2)   for i < j,
// which is d^2 projectors (4 per qubit party, 16 for d = 4; the joint state
// needs d^4 expectation values: 16 / 256).

struct TomographyBasis {
    int d = 0;
    std::vector<ComplexMatrix> projectors;  // d^2 rank-1 projectors
    /// Condition number of the basis Gram matrix tr(P_k P_l); reported so a
    /// user can see how much linear inversion amplifies statistical noise.
    double gram_condition = 0;
};
TomographyBasis tomo_projectors(int d);

/// Exact joint expectation values p(k, l) = tr[rho (P_k (x) P_l)], row-major
/// over (k, l).
std::vector<double> tomo_probe(const DensityMatrix &rho, const TomographyBasis &basis);

/// Finite-statistics version: each expectation is replaced by the fraction
/// of `shots` Bernoulli trials at probability p(k, l), one counter-RNG
/// stream per (k, l). OpenMP-parallel over (k, l); bit-identical for any
/// thread count.
std::vector<double> tomo_probe_sampled(const DensityMatrix &rho, const TomographyBasis &basis,
                                       long long shots, uint64_t seed);

/// Linear inversion through the per-party dual frame (the Gram matrix of the
/// joint basis factorizes as G (x) G, so duals are built per party), followed
/// by projection onto the density-matrix cone. `projection_distance` is the
/// Frobenius distance moved by that repair (0 for exact inputs).
struct TomographyResult {
    DensityMatrix rho;
    double projection_distance = 0;
};
TomographyResult reconstruct_density(const std::vector<double> &probs,
                                     const TomographyBasis &basis);

/// Schmidt-diagonal readout of a reconstructed bipartite state.
/// theta compares the |11> and |00> populations (meaningful for the
/// two-qubit target family); coeffs are the |ii> populations renormalized
/// over the diagonal sector, coeffs_raw the unnormalized square roots.
struct SchmidtReadout {
    double theta = 0;
    bool theta_degenerate = false;  // |00> population (numerically) zero
    std::vector<double> coeffs;
    std::vector<double> coeffs_raw;
    double sector_mass = 0;  // total |ii> population
};
SchmidtReadout schmidt_readout(const DensityMatrix &rho, int d);

}  // namespace bellst

#endif
