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

#ifndef BELLST_NOISE_HPP
#define BELLST_NOISE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "bellst/bell.hpp"
#include "bellst/qcore.hpp"

namespace bellst {

/// Experimental imperfection model applied between state preparation and
/// measurement: optional isotropic (white) noise, optional dephasing in the
/// Schmidt basis, optional finite sampling statistics.
struct NoiseSpec {
    std::optional<double> white_noise_v;       // visibility v in [0, 1]
    std::optional<double> dephasing_lambda;    // strength in [0, 1]
    std::optional<long long> shots_per_setting;  // nullopt = exact probabilities

    bool is_trivial() const {
        return !white_noise_v.has_value() && !dephasing_lambda.has_value() &&
               !shots_per_setting.has_value();
    }
    void validate() const;
};

/// Isotropic mixing: v rho + (1 - v) I/dim.
DensityMatrix mix_white(const DensityMatrix &rho, double v);

/// Partial dephasing toward the Schmidt-diagonal sector of a d x d
/// bipartition: with probability lambda the state is measured by the
/// projectors {|ii><ii|} plus the complement, killing all coherences that
/// connect different |ii> terms or leave the diagonal sector. Requires the
/// joint dimension to be a perfect square. Completely positive and
/// trace-preserving for lambda in [0, 1].
DensityMatrix dephase(const DensityMatrix &rho, double lambda);

/// Finite-statistics version of a correlation table: for every setting pair,
/// draw `shots` outcomes from the exact distribution and replace
/// probabilities by empirical frequencies. Each setting pair consumes its own
/// counter-RNG stream derived from (seed, x, y), and draws are chunked over a
/// fixed number of blocks, so the result is bit-identical for every OpenMP
/// thread count - including 1, which is what sample_counts_serial checks.
CorrelationTable sample_counts(const CorrelationTable &exact, long long shots, uint64_t seed);

/// Plain single-threaded loop over draws; same RNG indexing, same result.
CorrelationTable sample_counts_serial(const CorrelationTable &exact, long long shots,
                                      uint64_t seed);

/// Visibility v such that purity(mix_white(pure_state, v)) equals
/// target_purity in dimension dim: v = sqrt((dim * P - 1) / (dim - 1)).
/// Requires target_purity in (1/dim, 1].
double visibility_for_purity(double target_purity, size_t dim);

/// Apply the channel part of a NoiseSpec (white noise then dephasing) to a
/// state; sampling is applied separately at the table level.
DensityMatrix apply_channels(const DensityMatrix &rho, const NoiseSpec &spec);

}  // namespace bellst

#endif
