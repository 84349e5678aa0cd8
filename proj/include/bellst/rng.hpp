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

#ifndef BELLST_RNG_HPP
#define BELLST_RNG_HPP

#include <cstdint>
#include <initializer_list>

#include "bellst/complex_matrix.hpp"

namespace bellst {

/// Counter-based pseudorandom stream: the n-th output is the SplitMix64
/// finalizer applied to seed + (n + 1) * golden_gamma. Because each draw is a
/// pure function of (seed, index), work can be chunked across threads in any
/// order and still reproduce the single-threaded result bit for bit. That
/// property is what makes every sampled quantity in this library independent
/// of the OpenMP thread count.
class CounterRng {
   public:
    explicit CounterRng(uint64_t seed) : seed_(seed) {}

    uint64_t seed() const { return seed_; }

    /// Raw 64-bit word at stream position `index`.
    uint64_t word(uint64_t index) const { return mix(seed_ + (index + 1) * kGamma); }

    /// Uniform double in [0, 1) with 53-bit resolution.
    double uniform(uint64_t index) const {
        return static_cast<double>(word(index) >> 11) * 0x1.0p-53;
    }

    /// SplitMix64 finalizer.
    static uint64_t mix(uint64_t z);

    /// Derive the seed of a child stream from a path of component ids, e.g.
    /// derive(seed, {state_index, variant_index}). Different paths give
    /// statistically independent streams; identical paths are reproducible.
    static uint64_t derive(uint64_t seed, std::initializer_list<uint64_t> path);

   private:
    static constexpr uint64_t kGamma = 0x9e3779b97f4a7c15ull;
    uint64_t seed_;
};

/// Two independent standard normals from stream positions 2*pair_index and
/// 2*pair_index + 1 (Box-Muller).
void gaussian_pair(const CounterRng &rng, uint64_t pair_index, double *z0, double *z1);

/// Haar-distributed n x n unitary: the Q factor of the canonical
/// positive-diagonal QR factorization (modified Gram-Schmidt) of a complex
/// Ginibre matrix. Consumes 2*n*n stream positions of a dedicated child
/// stream of `seed`.
ComplexMatrix haar_unitary(size_t n, uint64_t seed);

}  // namespace bellst

#endif
