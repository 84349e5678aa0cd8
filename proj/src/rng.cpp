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
#include <stdexcept>

#include "bellst/errors.hpp"

namespace bellst {

uint64_t CounterRng::mix(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

uint64_t CounterRng::derive(uint64_t seed, std::initializer_list<uint64_t> path) {
    uint64_t s = mix(seed ^ 0xa5a5a5a55a5a5a5aull);
    for (uint64_t c : path) {
        s = mix(s ^ mix(c + kGamma));
    }
    return s;
}

void gaussian_pair(const CounterRng &rng, uint64_t pair_index, double *z0, double *z1) {
    // Box-Muller. u1 is kept away from 0 so the log stays finite.
    double u1 = (static_cast<double>(rng.word(2 * pair_index) >> 11) + 1.0) * 0x1.0p-53;
    double u2 = rng.uniform(2 * pair_index + 1);
    double r = std::sqrt(-2.0 * std::log(u1));
    *z0 = r * std::cos(2.0 * M_PI * u2);
    *z1 = r * std::sin(2.0 * M_PI * u2);
}

ComplexMatrix haar_unitary(size_t n, uint64_t seed) {
    if (n == 0) {
        throw std::invalid_argument("haar_unitary: n must be positive");
    }
    CounterRng rng(CounterRng::derive(seed, {0x4861617275ull, n}));

    // Complex Ginibre matrix: independent standard complex normals.
    ComplexMatrix g(n, n);
    for (size_t i = 0; i < n; i++) {
        for (size_t j = 0; j < n; j++) {
            double z0, z1;
            gaussian_pair(rng, i * n + j, &z0, &z1);
            g(i, j) = cplx(z0, z1) * M_SQRT1_2;
        }
    }

    // Modified Gram-Schmidt QR on the columns. Gram-Schmidt produces the
    // canonical factorization whose R diagonal is real and positive, and the
    // Q factor of that factorization inherits Haar measure from the unitary
    // invariance of the Ginibre ensemble (no extra phase correction needed,
    // unlike Householder-based QR).
    ComplexMatrix q = g;
    for (size_t j = 0; j < n; j++) {
        for (size_t k = 0; k < j; k++) {
            cplx proj = 0;
            for (size_t i = 0; i < n; i++) {
                proj += std::conj(q(i, k)) * q(i, j);
            }
            for (size_t i = 0; i < n; i++) {
                q(i, j) -= proj * q(i, k);
            }
        }
        double norm2 = 0;
        for (size_t i = 0; i < n; i++) {
            norm2 += std::norm(q(i, j));
        }
        double norm = std::sqrt(norm2);
        if (norm < 1e-12) {
            // Probability-zero event for Ginibre input; bail out loudly
            // rather than emitting a non-unitary matrix.
            throw NumericError("haar_unitary: rank-deficient Ginibre sample");
        }
        for (size_t i = 0; i < n; i++) {
            q(i, j) /= norm;
        }
    }
    return q;
}

}  // namespace bellst
