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

#include "bellst/noise.hpp"

#include <cmath>
#include <stdexcept>

#include "bellst/errors.hpp"
#include "bellst/rng.hpp"

namespace bellst {

void NoiseSpec::validate() const {
    if (white_noise_v.has_value() && !(*white_noise_v >= 0 && *white_noise_v <= 1)) {
        throw ConfigError("NoiseSpec: white_noise_v must lie in [0, 1]");
    }
    if (dephasing_lambda.has_value() && !(*dephasing_lambda >= 0 && *dephasing_lambda <= 1)) {
        throw ConfigError("NoiseSpec: dephasing_lambda must lie in [0, 1]");
    }
    if (shots_per_setting.has_value() && *shots_per_setting < 1) {
        throw ConfigError("NoiseSpec: shots_per_setting must be >= 1");
    }
}

DensityMatrix mix_white(const DensityMatrix &rho, double v) {
    if (!(v >= 0 && v <= 1)) {
        throw std::invalid_argument("mix_white: v must lie in [0, 1]");
    }
    size_t n = rho.dim();
    ComplexMatrix m = cplx(v) * rho.mat();
    double off = (1.0 - v) / static_cast<double>(n);
    for (size_t i = 0; i < n; i++) {
        m(i, i) += off;
    }
    return DensityMatrix::make(m);
}

DensityMatrix dephase(const DensityMatrix &rho, double lambda) {
    if (!(lambda >= 0 && lambda <= 1)) {
        throw std::invalid_argument("dephase: lambda must lie in [0, 1]");
    }
    size_t dim = rho.dim();
    size_t d = static_cast<size_t>(std::llround(std::sqrt(static_cast<double>(dim))));
    if (d * d != dim) {
        throw std::invalid_argument("dephase: joint dimension must be a perfect square");
    }
    // Measuring with {|ii><ii|}_i plus the complement keeps an entry
    // rho(r, c) only if r and c are the same projector's row/column. So every
    // coherence between two distinct diagonal-sector indices, or between the
    // diagonal sector and its complement, is damped by (1 - lambda).
    auto in_sector = [d](size_t idx) { return idx % (d + 1) == 0; };
    ComplexMatrix m = rho.mat();
    for (size_t r = 0; r < dim; r++) {
        for (size_t c = 0; c < dim; c++) {
            bool rs = in_sector(r);
            bool cs = in_sector(c);
            bool damped = (rs && cs && r != c) || (rs != cs);
            if (damped) {
                m(r, c) *= 1.0 - lambda;
            }
        }
    }
    return DensityMatrix::make(m);
}

namespace {

// Empirical multinomial counts for one setting pair. Determinism scheme: the
// j-th draw uses stream position j of a per-setting-pair stream, and draws
// are partitioned into kChunks contiguous ranges whose partial counts are
// reduced in fixed order. Thread scheduling can reorder chunk execution but
// not the arithmetic, so counts are identical for any thread count.
constexpr int kChunks = 64;

void multinomial_counts(const double *cell_probs, int cells, long long shots,
                        const CounterRng &rng, long long *out, bool parallel) {
    std::vector<double> cdf(cells);
    double acc = 0;
    for (int c = 0; c < cells; c++) {
        acc += cell_probs[c];
        cdf[c] = acc;
    }
    // Guard against roundoff in the final bucket.
    cdf[cells - 1] = 1.0;

    std::vector<long long> chunk_counts(static_cast<size_t>(kChunks) * cells, 0);
#pragma omp parallel for schedule(static) if (parallel)
    for (int chunk = 0; chunk < kChunks; chunk++) {
        long long lo = shots * chunk / kChunks;
        long long hi = shots * (chunk + 1) / kChunks;
        long long *local = chunk_counts.data() + static_cast<size_t>(chunk) * cells;
        for (long long j = lo; j < hi; j++) {
            double u = rng.uniform(static_cast<uint64_t>(j));
            int c = 0;
            while (c < cells - 1 && u >= cdf[c]) {
                c++;
            }
            local[c]++;
        }
    }
    for (int c = 0; c < cells; c++) {
        out[c] = 0;
    }
    for (int chunk = 0; chunk < kChunks; chunk++) {
        for (int c = 0; c < cells; c++) {
            out[c] += chunk_counts[static_cast<size_t>(chunk) * cells + c];
        }
    }
}

CorrelationTable sample_counts_impl(const CorrelationTable &exact, long long shots, uint64_t seed,
                                    bool parallel) {
    exact.validate();
    if (exact.source.has_value()) {
        throw std::invalid_argument("sample_counts: input table must be exact");
    }
    if (shots < 1) {
        throw std::invalid_argument("sample_counts: shots must be >= 1");
    }
    const BellScenario &s = exact.scenario;
    int cells = s.outcomes * s.outcomes;

    CorrelationTable t;
    t.scenario = s;
    t.source = SampledSource{shots, seed};
    t.probs.assign(exact.probs.size(), 0.0);
    t.counts.assign(exact.probs.size(), 0);

    for (int x = 0; x < s.settings_a; x++) {
        for (int y = 0; y < s.settings_b; y++) {
            CounterRng rng(CounterRng::derive(seed, {0x7ab1eull, (uint64_t)x, (uint64_t)y}));
            size_t base = t.index(x, y, 0, 0);
            multinomial_counts(exact.probs.data() + base, cells, shots, rng, t.counts.data() + base,
                               parallel);
            for (int c = 0; c < cells; c++) {
                t.probs[base + c] =
                    static_cast<double>(t.counts[base + c]) / static_cast<double>(shots);
            }
        }
    }
    t.validate();
    return t;
}

}  // namespace

CorrelationTable sample_counts(const CorrelationTable &exact, long long shots, uint64_t seed) {
    return sample_counts_impl(exact, shots, seed, true);
}

CorrelationTable sample_counts_serial(const CorrelationTable &exact, long long shots,
                                      uint64_t seed) {
    return sample_counts_impl(exact, shots, seed, false);
}

double visibility_for_purity(double target_purity, size_t dim) {
    if (dim < 2) {
        throw std::invalid_argument("visibility_for_purity: dim must be >= 2");
    }
    double lo = 1.0 / static_cast<double>(dim);
    if (!(target_purity > lo && target_purity <= 1.0)) {
        throw std::invalid_argument("visibility_for_purity: target purity out of (1/dim, 1]");
    }
    // purity(v rho_pure + (1-v) I/dim) = v^2 + (1 - v^2)/dim.
    double v2 = (static_cast<double>(dim) * target_purity - 1.0) / (static_cast<double>(dim) - 1.0);
    return std::sqrt(v2);
}

DensityMatrix apply_channels(const DensityMatrix &rho, const NoiseSpec &spec) {
    spec.validate();
    DensityMatrix out = rho;
    if (spec.white_noise_v.has_value()) {
        out = mix_white(out, *spec.white_noise_v);
    }
    if (spec.dephasing_lambda.has_value()) {
        out = dephase(out, *spec.dephasing_lambda);
    }
    return out;
}

}  // namespace bellst
