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

// Microbenchmarks for the hot kernels. The parallel variants use OpenMP over
// setting pairs; the *_serial twins are the single-threaded references the
// tests compare against, so benching both shows the speedup (and the
// overhead floor when OMP_NUM_THREADS=1).

#include <cmath>

#include "benchmark/benchmark.h"

#include "bellst/bell.hpp"
#include "bellst/highdim.hpp"
#include "bellst/noise.hpp"
#include "bellst/qcore.hpp"
#include "bellst/tilted_chsh.hpp"

namespace {

using namespace bellst;

SchmidtState bench_state() {
    return SchmidtState::make(4, {0.8, 0.4, 0.4, 0.2});
}

void BM_born_table_parallel(benchmark::State &state) {
    SchmidtState st = bench_state();
    QuditSettings qs = build_qudit_settings(st);
    DensityMatrix rho = st.to_density();
    for (auto _ : state) {
        benchmark::DoNotOptimize(born_table(rho, qs.alice, qs.bob));
    }
}
BENCHMARK(BM_born_table_parallel);

void BM_born_table_serial(benchmark::State &state) {
    SchmidtState st = bench_state();
    QuditSettings qs = build_qudit_settings(st);
    DensityMatrix rho = st.to_density();
    for (auto _ : state) {
        benchmark::DoNotOptimize(born_table_serial(rho, qs.alice, qs.bob));
    }
}
BENCHMARK(BM_born_table_serial);

void BM_sample_counts_parallel(benchmark::State &state) {
    TiltedSettings st = optimal_settings(M_PI / 6);
    DensityMatrix rho =
        DensityMatrix::from_pure(TargetQubitState::make(M_PI / 6).state_vector());
    CorrelationTable exact = born_table(rho, st.alice, st.bob);
    long long shots = state.range(0);
    uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_counts(exact, shots, seed++));
    }
    state.SetItemsProcessed(state.iterations() * shots * exact.scenario.settings_a *
                            exact.scenario.settings_b);
}
BENCHMARK(BM_sample_counts_parallel)->Arg(10000)->Arg(1000000);

void BM_sample_counts_serial(benchmark::State &state) {
    TiltedSettings st = optimal_settings(M_PI / 6);
    DensityMatrix rho =
        DensityMatrix::from_pure(TargetQubitState::make(M_PI / 6).state_vector());
    CorrelationTable exact = born_table(rho, st.alice, st.bob);
    long long shots = state.range(0);
    uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_counts_serial(exact, shots, seed++));
    }
    state.SetItemsProcessed(state.iterations() * shots * exact.scenario.settings_a *
                            exact.scenario.settings_b);
}
BENCHMARK(BM_sample_counts_serial)->Arg(10000)->Arg(1000000);

void BM_swap_fidelity(benchmark::State &state) {
    TiltedSettings st = optimal_settings(M_PI / 8);
    DensityMatrix rho =
        DensityMatrix::from_pure(TargetQubitState::make(M_PI / 8).state_vector());
    for (auto _ : state) {
        benchmark::DoNotOptimize(swap_fidelity(rho, st.alice, st.bob, M_PI / 8));
    }
}
BENCHMARK(BM_swap_fidelity);

void BM_reconstruct_coefficients(benchmark::State &state) {
    SchmidtState st = bench_state();
    QuditSettings qs = build_qudit_settings(st);
    CorrelationTable table = born_table(st.to_density(), qs.alice, qs.bob);
    for (auto _ : state) {
        benchmark::DoNotOptimize(reconstruct_coefficients(table, 4));
    }
}
BENCHMARK(BM_reconstruct_coefficients);

void BM_seesaw_maximize(benchmark::State &state) {
    DensityMatrix rho =
        DensityMatrix::from_pure(TargetQubitState::make(M_PI / 6).state_vector());
    for (auto _ : state) {
        benchmark::DoNotOptimize(seesaw_maximize(rho, 1.0, 4, 7));
    }
}
BENCHMARK(BM_seesaw_maximize);

}  // namespace

BENCHMARK_MAIN();
