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

#ifndef BELLST_BELL_HPP
#define BELLST_BELL_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bellst/qcore.hpp"

namespace bellst {

/// Measurement scenario shape: number of settings per party and the common
/// number of outcomes per setting.
struct BellScenario {
    int settings_a = 0;
    int settings_b = 0;
    int outcomes = 0;

    bool operator==(const BellScenario &) const = default;
    int table_size() const { return settings_a * settings_b * outcomes * outcomes; }
};

/// One projective measurement: a complete set of orthogonal projectors
/// (one per outcome) summing to the identity.
struct ProjectiveMeasurement {
    std::vector<ComplexMatrix> projectors;

    size_t dim() const { return projectors.empty() ? 0 : projectors[0].rows(); }
    int outcomes() const { return static_cast<int>(projectors.size()); }
    /// Throws std::invalid_argument unless projectors are Hermitian,
    /// idempotent, mutually orthogonal and complete (all to tolerance `tol`).
    void validate(double tol = 1e-10) const;
    /// For two-outcome measurements: the +/-1 observable P0 - P1.
    ComplexMatrix observable() const;
    /// Inverse of `observable`: {(I + O)/2, (I - O)/2}.
    static ProjectiveMeasurement from_observable(const ComplexMatrix &obs);
    /// Conjugate every projector by a unitary: P -> U P U^dagger.
    ProjectiveMeasurement conjugated(const ComplexMatrix &u) const;
};

/// The settings of one party: a list of projective measurements with a
/// common dimension and outcome count.
using ObservableSet = std::vector<ProjectiveMeasurement>;

/// Where the numbers in a CorrelationTable came from: absent = exact Born
/// probabilities; present = multinomial frequencies from n shots per setting
/// pair generated from `seed`.
struct SampledSource {
    long long shots_per_setting = 0;
    uint64_t seed = 0;

    bool operator==(const SampledSource &) const = default;
};

/// Joint conditional distribution P(a, b | x, y) over a Bell scenario,
/// stored flat in (x, y, a, b) order. Sampled tables additionally carry the
/// integer counts the frequencies were derived from.
///
/// Serialization:
///   JSON  - schema tag "bellst-table/v1"; carries scenario, source, probs
///           and (for sampled tables) counts. Lossless.
///   CSV   - header "x,y,a,b,p", one row per cell, probabilities printed
///           with %.17g so parsing reproduces every double bit-exactly.
///           Scenario shape is recovered from the index ranges; the sampling
///           provenance is not representable in this format.
struct CorrelationTable {
    BellScenario scenario;
    std::optional<SampledSource> source;  // nullopt = exact
    std::vector<double> probs;
    std::vector<long long> counts;  // empty for exact tables

    size_t index(int x, int y, int a, int b) const {
        return ((static_cast<size_t>(x) * scenario.settings_b + y) * scenario.outcomes + a) *
                   scenario.outcomes +
               b;
    }
    double p(int x, int y, int a, int b) const { return probs[index(x, y, a, b)]; }

    /// Invariants: correct sizes, probabilities finite and >= 0, each
    /// setting pair sums to 1 within 1e-9, counts (if present) match probs.
    void validate() const;

    std::string to_json() const;
    static CorrelationTable from_json(const std::string &text);
    std::string to_csv() const;
    static CorrelationTable from_csv(const std::string &text);
};

/// Exact Born probabilities P(a, b | x, y) = tr[rho (Pi_a^x (x) Pi_b^y)] for
/// every setting pair. OpenMP-parallel over setting pairs; bit-identical to
/// born_table_serial for any thread count.
CorrelationTable born_table(const DensityMatrix &rho, const ObservableSet &alice,
                            const ObservableSet &bob);

/// Single-threaded reference implementation kept for differential testing.
CorrelationTable born_table_serial(const DensityMatrix &rho, const ObservableSet &alice,
                                   const ObservableSet &bob);

/// Correlators and pooled marginals of a two-outcome table, mapping outcome
/// 0 to +1 and outcome 1 to -1. Marginals are pooled (averaged) over the
/// other party's settings; for a no-signalling table the per-setting
/// marginals agree, so pooling only reduces sampling noise.
struct TableStatistics {
    std::vector<double> correlators;  // [x * settings_b + y]
    std::vector<double> marginals_a;  // <A_x>
    std::vector<double> marginals_b;  // <B_y>

    double correlator(const BellScenario &s, int x, int y) const {
        return correlators[static_cast<size_t>(x) * s.settings_b + y];
    }
};
TableStatistics statistics(const CorrelationTable &table);

/// No-signalling check: Alice's outcome marginals must not depend on Bob's
/// setting choice and vice versa.
struct NoSignallingReport {
    double max_deviation_a = 0;  // max over (a, x, y, y') for Alice marginals
    double max_deviation_b = 0;
    double tolerance = 0;
    bool pass = false;
};
NoSignallingReport check_no_signalling(const CorrelationTable &table, double tolerance);

/// Default tolerance used by the CLI and runner: 1e-12 for exact tables,
/// 5 / sqrt(shots) for sampled ones.
double default_ns_tolerance(const CorrelationTable &table);

}  // namespace bellst

#endif
