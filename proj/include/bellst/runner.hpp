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

#ifndef BELLST_RUNNER_HPP
#define BELLST_RUNNER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bellst/highdim.hpp"
#include "bellst/noise.hpp"

#include "json.hpp"

namespace bellst {

/// One target state of an experiment: a Schmidt angle for qubit runs, a
/// coefficient vector for qudit runs.
struct StateSpec {
    std::optional<double> theta;        // qubit
    std::vector<double> coeffs;         // qudit (normalized at parse time)
};

/// Parsed and validated experiment description. See docs/config.md for the
/// JSON schema ("bellst-config/v1").
struct ExperimentConfig {
    std::string kind;  // "qubit" or "qudit"
    int d = 2;
    std::vector<StateSpec> states;
    NoiseSpec noise;
    /// Qubit runs only: number of Haar-random local unitary pairs per state
    /// under which the certification is repeated with conjugated settings
    /// (count = 0 disables), and the seed of the unitary stream.
    int local_unitary_count = 0;
    uint64_t local_unitary_seed = 0;
    /// Qubit runs only: discover settings by see-saw instead of building
    /// them from the intended angle.
    bool reoptimize = false;
    /// Qudit runs only: coefficient assembly mode.
    PairingMode pairing_mode = PairingMode::primary_only;
    uint64_t seed = 0;
    // Output preferences (overridable from the CLI).
    std::string out_dir = ".";
    std::vector<std::string> formats = {"json", "csv"};
    bool emit_tables = false;
    /// Not part of the JSON schema. The `selftest` CLI stage clears it to run
    /// the device-independent pipeline without the trusted tomography
    /// reference.
    bool with_tomography = true;

    static ExperimentConfig from_json_text(const std::string &text);
    static ExperimentConfig from_file(const std::string &path);
    /// Canonical echo of the physics-relevant fields (excludes output paths,
    /// so reports do not depend on where they are written).
    nlohmann::json echo() const;
};

/// Full result document of a run. Stored as a canonical JSON tree
/// ("bellst-report/v1", sorted keys, two-space indent) plus typed accessors
/// for the pieces tests need. Identical config + seed produces a
/// byte-identical serialization; every numeric field is finite (undefined
/// quantities are emitted as null with an accompanying flag).
struct Report {
    nlohmann::json doc;

    std::string to_json_text() const { return doc.dump(2) + "\n"; }
    static Report from_json_text(const std::string &text);
    /// Flat per-state CSV at 12 significant digits. Qubit runs with local
    /// unitary variants emit one angle column for tomography plus one per
    /// variant; plain runs emit the scalar summary columns; qudit runs emit
    /// true/tomography/self-test coefficient columns.
    std::string to_csv_text() const;

    bool operator==(const Report &other) const { return doc == other.doc; }
};

/// Execute the experiment described by the config. Deterministic given
/// (config, seed) for any OpenMP thread count.
Report run_experiment(const ExperimentConfig &config);

/// Also capture the correlation tables generated along the way (base table
/// per state) for emission; used when config.emit_tables is set.
struct RunOutput {
    Report report;
    std::vector<CorrelationTable> base_tables;  // one per state
};
RunOutput run_experiment_with_tables(const ExperimentConfig &config);

/// Write the report (and optionally tables) into `dir` in the requested
/// formats ("json", "csv"). Returns the paths written. Throws IoError.
std::vector<std::string> emit_report(const RunOutput &out, const std::string &dir,
                                     const std::vector<std::string> &formats, bool emit_tables);

}  // namespace bellst

#endif
