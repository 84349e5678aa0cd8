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

// Command-line front end. Subcommands expose the pipeline stages separately:
//
//   run       full pipeline from a config file; writes report files
//   selftest  extraction only (from a stored table, or a config without the
//             trusted tomography reference); prints JSON to stdout
//   tomograph trusted tomography readout for a config; prints JSON to stdout
//   check-ns  no-signalling check of a stored table; prints JSON to stdout
//   report    re-render stored report JSON into the requested formats
//
// Exit codes: 0 success, 2 config/usage error, 3 numeric failure, 4 I/O.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bellst/errors.hpp"
#include "bellst/runner.hpp"

namespace {

using bellst::CorrelationTable;
using bellst::ExperimentConfig;
using bellst::Report;
using bellst::RunOutput;
using nlohmann::json;

std::string read_text(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw bellst::IoError("cannot read " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Stored tables are JSON or CSV; dispatch on the leading byte.
CorrelationTable load_table(const std::string &path) {
    std::string text = read_text(path);
    size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        return CorrelationTable::from_json(text);
    }
    return CorrelationTable::from_csv(text);
}

struct Overrides {
    std::optional<uint64_t> seed;
    std::optional<std::string> out_dir;
    std::vector<std::string> formats;
    bool emit_tables = false;
    bool reoptimize = false;

    void apply(ExperimentConfig &cfg) const {
        if (seed) {
            cfg.seed = *seed;
        }
        if (out_dir) {
            cfg.out_dir = *out_dir;
        }
        if (!formats.empty()) {
            for (const auto &f : formats) {
                if (f != "json" && f != "csv") {
                    throw bellst::ConfigError("--format must be json or csv");
                }
            }
            cfg.formats = formats;
        }
        if (emit_tables) {
            cfg.emit_tables = true;
        }
        if (reoptimize) {
            if (cfg.kind != "qubit") {
                throw bellst::ConfigError("--reoptimize applies to qubit runs only");
            }
            cfg.reoptimize = true;
        }
    }
};

int cmd_run(const std::string &path, const Overrides &ov) {
    ExperimentConfig cfg = ExperimentConfig::from_file(path);
    ov.apply(cfg);
    auto t0 = std::chrono::steady_clock::now();
    RunOutput out = bellst::run_experiment_with_tables(cfg);
    std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    // Timing goes to stderr only: report files must be byte-identical across
    // runs of the same config and seed.
    std::fprintf(stderr, "run: %zu state(s) in %.3f s\n", cfg.states.size(), dt.count());
    for (const std::string &p :
         bellst::emit_report(out, cfg.out_dir, cfg.formats, cfg.emit_tables)) {
        std::printf("%s\n", p.c_str());
    }
    return 0;
}

int cmd_selftest(const std::string &path, const Overrides &ov) {
    std::string text = read_text(path);
    size_t first = text.find_first_not_of(" \t\r\n");
    bool is_json = first != std::string::npos && text[first] == '{';
    if (is_json) {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::parse_error &e) {
            throw bellst::ConfigError(std::string("selftest input parse error: ") + e.what());
        }
        std::string schema = j.value("$schema", "");
        if (schema == "bellst-config/v1") {
            ExperimentConfig cfg = ExperimentConfig::from_json_text(text);
            ov.apply(cfg);
            cfg.with_tomography = false;
            Report rep = bellst::run_experiment(cfg);
            json out{{"$schema", "bellst-selftest/v1"}, {"states", rep.doc.at("states")}};
            std::printf("%s\n", out.dump(2).c_str());
            return 0;
        }
        if (schema != "bellst-table/v1") {
            throw bellst::ConfigError("selftest input must be bellst-table/v1, bellst-config/v1 "
                                      "or a CSV table");
        }
    }
    CorrelationTable table =
        is_json ? CorrelationTable::from_json(text) : CorrelationTable::from_csv(text);
    const bellst::BellScenario &sc = table.scenario;
    json out;
    if (sc.settings_a == 2 && sc.settings_b == 2 && sc.outcomes == 2) {
        bellst::ExtractionResult e = bellst::extract_theta(table);
        out = json{{"$schema", "bellst-selftest/v1"},
                   {"theta", e.theta},
                   {"alpha0", e.alpha0},
                   {"gap", e.gap},
                   {"mean_a0", e.mean_a0},
                   {"degenerate_product", e.degenerate_product},
                   {"beta", bellst::beta_value(table, e.alpha0)},
                   {"quantum_bound", bellst::quantum_bound(e.alpha0)},
                   {"classical_bound", bellst::classical_bound(e.alpha0)}};
    } else if (sc.settings_a == 3 && sc.settings_b == 4 &&
               (sc.outcomes == 3 || sc.outcomes == 4)) {
        bellst::ReconstructedState rec = bellst::reconstruct_coefficients(table, sc.outcomes);
        out = json{{"$schema", "bellst-selftest/v1"},
                   {"d", rec.d},
                   {"coeffs", rec.coeffs},
                   {"consistency_residual", std::isfinite(rec.consistency_residual)
                                                ? json(rec.consistency_residual)
                                                : json(nullptr)},
                   {"any_degenerate", rec.any_degenerate}};
    } else {
        throw bellst::ConfigError(
            "selftest table: expected 2x2 settings with 2 outcomes or 3x4 settings with 3 or 4 "
            "outcomes");
    }
    std::printf("%s\n", out.dump(2).c_str());
    return 0;
}

int cmd_tomograph(const std::string &path, const Overrides &ov) {
    ExperimentConfig cfg = ExperimentConfig::from_file(path);
    ov.apply(cfg);
    Report rep = bellst::run_experiment(cfg);
    json states = json::array();
    for (const auto &s : rep.doc.at("states")) {
        json rec{{"index", s.at("index")},
                 {"purity", s.at("purity")},
                 {"tomography", s.at("tomography")}};
        if (s.contains("theta_true")) {
            rec["theta_true"] = s.at("theta_true");
        }
        if (s.contains("coeffs_true")) {
            rec["coeffs_true"] = s.at("coeffs_true");
        }
        states.push_back(rec);
    }
    json out{{"$schema", "bellst-tomograph/v1"}, {"states", states}};
    std::printf("%s\n", out.dump(2).c_str());
    return 0;
}

int cmd_check_ns(const std::string &path, double tol) {
    CorrelationTable table = load_table(path);
    if (!(tol > 0)) {
        tol = bellst::default_ns_tolerance(table);
    }
    bellst::NoSignallingReport ns = bellst::check_no_signalling(table, tol);
    json out{{"$schema", "bellst-ns/v1"},
             {"max_deviation_a", ns.max_deviation_a},
             {"max_deviation_b", ns.max_deviation_b},
             {"tolerance", ns.tolerance},
             {"pass", ns.pass}};
    std::printf("%s\n", out.dump(2).c_str());
    return 0;
}

int cmd_report(const std::string &path, const Overrides &ov) {
    Report rep = Report::from_json_text(read_text(path));
    RunOutput out;
    out.report = rep;
    std::string dir = ov.out_dir.value_or(".");
    std::vector<std::string> formats = ov.formats.empty()
                                           ? std::vector<std::string>{"json", "csv"}
                                           : ov.formats;
    for (const auto &f : formats) {
        if (f != "json" && f != "csv") {
            throw bellst::ConfigError("--format must be json or csv");
        }
    }
    for (const std::string &p : bellst::emit_report(out, dir, formats, false)) {
        std::printf("%s\n", p.c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Bell-inequality self-testing of bipartite entangled states"};
    app.require_subcommand(1);
    app.fallthrough();

    Overrides ov;
    app.add_option("--seed", ov.seed, "Override the config seed");
    app.add_option("--out-dir", ov.out_dir, "Output directory (overrides config)");
    app.add_option("--format", ov.formats, "Output format: json or csv (repeatable)");

    std::string run_path, selftest_path, tomograph_path, ns_path, report_path;
    double ns_tol = -1;

    CLI::App *run = app.add_subcommand("run", "Execute a config; write report files");
    run->add_option("config", run_path, "Config file (bellst-config/v1 JSON)")->required();
    run->add_flag("--emit-tables", ov.emit_tables, "Also write per-state correlation tables");
    run->add_flag("--reoptimize", ov.reoptimize,
                  "Discover settings by see-saw instead of using the target angle");

    CLI::App *selftest =
        app.add_subcommand("selftest", "Run extraction on a stored table or config");
    selftest->add_option("input", selftest_path, "Table or config JSON file")->required();
    selftest->add_flag("--reoptimize", ov.reoptimize,
                       "Discover settings by see-saw instead of using the target angle");

    CLI::App *tomograph =
        app.add_subcommand("tomograph", "Run the trusted tomography readout for a config");
    tomograph->add_option("config", tomograph_path, "Config file (bellst-config/v1 JSON)")
        ->required();

    CLI::App *checkns = app.add_subcommand("check-ns", "No-signalling check of a stored table");
    checkns->add_option("table", ns_path, "Table file (JSON or CSV)")->required();
    checkns->add_option("--tol", ns_tol,
                        "Tolerance (default: 1e-12 exact, 5/sqrt(shots) sampled)");

    CLI::App *report = app.add_subcommand("report", "Re-render stored report JSON");
    report->add_option("report_json", report_path, "Report file (bellst-report/v1 JSON)")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) {
            return cmd_run(run_path, ov);
        }
        if (selftest->parsed()) {
            return cmd_selftest(selftest_path, ov);
        }
        if (tomograph->parsed()) {
            return cmd_tomograph(tomograph_path, ov);
        }
        if (checkns->parsed()) {
            return cmd_check_ns(ns_path, ns_tol);
        }
        if (report->parsed()) {
            return cmd_report(report_path, ov);
        }
    } catch (const bellst::ConfigError &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const bellst::NumericError &e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return 3;
    } catch (const bellst::IoError &e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 4;
    }
    return 2;
}
