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

#include "bellst/runner.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"

#include "bellst/errors.hpp"

using namespace bellst;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    EXPECT_TRUE(in) << p;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string &name) {
    fs::path dir = fs::temp_directory_path() / ("bellst_test_" + name);
    fs::remove_all(dir);
    return dir;
}

void write_file(const fs::path &p, const std::string &content) {
    std::ofstream out(p, std::ios::binary);
    out << content;
}

/// Run the CLI binary; returns its exit code, captures stdout.
int run_cli(const std::string &args, std::string *stdout_text = nullptr) {
    fs::path out = fs::temp_directory_path() / "bellst_test_cli_stdout.txt";
    std::string cmd = std::string(BELLST_CLI_PATH) + " " + args + " > " + out.string() + " 2>/dev/null";
    int status = std::system(cmd.c_str());
    if (stdout_text) {
        *stdout_text = slurp(out);
    }
    return WEXITSTATUS(status);
}

const char *kQubitIdeal = R"({
  "$schema": "bellst-config/v1",
  "kind": "qubit",
  "states": [{"theta": 0.7853981633974483}],
  "seed": 1
})";

const char *kQuditIdeal = R"({
  "$schema": "bellst-config/v1",
  "kind": "qudit",
  "d": 4,
  "states": [{"coeffs": [0.8, 0.4, 0.4, 0.2]}],
  "seed": 2
})";

}  // namespace

TEST(config, parses_and_validates) {
    ExperimentConfig cfg = ExperimentConfig::from_json_text(kQubitIdeal);
    EXPECT_EQ(cfg.kind, "qubit");
    EXPECT_EQ(cfg.d, 2);
    ASSERT_EQ(cfg.states.size(), 1u);
    EXPECT_NEAR(*cfg.states[0].theta, M_PI / 4, 1e-15);
    EXPECT_EQ(cfg.seed, 1u);
    EXPECT_TRUE(cfg.noise.is_trivial());
}

TEST(config, rejects_malformed_documents) {
    EXPECT_THROW(ExperimentConfig::from_json_text("not json"), ConfigError);
    EXPECT_THROW(ExperimentConfig::from_json_text("{}"), ConfigError);
    // Wrong schema tag.
    EXPECT_THROW(ExperimentConfig::from_json_text(
                     R"({"$schema":"nope/v1","kind":"qubit","states":[{"theta":0.1}]})"),
                 ConfigError);
    // Unknown key.
    EXPECT_THROW(
        ExperimentConfig::from_json_text(
            R"({"$schema":"bellst-config/v1","kind":"qubit","states":[{"theta":0.1}],"junk":0})"),
        ConfigError);
    // Out-of-range angle.
    EXPECT_THROW(ExperimentConfig::from_json_text(
                     R"({"$schema":"bellst-config/v1","kind":"qubit","states":[{"theta":1.0}]})"),
                 ConfigError);
    // Qudit without d.
    EXPECT_THROW(ExperimentConfig::from_json_text(
                     R"({"$schema":"bellst-config/v1","kind":"qudit","states":[{"coeffs":[1,0,0]}]})"),
                 ConfigError);
    // Wrong coefficient count.
    EXPECT_THROW(
        ExperimentConfig::from_json_text(
            R"({"$schema":"bellst-config/v1","kind":"qudit","d":4,"states":[{"coeffs":[1,0,0]}]})"),
        ConfigError);
    // Qubit-only options on qudit runs.
    EXPECT_THROW(
        ExperimentConfig::from_json_text(
            R"({"$schema":"bellst-config/v1","kind":"qudit","d":3,"states":[{"coeffs":[1,0,0]}],"reoptimize":true})"),
        ConfigError);
    EXPECT_THROW(
        ExperimentConfig::from_json_text(
            R"({"$schema":"bellst-config/v1","kind":"qudit","d":3,"states":[{"coeffs":[1,0,0]}],"local_unitaries":{"count":2}})"),
        ConfigError);
    // Qudit-only options on qubit runs.
    EXPECT_THROW(
        ExperimentConfig::from_json_text(
            R"({"$schema":"bellst-config/v1","kind":"qubit","states":[{"theta":0.1}],"extraction":{"pairing_mode":"primary"}})"),
        ConfigError);
    // Invalid pairing mode.
    EXPECT_THROW(
        ExperimentConfig::from_json_text(
            R"({"$schema":"bellst-config/v1","kind":"qudit","d":3,"states":[{"coeffs":[1,0,0]}],"extraction":{"pairing_mode":"magic"}})"),
        ConfigError);
    // Empty formats.
    EXPECT_THROW(
        ExperimentConfig::from_json_text(
            R"({"$schema":"bellst-config/v1","kind":"qubit","states":[{"theta":0.1}],"outputs":{"formats":[]}})"),
        ConfigError);
}

TEST(config, renormalizes_coefficients) {
    ExperimentConfig cfg = ExperimentConfig::from_json_text(
        R"({"$schema":"bellst-config/v1","kind":"qudit","d":3,"states":[{"coeffs":[2,1,1]}]})");
    double n2 = 0;
    for (double c : cfg.states[0].coeffs) {
        n2 += c * c;
    }
    EXPECT_NEAR(n2, 1.0, 1e-12);
    EXPECT_NEAR(cfg.states[0].coeffs[0] / cfg.states[0].coeffs[1], 2.0, 1e-12);
}

TEST(config, echo_excludes_outputs) {
    ExperimentConfig cfg = ExperimentConfig::from_json_text(
        R"({"$schema":"bellst-config/v1","kind":"qubit","states":[{"theta":0.2}],
            "outputs":{"dir":"/tmp/somewhere","formats":["csv"],"emit_tables":true}})");
    json e = cfg.echo();
    EXPECT_FALSE(e.contains("outputs"));
    EXPECT_EQ(e["kind"], "qubit");
    EXPECT_EQ(e["noise"]["shots_per_setting"], "exact");
    EXPECT_TRUE(e.contains("reoptimize"));
    EXPECT_EQ(cfg.out_dir, "/tmp/somewhere");
    EXPECT_EQ(cfg.formats, std::vector<std::string>{"csv"});
    EXPECT_TRUE(cfg.emit_tables);
}

TEST(run_experiment, ideal_qubit_certifies_bell_pair) {
    ExperimentConfig cfg = ExperimentConfig::from_json_text(kQubitIdeal);
    Report rep = run_experiment(cfg);
    const json &s = rep.doc.at("states").at(0);
    EXPECT_NEAR(s.at("selftest").at("theta").get<double>(), M_PI / 4, 1e-7);
    EXPECT_NEAR(s.at("tomography").at("theta").get<double>(), M_PI / 4, 1e-10);
    EXPECT_NEAR(s.at("selftest").at("swap_fidelity").get<double>(), 1.0, 1e-9);
    EXPECT_NEAR(s.at("selftest").at("fidelity_to_target").get<double>(), 1.0, 1e-12);
    EXPECT_TRUE(s.at("no_signalling").at("pass").get<bool>());
    EXPECT_LT(s.at("selftest").at("gap").get<double>(), 1e-9);
    EXPECT_NEAR(s.at("purity").get<double>(), 1.0, 1e-12);
}

TEST(run_experiment, ideal_qudit_reconstructs_coefficients) {
    ExperimentConfig cfg = ExperimentConfig::from_json_text(kQuditIdeal);
    Report rep = run_experiment(cfg);
    const json &s = rep.doc.at("states").at(0);
    const json &rc = s.at("reconstruction");
    std::vector<double> expect = {0.8, 0.4, 0.4, 0.2};
    for (int i = 0; i < 4; i++) {
        EXPECT_NEAR(rc.at("coeffs").at(i).get<double>(), expect[i], 1e-6);
        EXPECT_NEAR(s.at("tomography").at("coeffs").at(i).get<double>(), expect[i], 1e-6);
    }
    EXPECT_LT(rc.at("consistency_residual").get<double>(), 1e-6);
    EXPECT_GT(rc.at("fidelity_to_target").get<double>(), 1.0 - 1e-9);
    EXPECT_TRUE(s.at("no_signalling").at("pass").get<bool>());
}

TEST(run_experiment, product_state_flags_degenerate) {
    ExperimentConfig cfg = ExperimentConfig::from_json_text(
        R"({"$schema":"bellst-config/v1","kind":"qubit","states":[{"theta":0.0}]})");
    Report rep = run_experiment(cfg);
    const json &s = rep.doc.at("states").at(0);
    EXPECT_TRUE(s.at("selftest").at("degenerate_product").get<bool>());
    EXPECT_TRUE(s.at("selftest").at("swap_fidelity").is_null());
    EXPECT_TRUE(s.at("swap_fidelity_min").is_null());
    EXPECT_NEAR(s.at("selftest").at("theta").get<double>(), 0.0, 1e-12);
}

TEST(run_experiment, variants_match_base_angle_exactly) {
    ExperimentConfig cfg = ExperimentConfig::from_json_text(
        R"({"$schema":"bellst-config/v1","kind":"qubit","states":[{"theta":0.5}],
            "local_unitaries":{"count":4,"seed":12},"seed":3})");
    Report rep = run_experiment(cfg);
    const json &s = rep.doc.at("states").at(0);
    ASSERT_EQ(s.at("variants").size(), 4u);
    for (const auto &v : s.at("variants")) {
        EXPECT_NEAR(v.at("selftest").at("theta").get<double>(), 0.5, 1e-7);
        EXPECT_NEAR(v.at("swap_fidelity").get<double>(), 1.0, 1e-9);
    }
    EXPECT_NEAR(s.at("swap_fidelity_min").get<double>(), 1.0, 1e-9);
}

TEST(run_experiment, deterministic_documents) {
    ExperimentConfig cfg = ExperimentConfig::from_json_text(
        R"({"$schema":"bellst-config/v1","kind":"qubit","states":[{"theta":0.39269908169872414}],
            "local_unitaries":{"count":2,"seed":8},"noise":{"shots_per_setting":10000},"seed":9})");
    Report a = run_experiment(cfg);
    Report b = run_experiment(cfg);
    EXPECT_TRUE(a == b);
    EXPECT_EQ(a.to_json_text(), b.to_json_text());
    EXPECT_EQ(a.to_csv_text(), b.to_csv_text());
}

TEST(report, json_roundtrip_is_exact) {
    ExperimentConfig cfg = ExperimentConfig::from_json_text(kQuditIdeal);
    Report rep = run_experiment(cfg);
    Report back = Report::from_json_text(rep.to_json_text());
    EXPECT_TRUE(back == rep);
    EXPECT_EQ(back.to_json_text(), rep.to_json_text());
}

TEST(report, rejects_wrong_schema) {
    EXPECT_THROW(Report::from_json_text(R"({"$schema":"bellst-config/v1"})"), ConfigError);
    EXPECT_THROW(Report::from_json_text("[]"), ConfigError);
}

TEST(report, csv_variant_layout) {
    ExperimentConfig cfg = ExperimentConfig::from_json_text(
        R"({"$schema":"bellst-config/v1","kind":"qubit","states":[{"theta":0.5}],
            "local_unitaries":{"count":3,"seed":4},"seed":5})");
    std::string csv = run_experiment(cfg).to_csv_text();
    std::istringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    // One tomography angle plus one column per variant.
    EXPECT_EQ(header, "state,theta_true,theta_tomo,theta_st_0,theta_st_1,theta_st_2");
    std::string row;
    std::getline(lines, row);
    EXPECT_EQ(std::count(row.begin(), row.end(), ','), 5);
}

TEST(report, csv_plain_and_qudit_layouts) {
    ExperimentConfig cfg = ExperimentConfig::from_json_text(kQubitIdeal);
    std::string csv = run_experiment(cfg).to_csv_text();
    EXPECT_EQ(csv.rfind("state,theta_true,purity,theta_tomo,theta_selftest,alpha0,gap,"
                        "swap_fidelity,fidelity_to_target,ns_pass\n",
                        0),
              0u);

    ExperimentConfig qd = ExperimentConfig::from_json_text(kQuditIdeal);
    std::string qcsv = run_experiment(qd).to_csv_text();
    EXPECT_EQ(qcsv.rfind("state,purity,c0_true,c1_true,c2_true,c3_true,c0_tomo,c1_tomo,c2_tomo,"
                         "c3_tomo,c0_st,c1_st,c2_st,c3_st,consistency_residual,"
                         "fidelity_to_target\n",
                         0),
              0u);
}

TEST(report, empty_state_list_renders_valid_files) {
    Report rep;
    rep.doc = json{{"$schema", "bellst-report/v1"},
                   {"kind", "qubit"},
                   {"d", 2},
                   {"config", json{{"local_unitaries", json{{"count", 0}, {"seed", 0}}}}},
                   {"states", json::array()}};
    std::string csv = rep.to_csv_text();
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1);  // header only

    RunOutput out;
    out.report = rep;
    fs::path dir = fresh_dir("empty");
    std::vector<std::string> written = emit_report(out, dir.string(), {"json", "csv"}, false);
    ASSERT_EQ(written.size(), 2u);
    EXPECT_EQ(slurp(written[0]), rep.to_json_text());
    EXPECT_EQ(slurp(written[1]), csv);
}

TEST(emit_report, writes_requested_formats_and_tables) {
    ExperimentConfig cfg = ExperimentConfig::from_json_text(kQubitIdeal);
    RunOutput out = run_experiment_with_tables(cfg);
    fs::path dir = fresh_dir("emit");
    std::vector<std::string> written = emit_report(out, dir.string(), {"json", "csv"}, true);
    // report.json, report.csv, one table in each format.
    ASSERT_EQ(written.size(), 4u);
    EXPECT_TRUE(fs::exists(dir / "report.json"));
    EXPECT_TRUE(fs::exists(dir / "tables" / "state_0.table.json"));
    EXPECT_TRUE(fs::exists(dir / "tables" / "state_0.table.csv"));
    // The emitted table parses back to the run's base table.
    CorrelationTable t = CorrelationTable::from_json(slurp(dir / "tables" / "state_0.table.json"));
    EXPECT_EQ(t.probs, out.base_tables[0].probs);
}

TEST(emit_report, unwritable_directory_is_io_error) {
    ExperimentConfig cfg = ExperimentConfig::from_json_text(kQubitIdeal);
    RunOutput out = run_experiment_with_tables(cfg);
    EXPECT_THROW(emit_report(out, "/proc/1/nope", {"json"}, false), IoError);
}

TEST(cli, run_writes_deterministic_files) {
    fs::path dir = fresh_dir("cli_run");
    fs::create_directories(dir);
    fs::path config = dir / "config.json";
    write_file(config, R"({
      "$schema": "bellst-config/v1",
      "kind": "qubit",
      "states": [{"theta": 0.39269908169872414}],
      "local_unitaries": {"count": 2, "seed": 6},
      "noise": {"shots_per_setting": 10000},
      "seed": 13
    })");
    ASSERT_EQ(run_cli("run " + config.string() + " --out-dir " + (dir / "a").string() +
                      " --emit-tables"),
              0);
    ASSERT_EQ(run_cli("run " + config.string() + " --out-dir " + (dir / "b").string() +
                      " --emit-tables"),
              0);
    for (const char *rel : {"report.json", "report.csv", "tables/state_0.table.json",
                            "tables/state_0.table.csv"}) {
        EXPECT_EQ(slurp(dir / "a" / rel), slurp(dir / "b" / rel)) << rel;
    }
    // Seed override changes the sampled numbers.
    ASSERT_EQ(run_cli("run " + config.string() + " --out-dir " + (dir / "c").string() +
                      " --seed 14"),
              0);
    EXPECT_NE(slurp(dir / "a" / "report.json"), slurp(dir / "c" / "report.json"));
}

TEST(cli, selftest_and_check_ns_consume_emitted_tables) {
    fs::path dir = fresh_dir("cli_table");
    fs::create_directories(dir);
    fs::path config = dir / "config.json";
    write_file(config, R"({
      "$schema": "bellst-config/v1",
      "kind": "qubit",
      "states": [{"theta": 0.5}],
      "seed": 17
    })");
    ASSERT_EQ(run_cli("run " + config.string() + " --out-dir " + dir.string() +
                      " --emit-tables"),
              0);
    fs::path table = dir / "tables" / "state_0.table.json";

    std::string out;
    ASSERT_EQ(run_cli("selftest " + table.string(), &out), 0);
    json st = json::parse(out);
    EXPECT_EQ(st.at("$schema"), "bellst-selftest/v1");
    EXPECT_NEAR(st.at("theta").get<double>(), 0.5, 1e-9);

    ASSERT_EQ(run_cli("check-ns " + table.string(), &out), 0);
    json ns = json::parse(out);
    EXPECT_TRUE(ns.at("pass").get<bool>());

    // CSV tables work too.
    ASSERT_EQ(run_cli("check-ns " + (dir / "tables" / "state_0.table.csv").string(), &out), 0);
    EXPECT_TRUE(json::parse(out).at("pass").get<bool>());
}

TEST(cli, selftest_reconstructs_qudit_tables) {
    fs::path dir = fresh_dir("cli_qudit_table");
    fs::create_directories(dir);
    fs::path config = dir / "config.json";
    write_file(config, kQuditIdeal);
    ASSERT_EQ(run_cli("run " + config.string() + " --out-dir " + dir.string() +
                      " --emit-tables"),
              0);
    std::vector<double> expect = {0.8, 0.4, 0.4, 0.2};
    for (const char *rel : {"tables/state_0.table.json", "tables/state_0.table.csv"}) {
        std::string out;
        ASSERT_EQ(run_cli("selftest " + (dir / rel).string(), &out), 0) << rel;
        json st = json::parse(out);
        EXPECT_EQ(st.at("$schema"), "bellst-selftest/v1");
        EXPECT_EQ(st.at("d"), 4);
        for (int i = 0; i < 4; i++) {
            EXPECT_NEAR(st.at("coeffs").at(i).get<double>(), expect[i], 1e-6) << rel;
        }
        EXPECT_LT(st.at("consistency_residual").get<double>(), 1e-6);
    }
}

TEST(cli, selftest_config_omits_tomography) {
    fs::path dir = fresh_dir("cli_selftest");
    fs::create_directories(dir);
    fs::path config = dir / "config.json";
    write_file(config, kQubitIdeal);
    std::string out;
    ASSERT_EQ(run_cli("selftest " + config.string(), &out), 0);
    json doc = json::parse(out);
    const json &s = doc.at("states").at(0);
    EXPECT_FALSE(s.contains("tomography"));
    EXPECT_NEAR(s.at("selftest").at("theta").get<double>(), M_PI / 4, 1e-7);
}

TEST(cli, report_rerender_is_byte_stable) {
    fs::path dir = fresh_dir("cli_report");
    fs::create_directories(dir);
    fs::path config = dir / "config.json";
    write_file(config, kQuditIdeal);
    ASSERT_EQ(run_cli("run " + config.string() + " --out-dir " + (dir / "a").string()), 0);
    ASSERT_EQ(run_cli("report " + (dir / "a" / "report.json").string() + " --out-dir " +
                      (dir / "b").string()),
              0);
    EXPECT_EQ(slurp(dir / "a" / "report.json"), slurp(dir / "b" / "report.json"));
    EXPECT_EQ(slurp(dir / "a" / "report.csv"), slurp(dir / "b" / "report.csv"));
}

TEST(cli, exit_codes) {
    fs::path dir = fresh_dir("cli_exit");
    fs::create_directories(dir);
    EXPECT_EQ(run_cli("run /definitely/missing.json"), 4);
    fs::path bad = dir / "bad.json";
    write_file(bad, R"({"$schema":"bellst-config/v1","kind":"qubit","states":[{"theta":9}]})");
    EXPECT_EQ(run_cli("run " + bad.string()), 2);
    EXPECT_EQ(run_cli("frobnicate"), 2);
    fs::path ok = dir / "ok.json";
    write_file(ok, kQubitIdeal);
    EXPECT_EQ(run_cli("run " + ok.string() + " --out-dir /proc/1/nope"), 4);
    EXPECT_EQ(run_cli("--help"), 0);
}
