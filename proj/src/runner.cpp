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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bellst/errors.hpp"
#include "bellst/rng.hpp"
#include "bellst/tilted_chsh.hpp"
#include "bellst/tomo.hpp"

namespace bellst {

namespace {

using nlohmann::json;

// Child-stream tags; all sampled randomness of a run is derived from
// (config seed, tag, indices) so results are reproducible and independent of
// evaluation order.
constexpr uint64_t kTableTag = 0x7ab1e5ull;
constexpr uint64_t kTomoTag = 0x70a06ull;
constexpr uint64_t kDiscoverTag = 0xd15c0ull;

void require_keys(const json &obj, const char *where,
                  std::initializer_list<const char *> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char *k : allowed) {
            if (it.key() == k) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            throw ConfigError(std::string(where) + ": unknown key \"" + it.key() + '"');
        }
    }
}

double finite_number(const json &v, const char *what) {
    if (!v.is_number()) {
        throw ConfigError(std::string(what) + ": expected a number");
    }
    double x = v.get<double>();
    if (!std::isfinite(x)) {
        throw ConfigError(std::string(what) + ": must be finite");
    }
    return x;
}

/// Numbers that may legitimately be undefined are serialized as null.
json finite_or_null(double v) {
    if (std::isfinite(v)) {
        return v;
    }
    return nullptr;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string &text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object()) {
        throw ConfigError("config: top level must be an object");
    }
    require_keys(j, "config",
                 {"$schema", "kind", "d", "states", "noise", "local_unitaries", "extraction",
                  "reoptimize", "seed", "outputs"});
    if (!j.contains("$schema") || j["$schema"] != "bellst-config/v1") {
        throw ConfigError("config: missing or unsupported $schema (want bellst-config/v1)");
    }

    ExperimentConfig cfg;
    if (!j.contains("kind") || !j["kind"].is_string()) {
        throw ConfigError("config: \"kind\" must be \"qubit\" or \"qudit\"");
    }
    cfg.kind = j["kind"].get<std::string>();
    if (cfg.kind == "qubit") {
        cfg.d = j.value("d", 2);
        if (cfg.d != 2) {
            throw ConfigError("config: qubit runs require d = 2");
        }
    } else if (cfg.kind == "qudit") {
        if (!j.contains("d")) {
            throw ConfigError("config: qudit runs require \"d\"");
        }
        cfg.d = j["d"].get<int>();
        if (cfg.d != 3 && cfg.d != 4) {
            throw ConfigError("config: qudit runs support d in {3, 4}");
        }
    } else {
        throw ConfigError("config: \"kind\" must be \"qubit\" or \"qudit\"");
    }

    if (!j.contains("states") || !j["states"].is_array() || j["states"].empty()) {
        throw ConfigError("config: \"states\" must be a non-empty array");
    }
    for (const auto &s : j["states"]) {
        if (!s.is_object()) {
            throw ConfigError("config: each state must be an object");
        }
        StateSpec spec;
        if (cfg.kind == "qubit") {
            require_keys(s, "state", {"theta"});
            if (!s.contains("theta")) {
                throw ConfigError("config: qubit state needs \"theta\"");
            }
            double theta = finite_number(s["theta"], "theta");
            if (!(theta >= 0 && theta <= M_PI / 4 + 1e-15)) {
                throw ConfigError("config: theta must lie in [0, pi/4]");
            }
            spec.theta = theta;
        } else {
            require_keys(s, "state", {"coeffs"});
            if (!s.contains("coeffs") || !s["coeffs"].is_array() ||
                static_cast<int>(s["coeffs"].size()) != cfg.d) {
                throw ConfigError("config: qudit state needs \"coeffs\" of length d");
            }
            double norm2 = 0;
            for (const auto &c : s["coeffs"]) {
                double v = finite_number(c, "coeffs");
                if (v < 0) {
                    throw ConfigError("config: coeffs must be >= 0");
                }
                spec.coeffs.push_back(v);
                norm2 += v * v;
            }
            if (norm2 <= 0) {
                throw ConfigError("config: coeffs must not all be zero");
            }
            if (std::abs(norm2 - 1.0) > 1e-6) {
                std::fprintf(stderr, "config: renormalizing coeffs (square sum %.6g)\n", norm2);
            }
            double inv = 1.0 / std::sqrt(norm2);
            for (double &v : spec.coeffs) {
                v *= inv;
            }
        }
        cfg.states.push_back(std::move(spec));
    }

    if (j.contains("noise")) {
        const json &n = j["noise"];
        require_keys(n, "noise", {"white_noise_v", "dephasing_lambda", "shots_per_setting"});
        if (n.contains("white_noise_v")) {
            cfg.noise.white_noise_v = finite_number(n["white_noise_v"], "white_noise_v");
        }
        if (n.contains("dephasing_lambda")) {
            cfg.noise.dephasing_lambda = finite_number(n["dephasing_lambda"], "dephasing_lambda");
        }
        if (n.contains("shots_per_setting")) {
            if (n["shots_per_setting"].is_string()) {
                if (n["shots_per_setting"] != "exact") {
                    throw ConfigError("config: shots_per_setting must be an integer or \"exact\"");
                }
            } else if (n["shots_per_setting"].is_number_integer()) {
                cfg.noise.shots_per_setting = n["shots_per_setting"].get<long long>();
            } else {
                throw ConfigError("config: shots_per_setting must be an integer or \"exact\"");
            }
        }
        cfg.noise.validate();
    }

    if (j.contains("local_unitaries")) {
        if (cfg.kind != "qubit") {
            throw ConfigError("config: local_unitaries is only supported for qubit runs");
        }
        const json &lu = j["local_unitaries"];
        require_keys(lu, "local_unitaries", {"count", "seed"});
        cfg.local_unitary_count = lu.value("count", 0);
        if (cfg.local_unitary_count < 0) {
            throw ConfigError("config: local_unitaries.count must be >= 0");
        }
        cfg.local_unitary_seed = lu.value("seed", 0ull);
    }

    if (j.contains("extraction")) {
        if (cfg.kind != "qudit") {
            throw ConfigError("config: extraction options apply to qudit runs only");
        }
        const json &e = j["extraction"];
        require_keys(e, "extraction", {"pairing_mode"});
        std::string mode = e.value("pairing_mode", "primary");
        if (mode == "primary") {
            cfg.pairing_mode = PairingMode::primary_only;
        } else if (mode == "least_squares") {
            cfg.pairing_mode = PairingMode::least_squares;
        } else {
            throw ConfigError("config: pairing_mode must be \"primary\" or \"least_squares\"");
        }
    }

    if (j.contains("reoptimize")) {
        if (cfg.kind != "qubit") {
            throw ConfigError("config: reoptimize applies to qubit runs only");
        }
        if (!j["reoptimize"].is_boolean()) {
            throw ConfigError("config: reoptimize must be a boolean");
        }
        cfg.reoptimize = j["reoptimize"].get<bool>();
    }

    cfg.seed = j.value("seed", 0ull);

    if (j.contains("outputs")) {
        const json &o = j["outputs"];
        require_keys(o, "outputs", {"dir", "formats", "emit_tables"});
        cfg.out_dir = o.value("dir", ".");
        if (o.contains("formats")) {
            cfg.formats.clear();
            for (const auto &f : o["formats"]) {
                std::string fmt = f.get<std::string>();
                if (fmt != "json" && fmt != "csv") {
                    throw ConfigError("config: formats entries must be \"json\" or \"csv\"");
                }
                cfg.formats.push_back(fmt);
            }
            if (cfg.formats.empty()) {
                throw ConfigError("config: formats must not be empty");
            }
        }
        cfg.emit_tables = o.value("emit_tables", false);
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read config file: " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

nlohmann::json ExperimentConfig::echo() const {
    json e;
    e["kind"] = kind;
    e["d"] = d;
    json states_j = json::array();
    for (const auto &s : states) {
        json sj;
        if (kind == "qubit") {
            sj["theta"] = *s.theta;
        } else {
            sj["coeffs"] = s.coeffs;
        }
        states_j.push_back(sj);
    }
    e["states"] = states_j;
    json n;
    if (noise.white_noise_v.has_value()) {
        n["white_noise_v"] = *noise.white_noise_v;
    }
    if (noise.dephasing_lambda.has_value()) {
        n["dephasing_lambda"] = *noise.dephasing_lambda;
    }
    if (noise.shots_per_setting.has_value()) {
        n["shots_per_setting"] = *noise.shots_per_setting;
    } else {
        n["shots_per_setting"] = "exact";
    }
    e["noise"] = n;
    if (kind == "qubit") {
        e["local_unitaries"] = {{"count", local_unitary_count}, {"seed", local_unitary_seed}};
        e["reoptimize"] = reoptimize;
    } else {
        e["pairing_mode"] =
            pairing_mode == PairingMode::primary_only ? "primary" : "least_squares";
    }
    e["seed"] = seed;
    return e;
}

namespace {

/// |<target(a)|target(b)>|^2 for the qubit family: cos^2(a - b).
double angle_fidelity(double a, double b) {
    double c = std::cos(a - b);
    return c * c;
}

json ns_to_json(const NoSignallingReport &ns) {
    return json{{"max_deviation_a", ns.max_deviation_a},
                {"max_deviation_b", ns.max_deviation_b},
                {"tolerance", ns.tolerance},
                {"pass", ns.pass}};
}

json extraction_to_json(const ExtractionResult &e, double theta_true) {
    return json{{"theta", e.theta},
                {"alpha0", e.alpha0},
                {"gap", e.gap},
                {"mean_a0", e.mean_a0},
                {"degenerate_product", e.degenerate_product},
                {"fidelity_to_target", angle_fidelity(e.theta, theta_true)}};
}

DensityMatrix conjugate_state(const DensityMatrix &rho, const ComplexMatrix &ua,
                              const ComplexMatrix &ub) {
    ComplexMatrix u = kron(ua, ub);
    return DensityMatrix::make(u * rho.mat() * u.adjoint());
}

ObservableSet conjugate_settings(const ObservableSet &set, const ComplexMatrix &u) {
    ObservableSet out;
    for (const auto &m : set) {
        out.push_back(m.conjugated(u));
    }
    return out;
}

struct VariantOutcome {
    json record;
    double swap_f = NAN;
};

json run_qubit_state(const ExperimentConfig &cfg, size_t idx, CorrelationTable *base_table_out) {
    double theta_true = *cfg.states[idx].theta;
    DensityMatrix rho_pure = TargetQubitState::make(theta_true).schmidt().to_density();
    DensityMatrix rho = apply_channels(rho_pure, cfg.noise);

    json rec;
    rec["index"] = idx;
    rec["theta_true"] = theta_true;
    rec["purity"] = purity(rho);

    // Settings: built from the intended angle, or discovered blind.
    ObservableSet alice, bob;
    double alpha_used = 0;
    if (cfg.reoptimize) {
        DiscoveredSettings ds =
            discover_settings(rho, 8, CounterRng::derive(cfg.seed, {kDiscoverTag, idx, 0}));
        alice = ds.settings.alice;
        bob = ds.settings.bob;
        alpha_used = ds.settings.alpha;
        rec["reoptimize"] = json{{"alpha", ds.settings.alpha}, {"value", ds.value}, {"gap", ds.gap}};
    } else {
        TiltedSettings ts = optimal_settings(theta_true);
        alice = ts.alice;
        bob = ts.bob;
        alpha_used = ts.alpha;
        rec["settings"] = json{{"alpha", ts.alpha}, {"mu", ts.mu}, {"degenerate", ts.degenerate}};
    }

    CorrelationTable exact = born_table(rho, alice, bob);
    CorrelationTable table = exact;
    if (cfg.noise.shots_per_setting.has_value()) {
        table = sample_counts(exact, *cfg.noise.shots_per_setting,
                              CounterRng::derive(cfg.seed, {kTableTag, idx, 0}));
    }
    if (base_table_out) {
        *base_table_out = table;
    }

    rec["beta"] = beta_value(table, alpha_used);
    rec["quantum_bound"] = quantum_bound(alpha_used);
    rec["classical_bound"] = classical_bound(alpha_used);
    rec["no_signalling"] = ns_to_json(check_no_signalling(table, default_ns_tolerance(table)));

    ExtractionResult ext = extract_theta(table);
    json st = extraction_to_json(ext, theta_true);
    // The swap gadget needs a strictly entangled target; skip it (null) at
    // the product end of the family. Without setting knowledge (reoptimize)
    // the gadget angle is the extracted one.
    auto gadget_angle = [&cfg, theta_true](const ExtractionResult &e) {
        return cfg.reoptimize ? e.theta : theta_true;
    };
    double base_swap = NAN;
    if (gadget_angle(ext) > 1e-9) {
        base_swap = swap_fidelity(rho, alice, bob, gadget_angle(ext));
    }
    st["swap_fidelity"] = finite_or_null(base_swap);
    rec["selftest"] = st;

    // Trusted tomography reference.
    if (cfg.with_tomography) {
        TomographyBasis basis = tomo_projectors(2);
        std::vector<double> probs =
            cfg.noise.shots_per_setting.has_value()
                ? tomo_probe_sampled(rho, basis, *cfg.noise.shots_per_setting,
                                     CounterRng::derive(cfg.seed, {kTomoTag, idx}))
                : tomo_probe(rho, basis);
        TomographyResult tr = reconstruct_density(probs, basis);
        SchmidtReadout readout = schmidt_readout(tr.rho, 2);
        rec["tomography"] = json{
            {"theta", readout.theta},
            {"theta_degenerate", readout.theta_degenerate},
            {"coeffs", readout.coeffs},
            {"sector_mass", readout.sector_mass},
            {"projection_distance", tr.projection_distance},
            {"gram_condition", basis.gram_condition},
            {"state_fidelity",
             fidelity_to_pure(tr.rho, TargetQubitState::make(theta_true).state_vector())},
        };
    }

    // Local-unitary variants: the same certification on the rotated state,
    // with conjugated settings (default) or per-variant discovered settings
    // (reoptimize). Variants are independent, so the loop is parallel; every
    // variant derives its own streams, keeping results thread-count
    // independent.
    int k_count = cfg.local_unitary_count;
    std::vector<VariantOutcome> outcomes(k_count);
    if (k_count > 0) {
#pragma omp parallel for schedule(dynamic, 1)
        for (int k = 0; k < k_count; k++) {
            ComplexMatrix ua = haar_unitary(2, CounterRng::derive(cfg.local_unitary_seed,
                                                                  {idx, (uint64_t)k, 0}));
            ComplexMatrix ub = haar_unitary(2, CounterRng::derive(cfg.local_unitary_seed,
                                                                  {idx, (uint64_t)k, 1}));
            DensityMatrix rho_k = conjugate_state(rho, ua, ub);
            ObservableSet alice_k, bob_k;
            if (cfg.reoptimize) {
                DiscoveredSettings ds_k = discover_settings(
                    rho_k, 8,
                    CounterRng::derive(cfg.seed, {kDiscoverTag, idx, (uint64_t)k + 1}));
                alice_k = ds_k.settings.alice;
                bob_k = ds_k.settings.bob;
            } else {
                alice_k = conjugate_settings(alice, ua);
                bob_k = conjugate_settings(bob, ub);
            }
            CorrelationTable exact_k = born_table_serial(rho_k, alice_k, bob_k);
            CorrelationTable table_k = exact_k;
            if (cfg.noise.shots_per_setting.has_value()) {
                table_k = sample_counts_serial(
                    exact_k, *cfg.noise.shots_per_setting,
                    CounterRng::derive(cfg.seed, {kTableTag, idx, (uint64_t)k + 1}));
            }
            ExtractionResult ext_k = extract_theta(table_k);
            VariantOutcome &vo = outcomes[k];
            vo.record = json{{"index", k}, {"selftest", extraction_to_json(ext_k, theta_true)}};
            if (gadget_angle(ext_k) > 1e-9) {
                vo.swap_f = swap_fidelity(rho_k, alice_k, bob_k, gadget_angle(ext_k));
            }
            vo.record["swap_fidelity"] = finite_or_null(vo.swap_f);
        }
    }
    double fs_min = base_swap;
    json variants = json::array();
    for (const auto &vo : outcomes) {
        variants.push_back(vo.record);
        if (std::isfinite(vo.swap_f)) {
            fs_min = std::isfinite(fs_min) ? std::min(fs_min, vo.swap_f) : vo.swap_f;
        }
    }
    rec["variants"] = variants;
    rec["swap_fidelity_min"] = finite_or_null(fs_min);
    return rec;
}

json block_to_json(const BlockResult &b) {
    json j{{"block", b.block.label()},
           {"weight", b.weight},
           {"weight_spread", b.weight_spread},
           {"theta_block", b.theta_block},
           {"flipped", b.flipped},
           {"skipped", b.skipped},
           {"degenerate", b.degenerate}};
    if (!b.skipped) {
        j["alpha0"] = b.extraction.alpha0;
        j["gap"] = b.extraction.gap;
        j["mean_a0"] = b.extraction.mean_a0;
    }
    return j;
}

json run_qudit_state(const ExperimentConfig &cfg, size_t idx, CorrelationTable *base_table_out) {
    SchmidtState target = SchmidtState::make(cfg.d, cfg.states[idx].coeffs);
    DensityMatrix rho = apply_channels(target.to_density(), cfg.noise);

    json rec;
    rec["index"] = idx;
    rec["coeffs_true"] = target.coeffs;
    rec["purity"] = purity(rho);

    QuditSettings qs = build_qudit_settings(target);
    CorrelationTable exact = born_table(rho, qs.alice, qs.bob);
    CorrelationTable table = exact;
    if (cfg.noise.shots_per_setting.has_value()) {
        table = sample_counts(exact, *cfg.noise.shots_per_setting,
                              CounterRng::derive(cfg.seed, {kTableTag, idx, 0}));
    }
    if (base_table_out) {
        *base_table_out = table;
    }
    rec["no_signalling"] = ns_to_json(check_no_signalling(table, default_ns_tolerance(table)));

    ReconstructedState recon = reconstruct_coefficients(table, cfg.d, cfg.pairing_mode);
    json blocks_p = json::array();
    for (const auto &b : recon.primary_blocks) {
        blocks_p.push_back(block_to_json(b));
    }
    json blocks_s = json::array();
    for (const auto &b : recon.secondary_blocks) {
        blocks_s.push_back(block_to_json(b));
    }
    rec["reconstruction"] = json{
        {"coeffs", recon.coeffs},
        {"consistency_residual", finite_or_null(recon.consistency_residual)},
        {"any_degenerate", recon.any_degenerate},
        {"fidelity_to_target", reconstruction_fidelity(recon, target)},
        {"primary_blocks", blocks_p},
        {"secondary_blocks", blocks_s},
    };

    if (cfg.with_tomography) {
        TomographyBasis basis = tomo_projectors(cfg.d);
        std::vector<double> probs =
            cfg.noise.shots_per_setting.has_value()
                ? tomo_probe_sampled(rho, basis, *cfg.noise.shots_per_setting,
                                     CounterRng::derive(cfg.seed, {kTomoTag, idx}))
                : tomo_probe(rho, basis);
        TomographyResult tr = reconstruct_density(probs, basis);
        SchmidtReadout readout = schmidt_readout(tr.rho, cfg.d);
        rec["tomography"] = json{
            {"coeffs", readout.coeffs},
            {"sector_mass", readout.sector_mass},
            {"projection_distance", tr.projection_distance},
            {"gram_condition", basis.gram_condition},
            {"state_fidelity", fidelity_to_pure(tr.rho, target.to_state_vector())},
        };
    }
    return rec;
}

void check_all_finite(const json &j, const std::string &path) {
    if (j.is_number_float() && !std::isfinite(j.get<double>())) {
        throw NumericError("report: non-finite value at " + path);
    }
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            check_all_finite(it.value(), path + "/" + it.key());
        }
    } else if (j.is_array()) {
        for (size_t i = 0; i < j.size(); i++) {
            check_all_finite(j[i], path + "/" + std::to_string(i));
        }
    }
}

}  // namespace

Report Report::from_json_text(const std::string &text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ConfigError(std::string("report parse error: ") + e.what());
    }
    if (!j.is_object() || !j.contains("$schema") || j["$schema"] != "bellst-report/v1") {
        throw ConfigError("report: missing or unsupported $schema (want bellst-report/v1)");
    }
    Report r;
    r.doc = std::move(j);
    check_all_finite(r.doc, "");
    return r;
}

std::string Report::to_csv_text() const {
    char buf[64];
    auto fmt = [&buf](double v) {
        std::snprintf(buf, sizeof buf, "%.12g", v);
        return std::string(buf);
    };
    std::string out;
    const json &states = doc.at("states");
    std::string kind = doc.at("kind").get<std::string>();
    if (kind == "qubit") {
        int variants = doc.at("config").at("local_unitaries").at("count").get<int>();
        if (variants > 0) {
            out = "state,theta_true,theta_tomo";
            for (int k = 0; k < variants; k++) {
                out += ",theta_st_" + std::to_string(k);
            }
            out += "\n";
            for (const auto &s : states) {
                out += std::to_string(s.at("index").get<int>());
                out += "," + fmt(s.at("theta_true").get<double>());
                out += "," + fmt(s.at("tomography").at("theta").get<double>());
                for (const auto &v : s.at("variants")) {
                    out += "," + fmt(v.at("selftest").at("theta").get<double>());
                }
                out += "\n";
            }
        } else {
            out =
                "state,theta_true,purity,theta_tomo,theta_selftest,alpha0,gap,swap_fidelity,"
                "fidelity_to_target,ns_pass\n";
            for (const auto &s : states) {
                const json &st = s.at("selftest");
                out += std::to_string(s.at("index").get<int>());
                out += "," + fmt(s.at("theta_true").get<double>());
                out += "," + fmt(s.at("purity").get<double>());
                out += "," + fmt(s.at("tomography").at("theta").get<double>());
                out += "," + fmt(st.at("theta").get<double>());
                out += "," + fmt(st.at("alpha0").get<double>());
                out += "," + fmt(st.at("gap").get<double>());
                out += ",";
                out += st.at("swap_fidelity").is_null() ? "nan"
                                                        : fmt(st.at("swap_fidelity").get<double>());
                out += "," + fmt(st.at("fidelity_to_target").get<double>());
                out += ",";
                out += s.at("no_signalling").at("pass").get<bool>() ? "1" : "0";
                out += "\n";
            }
        }
    } else {
        int d = doc.at("d").get<int>();
        out = "state,purity";
        for (const char *group : {"true", "tomo", "st"}) {
            for (int i = 0; i < d; i++) {
                out += ",c" + std::to_string(i) + "_" + group;
            }
        }
        out += ",consistency_residual,fidelity_to_target\n";
        for (const auto &s : states) {
            out += std::to_string(s.at("index").get<int>());
            out += "," + fmt(s.at("purity").get<double>());
            for (const auto &c : s.at("coeffs_true")) {
                out += "," + fmt(c.get<double>());
            }
            for (const auto &c : s.at("tomography").at("coeffs")) {
                out += "," + fmt(c.get<double>());
            }
            for (const auto &c : s.at("reconstruction").at("coeffs")) {
                out += "," + fmt(c.get<double>());
            }
            const json &resid = s.at("reconstruction").at("consistency_residual");
            out += ",";
            out += resid.is_null() ? "nan" : fmt(resid.get<double>());
            out += "," + fmt(s.at("reconstruction").at("fidelity_to_target").get<double>());
            out += "\n";
        }
    }
    return out;
}

RunOutput run_experiment_with_tables(const ExperimentConfig &cfg) {
    RunOutput out;
    json rep;
    rep["$schema"] = "bellst-report/v1";
    rep["kind"] = cfg.kind;
    rep["d"] = cfg.d;
    rep["config"] = cfg.echo();

    json states = json::array();
    out.base_tables.resize(cfg.states.size());
    for (size_t idx = 0; idx < cfg.states.size(); idx++) {
        states.push_back(cfg.kind == "qubit"
                             ? run_qubit_state(cfg, idx, &out.base_tables[idx])
                             : run_qudit_state(cfg, idx, &out.base_tables[idx]));
    }
    rep["states"] = states;
    check_all_finite(rep, "");
    out.report.doc = std::move(rep);
    return out;
}

Report run_experiment(const ExperimentConfig &cfg) {
    return run_experiment_with_tables(cfg).report;
}

std::vector<std::string> emit_report(const RunOutput &out, const std::string &dir,
                                     const std::vector<std::string> &formats, bool emit_tables) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create output directory " + dir + ": " + ec.message());
    }
    auto write_file = [](const fs::path &p, const std::string &content) {
        std::ofstream f(p, std::ios::binary);
        if (!f || !(f << content) || !f.flush()) {
            throw IoError("cannot write " + p.string());
        }
    };

    std::vector<std::string> written;
    for (const std::string &fmt : formats) {
        fs::path p = fs::path(dir) / (fmt == "json" ? "report.json" : "report.csv");
        write_file(p, fmt == "json" ? out.report.to_json_text() : out.report.to_csv_text());
        written.push_back(p.string());
    }
    if (emit_tables) {
        fs::path tdir = fs::path(dir) / "tables";
        fs::create_directories(tdir, ec);
        if (ec) {
            throw IoError("cannot create table directory " + tdir.string() + ": " + ec.message());
        }
        for (size_t i = 0; i < out.base_tables.size(); i++) {
            std::string stem = "state_" + std::to_string(i) + ".table";
            for (const std::string &fmt : formats) {
                fs::path p = tdir / (stem + "." + fmt);
                write_file(p, fmt == "json" ? out.base_tables[i].to_json()
                                            : out.base_tables[i].to_csv());
                written.push_back(p.string());
            }
        }
    }
    return written;
}

}  // namespace bellst
