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

#include "bellst/bell.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "bellst/errors.hpp"
#include "json.hpp"

namespace bellst {

void ProjectiveMeasurement::validate(double tol) const {
    if (projectors.empty()) {
        throw std::invalid_argument("ProjectiveMeasurement: no projectors");
    }
    size_t d = projectors[0].rows();
    ComplexMatrix sum(d, d);
    for (const auto &p : projectors) {
        if (p.rows() != d || p.cols() != d) {
            throw std::invalid_argument("ProjectiveMeasurement: inconsistent dimensions");
        }
        if (p.hermiticity_defect() > tol) {
            throw std::invalid_argument("ProjectiveMeasurement: projector not Hermitian");
        }
        if ((p * p - p).max_abs() > tol) {
            throw std::invalid_argument("ProjectiveMeasurement: projector not idempotent");
        }
        sum += p;
    }
    for (size_t i = 0; i < projectors.size(); i++) {
        for (size_t j = i + 1; j < projectors.size(); j++) {
            if ((projectors[i] * projectors[j]).max_abs() > tol) {
                throw std::invalid_argument("ProjectiveMeasurement: projectors not orthogonal");
            }
        }
    }
    if ((sum - ComplexMatrix::identity(d)).max_abs() > tol) {
        throw std::invalid_argument("ProjectiveMeasurement: projectors do not sum to identity");
    }
}

ComplexMatrix ProjectiveMeasurement::observable() const {
    if (projectors.size() != 2) {
        throw std::invalid_argument("ProjectiveMeasurement::observable: needs exactly 2 outcomes");
    }
    return projectors[0] - projectors[1];
}

ProjectiveMeasurement ProjectiveMeasurement::from_observable(const ComplexMatrix &obs) {
    size_t d = obs.rows();
    ComplexMatrix id = ComplexMatrix::identity(d);
    ProjectiveMeasurement m;
    m.projectors.push_back(0.5 * (id + obs));
    m.projectors.push_back(0.5 * (id - obs));
    return m;
}

ProjectiveMeasurement ProjectiveMeasurement::conjugated(const ComplexMatrix &u) const {
    ProjectiveMeasurement out;
    ComplexMatrix ud = u.adjoint();
    for (const auto &p : projectors) {
        out.projectors.push_back(u * p * ud);
    }
    return out;
}

void CorrelationTable::validate() const {
    if (scenario.settings_a <= 0 || scenario.settings_b <= 0 || scenario.outcomes <= 0) {
        throw std::invalid_argument("CorrelationTable: empty scenario");
    }
    if (probs.size() != static_cast<size_t>(scenario.table_size())) {
        throw std::invalid_argument("CorrelationTable: probs size does not match scenario");
    }
    if (source.has_value()) {
        if (counts.size() != probs.size()) {
            throw std::invalid_argument("CorrelationTable: sampled table missing counts");
        }
        if (source->shots_per_setting <= 0) {
            throw std::invalid_argument("CorrelationTable: shots_per_setting must be positive");
        }
    } else if (!counts.empty()) {
        throw std::invalid_argument("CorrelationTable: exact table carries counts");
    }
    for (int x = 0; x < scenario.settings_a; x++) {
        for (int y = 0; y < scenario.settings_b; y++) {
            double sum = 0;
            long long csum = 0;
            for (int a = 0; a < scenario.outcomes; a++) {
                for (int b = 0; b < scenario.outcomes; b++) {
                    double v = p(x, y, a, b);
                    if (!std::isfinite(v) || v < 0) {
                        throw std::invalid_argument(
                            "CorrelationTable: probabilities must be finite and >= 0");
                    }
                    sum += v;
                    if (source.has_value()) {
                        long long c = counts[index(x, y, a, b)];
                        if (c < 0) {
                            throw std::invalid_argument("CorrelationTable: negative count");
                        }
                        csum += c;
                    }
                }
            }
            if (std::abs(sum - 1.0) > 1e-9) {
                throw std::invalid_argument(
                    "CorrelationTable: setting pair does not sum to 1 within 1e-9");
            }
            if (source.has_value() && csum != source->shots_per_setting) {
                throw std::invalid_argument(
                    "CorrelationTable: counts do not sum to shots_per_setting");
            }
        }
    }
}

namespace {

void check_measurement_shapes(const DensityMatrix &rho, const ObservableSet &alice,
                              const ObservableSet &bob, int *outcomes) {
    if (alice.empty() || bob.empty()) {
        throw std::invalid_argument("born_table: each party needs at least one measurement");
    }
    int k = alice[0].outcomes();
    size_t d_a = alice[0].dim();
    size_t d_b = bob[0].dim();
    for (const auto &m : alice) {
        if (m.outcomes() != k || m.dim() != d_a) {
            throw std::invalid_argument("born_table: inconsistent Alice measurements");
        }
    }
    for (const auto &m : bob) {
        if (m.outcomes() != k || m.dim() != d_b) {
            throw std::invalid_argument("born_table: inconsistent Bob measurements");
        }
    }
    if (d_a * d_b != rho.dim()) {
        throw std::invalid_argument("born_table: measurement dimensions do not factor the state");
    }
    *outcomes = k;
}

double born_cell(const DensityMatrix &rho, const ComplexMatrix &pa, const ComplexMatrix &pb) {
    // tr[rho (Pa (x) Pb)] without forming the Kronecker product:
    // sum_{ik,jl} rho(jl, ik) Pa(i, j) Pb(k, l).
    size_t d_a = pa.rows();
    size_t d_b = pb.rows();
    const ComplexMatrix &r = rho.mat();
    cplx s = 0;
    for (size_t i = 0; i < d_a; i++) {
        for (size_t j = 0; j < d_a; j++) {
            cplx paij = pa(i, j);
            if (paij == cplx{}) {
                continue;
            }
            cplx inner = 0;
            for (size_t k = 0; k < d_b; k++) {
                for (size_t l = 0; l < d_b; l++) {
                    inner += r(j * d_b + l, i * d_b + k) * pb(k, l);
                }
            }
            s += paij * inner;
        }
    }
    double v = s.real();
    if (v < 0) {
        if (v < -1e-9) {
            throw NumericError("born_table: probability below -1e-9; invalid inputs");
        }
        v = 0;
    }
    return v;
}

CorrelationTable born_table_impl(const DensityMatrix &rho, const ObservableSet &alice,
                                 const ObservableSet &bob, bool parallel) {
    int outcomes = 0;
    check_measurement_shapes(rho, alice, bob, &outcomes);
    CorrelationTable t;
    t.scenario = BellScenario{static_cast<int>(alice.size()), static_cast<int>(bob.size()),
                              outcomes};
    t.probs.assign(t.scenario.table_size(), 0.0);

    int pairs = t.scenario.settings_a * t.scenario.settings_b;
#pragma omp parallel for schedule(static) if (parallel)
    for (int pair = 0; pair < pairs; pair++) {
        int x = pair / t.scenario.settings_b;
        int y = pair % t.scenario.settings_b;
        for (int a = 0; a < outcomes; a++) {
            for (int b = 0; b < outcomes; b++) {
                t.probs[t.index(x, y, a, b)] =
                    born_cell(rho, alice[x].projectors[a], bob[y].projectors[b]);
            }
        }
    }
    t.validate();
    return t;
}

}  // namespace

CorrelationTable born_table(const DensityMatrix &rho, const ObservableSet &alice,
                            const ObservableSet &bob) {
    return born_table_impl(rho, alice, bob, true);
}

CorrelationTable born_table_serial(const DensityMatrix &rho, const ObservableSet &alice,
                                   const ObservableSet &bob) {
    return born_table_impl(rho, alice, bob, false);
}

TableStatistics statistics(const CorrelationTable &table) {
    if (table.scenario.outcomes != 2) {
        throw std::invalid_argument("statistics: table must have two outcomes");
    }
    const BellScenario &s = table.scenario;
    TableStatistics st;
    st.correlators.assign(static_cast<size_t>(s.settings_a) * s.settings_b, 0.0);
    st.marginals_a.assign(s.settings_a, 0.0);
    st.marginals_b.assign(s.settings_b, 0.0);
    auto sign = [](int o) { return o == 0 ? 1.0 : -1.0; };
    for (int x = 0; x < s.settings_a; x++) {
        for (int y = 0; y < s.settings_b; y++) {
            double e = 0, ma = 0, mb = 0;
            for (int a = 0; a < 2; a++) {
                for (int b = 0; b < 2; b++) {
                    double v = table.p(x, y, a, b);
                    e += sign(a) * sign(b) * v;
                    ma += sign(a) * v;
                    mb += sign(b) * v;
                }
            }
            st.correlators[static_cast<size_t>(x) * s.settings_b + y] = e;
            st.marginals_a[x] += ma / s.settings_b;
            st.marginals_b[y] += mb / s.settings_a;
        }
    }
    return st;
}

NoSignallingReport check_no_signalling(const CorrelationTable &table, double tolerance) {
    const BellScenario &s = table.scenario;
    NoSignallingReport rep;
    rep.tolerance = tolerance;
    for (int x = 0; x < s.settings_a; x++) {
        for (int a = 0; a < s.outcomes; a++) {
            for (int y = 0; y < s.settings_b; y++) {
                for (int y2 = y + 1; y2 < s.settings_b; y2++) {
                    double m1 = 0, m2 = 0;
                    for (int b = 0; b < s.outcomes; b++) {
                        m1 += table.p(x, y, a, b);
                        m2 += table.p(x, y2, a, b);
                    }
                    rep.max_deviation_a = std::max(rep.max_deviation_a, std::abs(m1 - m2));
                }
            }
        }
    }
    for (int y = 0; y < s.settings_b; y++) {
        for (int b = 0; b < s.outcomes; b++) {
            for (int x = 0; x < s.settings_a; x++) {
                for (int x2 = x + 1; x2 < s.settings_a; x2++) {
                    double m1 = 0, m2 = 0;
                    for (int a = 0; a < s.outcomes; a++) {
                        m1 += table.p(x, y, a, b);
                        m2 += table.p(x2, y, a, b);
                    }
                    rep.max_deviation_b = std::max(rep.max_deviation_b, std::abs(m1 - m2));
                }
            }
        }
    }
    rep.pass = rep.max_deviation_a <= tolerance && rep.max_deviation_b <= tolerance;
    return rep;
}

double default_ns_tolerance(const CorrelationTable &table) {
    if (table.source.has_value()) {
        return 5.0 / std::sqrt(static_cast<double>(table.source->shots_per_setting));
    }
    return 1e-12;
}

std::string CorrelationTable::to_json() const {
    validate();
    nlohmann::json j;
    j["$schema"] = "bellst-table/v1";
    j["scenario"] = {{"settings_a", scenario.settings_a},
                     {"settings_b", scenario.settings_b},
                     {"outcomes", scenario.outcomes}};
    if (source.has_value()) {
        j["source"] = {{"kind", "sampled"},
                       {"shots_per_setting", source->shots_per_setting},
                       {"seed", source->seed}};
    } else {
        j["source"] = {{"kind", "exact"}};
    }
    j["probs"] = probs;
    if (source.has_value()) {
        j["counts"] = counts;
    }
    return j.dump(2) + "\n";
}

CorrelationTable CorrelationTable::from_json(const std::string &text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ConfigError(std::string("table JSON parse error: ") + e.what());
    }
    try {
        if (j.at("$schema").get<std::string>() != "bellst-table/v1") {
            throw ConfigError("table JSON: unsupported $schema");
        }
        CorrelationTable t;
        const auto &sc = j.at("scenario");
        t.scenario.settings_a = sc.at("settings_a").get<int>();
        t.scenario.settings_b = sc.at("settings_b").get<int>();
        t.scenario.outcomes = sc.at("outcomes").get<int>();
        const auto &src = j.at("source");
        if (src.at("kind").get<std::string>() == "sampled") {
            SampledSource s;
            s.shots_per_setting = src.at("shots_per_setting").get<long long>();
            s.seed = src.at("seed").get<uint64_t>();
            t.source = s;
            t.counts = j.at("counts").get<std::vector<long long>>();
        }
        t.probs = j.at("probs").get<std::vector<double>>();
        t.validate();
        return t;
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("table JSON: ") + e.what());
    } catch (const std::invalid_argument &e) {
        throw ConfigError(std::string("table JSON: ") + e.what());
    }
}

std::string CorrelationTable::to_csv() const {
    validate();
    std::string out = "x,y,a,b,p\n";
    char buf[96];
    for (int x = 0; x < scenario.settings_a; x++) {
        for (int y = 0; y < scenario.settings_b; y++) {
            for (int a = 0; a < scenario.outcomes; a++) {
                for (int b = 0; b < scenario.outcomes; b++) {
                    std::snprintf(buf, sizeof buf, "%d,%d,%d,%d,%.17g\n", x, y, a, b, p(x, y, a, b));
                    out += buf;
                }
            }
        }
    }
    return out;
}

CorrelationTable CorrelationTable::from_csv(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "x,y,a,b,p") {
        throw ConfigError("table CSV: missing or malformed header");
    }
    int max_x = -1, max_y = -1, max_o = -1;
    struct Row {
        int x, y, a, b;
        double p;
    };
    std::vector<Row> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        Row r;
        if (std::sscanf(line.c_str(), "%d,%d,%d,%d,%lf", &r.x, &r.y, &r.a, &r.b, &r.p) != 5) {
            throw ConfigError("table CSV: malformed row: " + line);
        }
        if (r.x < 0 || r.y < 0 || r.a < 0 || r.b < 0) {
            throw ConfigError("table CSV: negative index in row: " + line);
        }
        max_x = std::max(max_x, r.x);
        max_y = std::max(max_y, r.y);
        max_o = std::max({max_o, r.a, r.b});
        rows.push_back(r);
    }
    CorrelationTable t;
    t.scenario = BellScenario{max_x + 1, max_y + 1, max_o + 1};
    t.probs.assign(t.scenario.table_size(), -1.0);
    for (const Row &r : rows) {
        size_t i = t.index(r.x, r.y, r.a, r.b);
        if (t.probs[i] >= 0) {
            throw ConfigError("table CSV: duplicate cell");
        }
        t.probs[i] = r.p;
    }
    t.validate();
    return t;
}

}  // namespace bellst
