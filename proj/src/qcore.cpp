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

#include "bellst/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bellst {

namespace {

constexpr double kHermTol = 1e-12;
constexpr double kTraceTol = 1e-12;
constexpr double kEigTol = 1e-10;

}  // namespace

DensityMatrix DensityMatrix::make(const ComplexMatrix &m) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw std::invalid_argument("DensityMatrix: matrix must be square and non-empty");
    }
    if (!m.is_finite()) {
        throw std::invalid_argument("DensityMatrix: non-finite entries");
    }
    if (m.hermiticity_defect() > kHermTol) {
        throw std::invalid_argument("DensityMatrix: Hermiticity violated beyond 1e-12");
    }
    if (std::abs(m.trace() - cplx(1.0)) > kTraceTol) {
        throw std::invalid_argument("DensityMatrix: trace differs from 1 beyond 1e-12");
    }
    size_t n = m.rows();
    ComplexMatrix h(n, n);
    for (size_t i = 0; i < n; i++) {
        for (size_t j = 0; j < n; j++) {
            h(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
        }
    }
    EigenSystem es = eigh(h);
    for (double v : es.values) {
        if (v < -kEigTol) {
            throw std::invalid_argument("DensityMatrix: negative eigenvalue " + std::to_string(v));
        }
    }
    return DensityMatrix(std::move(h));
}

DensityMatrix DensityMatrix::from_pure(const std::vector<cplx> &v) {
    double n2 = 0;
    for (const auto &a : v) {
        n2 += std::norm(a);
    }
    if (n2 <= 0 || !std::isfinite(n2)) {
        throw std::invalid_argument("DensityMatrix::from_pure: zero or non-finite vector");
    }
    std::vector<cplx> u = v;
    double inv = 1.0 / std::sqrt(n2);
    for (auto &a : u) {
        a *= inv;
    }
    return DensityMatrix(ComplexMatrix::outer(u));
}

DensityMatrix DensityMatrix::maximally_mixed(size_t dim) {
    if (dim == 0) {
        throw std::invalid_argument("DensityMatrix::maximally_mixed: dim must be positive");
    }
    ComplexMatrix m(dim, dim);
    for (size_t i = 0; i < dim; i++) {
        m(i, i) = 1.0 / static_cast<double>(dim);
    }
    return DensityMatrix(std::move(m));
}

ComplexMatrix partial_trace(const ComplexMatrix &rho, size_t d_a, size_t d_b, Party keep) {
    if (rho.rows() != rho.cols() || rho.rows() != d_a * d_b) {
        throw std::invalid_argument("partial_trace: dimensions do not factor the matrix");
    }
    if (keep == Party::alice) {
        ComplexMatrix out(d_a, d_a);
        for (size_t i = 0; i < d_a; i++) {
            for (size_t j = 0; j < d_a; j++) {
                cplx s = 0;
                for (size_t k = 0; k < d_b; k++) {
                    s += rho(i * d_b + k, j * d_b + k);
                }
                out(i, j) = s;
            }
        }
        return out;
    }
    ComplexMatrix out(d_b, d_b);
    for (size_t k = 0; k < d_b; k++) {
        for (size_t l = 0; l < d_b; l++) {
            cplx s = 0;
            for (size_t i = 0; i < d_a; i++) {
                s += rho(i * d_b + k, i * d_b + l);
            }
            out(k, l) = s;
        }
    }
    return out;
}

double fidelity_to_pure(const DensityMatrix &rho, const std::vector<cplx> &psi) {
    if (psi.size() != rho.dim()) {
        throw std::invalid_argument("fidelity_to_pure: vector length mismatch");
    }
    std::vector<cplx> mv = rho.mat().apply(psi);
    cplx f = 0;
    for (size_t i = 0; i < psi.size(); i++) {
        f += std::conj(psi[i]) * mv[i];
    }
    return f.real();
}

double purity(const DensityMatrix &rho) {
    // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
    double s = 0;
    const ComplexMatrix &m = rho.mat();
    for (size_t i = 0; i < m.rows(); i++) {
        for (size_t j = 0; j < m.cols(); j++) {
            s += std::norm(m(i, j));
        }
    }
    return s;
}

double trace_distance(const DensityMatrix &rho, const DensityMatrix &sigma) {
    if (rho.dim() != sigma.dim()) {
        throw std::invalid_argument("trace_distance: dimension mismatch");
    }
    EigenSystem es = eigh(rho.mat() - sigma.mat());
    double s = 0;
    for (double v : es.values) {
        s += std::abs(v);
    }
    return 0.5 * s;
}

DensityProjection project_to_density(const ComplexMatrix &candidate) {
    if (candidate.rows() != candidate.cols()) {
        throw std::invalid_argument("project_to_density: non-square matrix");
    }
    size_t n = candidate.rows();
    EigenSystem es = eigh(candidate);

    // Euclidean projection of the eigenvalue vector onto the probability
    // simplex; combined with keeping the eigenbasis this is the
    // Frobenius-nearest unit-trace PSD matrix.
    std::vector<double> mu = es.values;
    std::sort(mu.begin(), mu.end(), std::greater<double>());
    double cum = 0;
    double tau = 0;
    size_t k_active = 0;
    for (size_t k = 0; k < n; k++) {
        cum += mu[k];
        double cand_tau = (cum - 1.0) / static_cast<double>(k + 1);
        if (mu[k] - cand_tau > 0) {
            tau = cand_tau;
            k_active = k + 1;
        }
    }
    (void)k_active;

    ComplexMatrix out(n, n);
    double dist2 = 0;
    for (size_t k = 0; k < n; k++) {
        double p = std::max(0.0, es.values[k] - tau);
        dist2 += (p - es.values[k]) * (p - es.values[k]);
        if (p == 0) {
            continue;
        }
        for (size_t i = 0; i < n; i++) {
            for (size_t j = 0; j < n; j++) {
                out(i, j) += p * es.vectors(i, k) * std::conj(es.vectors(j, k));
            }
        }
    }
    // Off-eigenbasis parts of the candidate (none when it is Hermitian) are
    // already absorbed by eigh's symmetrization.
    return DensityProjection{DensityMatrix::make(out), std::sqrt(dist2)};
}

SchmidtState SchmidtState::make(int d, std::vector<double> coeffs) {
    if (d < 2) {
        throw std::invalid_argument("SchmidtState: d must be >= 2");
    }
    if (static_cast<int>(coeffs.size()) != d) {
        throw std::invalid_argument("SchmidtState: expected exactly d coefficients");
    }
    double n2 = 0;
    for (double c : coeffs) {
        if (!(c >= 0)) {
            throw std::invalid_argument("SchmidtState: coefficients must be >= 0");
        }
        n2 += c * c;
    }
    if (std::abs(n2 - 1.0) > 1e-12) {
        throw std::invalid_argument("SchmidtState: coefficients must have unit square sum");
    }
    SchmidtState s;
    s.d = d;
    s.coeffs = std::move(coeffs);
    return s;
}

std::vector<cplx> SchmidtState::to_state_vector() const {
    std::vector<cplx> v(static_cast<size_t>(d) * d);
    for (int i = 0; i < d; i++) {
        v[static_cast<size_t>(i) * d + i] = coeffs[i];
    }
    return v;
}

DensityMatrix SchmidtState::to_density() const {
    return DensityMatrix::from_pure(to_state_vector());
}

TargetQubitState TargetQubitState::make(double theta) {
    if (!(theta >= 0 && theta <= M_PI / 4 + 1e-15)) {
        throw std::invalid_argument("TargetQubitState: theta must lie in [0, pi/4]");
    }
    TargetQubitState t;
    t.theta = std::min(theta, M_PI / 4);
    return t;
}

}  // namespace bellst
