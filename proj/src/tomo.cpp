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

#include "bellst/tomo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bellst/errors.hpp"
#include "bellst/rng.hpp"

namespace bellst {

TomographyBasis tomo_projectors(int d) {
    if (d < 2 || d > 4) {
        throw std::invalid_argument("tomo_projectors: d must lie in [2, 4]");
    }
    TomographyBasis basis;
    basis.d = d;
    for (int i = 0; i < d; i++) {
        std::vector<cplx> v(d);
        v[i] = 1.0;
        basis.projectors.push_back(ComplexMatrix::outer(v));
    }
    for (int i = 0; i < d; i++) {
        for (int j = i + 1; j < d; j++) {
            std::vector<cplx> v(d);
            v[i] = M_SQRT1_2;
            v[j] = M_SQRT1_2;
            basis.projectors.push_back(ComplexMatrix::outer(v));
        }
    }
    for (int i = 0; i < d; i++) {
        for (int j = i + 1; j < d; j++) {
            std::vector<cplx> v(d);
            v[i] = M_SQRT1_2;
            v[j] = cplx(0, M_SQRT1_2);
            basis.projectors.push_back(ComplexMatrix::outer(v));
        }
    }

    // Gram matrix and its condition number (real symmetric, PD for an
    // informationally complete family).
    size_t n = basis.projectors.size();
    ComplexMatrix gram(n, n);
    for (size_t k = 0; k < n; k++) {
        for (size_t l = 0; l < n; l++) {
            gram(k, l) = (basis.projectors[k] * basis.projectors[l]).trace().real();
        }
    }
    EigenSystem es = eigh(gram);
    double lo = es.values.front();
    double hi = es.values.back();
    if (lo <= 0) {
        throw NumericError("tomo_projectors: Gram matrix not positive definite");
    }
    basis.gram_condition = hi / lo;
    return basis;
}

namespace {

double expectation(const DensityMatrix &rho, const ComplexMatrix &pa, const ComplexMatrix &pb) {
    // tr[rho (Pa (x) Pb)] contracted without forming the product.
    size_t d = pa.rows();
    const ComplexMatrix &r = rho.mat();
    cplx s = 0;
    for (size_t i = 0; i < d; i++) {
        for (size_t j = 0; j < d; j++) {
            cplx paij = pa(i, j);
            if (paij == cplx{}) {
                continue;
            }
            cplx inner = 0;
            for (size_t k = 0; k < d; k++) {
                for (size_t l = 0; l < d; l++) {
                    inner += r(j * d + l, i * d + k) * pb(k, l);
                }
            }
            s += paij * inner;
        }
    }
    return s.real();
}

// Dual frame D_k = sum_l (G^-1)_{kl} P_l of one party's basis.
std::vector<ComplexMatrix> dual_frame(const TomographyBasis &basis) {
    size_t n = basis.projectors.size();
    ComplexMatrix gram(n, n);
    for (size_t k = 0; k < n; k++) {
        for (size_t l = 0; l < n; l++) {
            gram(k, l) = (basis.projectors[k] * basis.projectors[l]).trace().real();
        }
    }
    // Invert by solving G x = e_k column by column.
    std::vector<ComplexMatrix> duals(n, ComplexMatrix(basis.d, basis.d));
    for (size_t k = 0; k < n; k++) {
        std::vector<cplx> e(n);
        e[k] = 1.0;
        std::vector<cplx> col = solve_linear(gram, e);
        for (size_t l = 0; l < n; l++) {
            duals[k] += col[l] * basis.projectors[l];
        }
    }
    return duals;
}

}  // namespace

std::vector<double> tomo_probe(const DensityMatrix &rho, const TomographyBasis &basis) {
    size_t n = basis.projectors.size();
    if (rho.dim() != static_cast<size_t>(basis.d) * basis.d) {
        throw std::invalid_argument("tomo_probe: state dimension does not match basis");
    }
    std::vector<double> probs(n * n);
#pragma omp parallel for schedule(static)
    for (long long idx = 0; idx < static_cast<long long>(n * n); idx++) {
        size_t k = static_cast<size_t>(idx) / n;
        size_t l = static_cast<size_t>(idx) % n;
        probs[idx] = expectation(rho, basis.projectors[k], basis.projectors[l]);
    }
    return probs;
}

std::vector<double> tomo_probe_sampled(const DensityMatrix &rho, const TomographyBasis &basis,
                                       long long shots, uint64_t seed) {
    if (shots < 1) {
        throw std::invalid_argument("tomo_probe_sampled: shots must be >= 1");
    }
    std::vector<double> exact = tomo_probe(rho, basis);
    size_t n = basis.projectors.size();
    std::vector<double> sampled(exact.size());
#pragma omp parallel for schedule(static)
    for (long long idx = 0; idx < static_cast<long long>(exact.size()); idx++) {
        size_t k = static_cast<size_t>(idx) / n;
        size_t l = static_cast<size_t>(idx) % n;
        CounterRng rng(CounterRng::derive(seed, {0x70b0ull, k, l}));
        double p = std::clamp(exact[idx], 0.0, 1.0);
        long long hits = 0;
        for (long long j = 0; j < shots; j++) {
            if (rng.uniform(static_cast<uint64_t>(j)) < p) {
                hits++;
            }
        }
        sampled[idx] = static_cast<double>(hits) / static_cast<double>(shots);
    }
    return sampled;
}

TomographyResult reconstruct_density(const std::vector<double> &probs,
                                     const TomographyBasis &basis) {
    size_t n = basis.projectors.size();
    if (probs.size() != n * n) {
        throw std::invalid_argument("reconstruct_density: expected d^4 probabilities");
    }
    std::vector<ComplexMatrix> duals = dual_frame(basis);
    size_t dim = static_cast<size_t>(basis.d) * basis.d;
    ComplexMatrix est(dim, dim);
    for (size_t k = 0; k < n; k++) {
        for (size_t l = 0; l < n; l++) {
            double p = probs[k * n + l];
            if (p == 0) {
                continue;
            }
            // est += p * duals[k] (x) duals[l], accumulated in place.
            const ComplexMatrix &da = duals[k];
            const ComplexMatrix &db = duals[l];
            for (size_t i = 0; i < static_cast<size_t>(basis.d); i++) {
                for (size_t j = 0; j < static_cast<size_t>(basis.d); j++) {
                    cplx a = p * da(i, j);
                    if (a == cplx{}) {
                        continue;
                    }
                    for (size_t r = 0; r < static_cast<size_t>(basis.d); r++) {
                        for (size_t c = 0; c < static_cast<size_t>(basis.d); c++) {
                            est(i * basis.d + r, j * basis.d + c) += a * db(r, c);
                        }
                    }
                }
            }
        }
    }
    // Exact probabilities give back exactly the state; sampled ones can
    // leave the cone, so project.
    DensityProjection proj = project_to_density(est);
    return TomographyResult{proj.rho, proj.distance};
}

SchmidtReadout schmidt_readout(const DensityMatrix &rho, int d) {
    if (rho.dim() != static_cast<size_t>(d) * d) {
        throw std::invalid_argument("schmidt_readout: state dimension does not match d");
    }
    SchmidtReadout out;
    out.coeffs_raw.resize(d);
    out.coeffs.resize(d);
    double sector = 0;
    for (int i = 0; i < d; i++) {
        double pop = rho.mat()(static_cast<size_t>(i) * d + i, static_cast<size_t>(i) * d + i)
                         .real();
        pop = std::max(0.0, pop);
        out.coeffs_raw[i] = std::sqrt(pop);
        sector += pop;
    }
    out.sector_mass = sector;
    if (sector <= 0) {
        throw NumericError("schmidt_readout: no population in the diagonal sector");
    }
    double inv = 1.0 / std::sqrt(sector);
    for (int i = 0; i < d; i++) {
        out.coeffs[i] = out.coeffs_raw[i] * inv;
    }

    double p00 = out.coeffs_raw[0] * out.coeffs_raw[0];
    double p11 = d > 1 ? out.coeffs_raw[1] * out.coeffs_raw[1] : 0.0;
    if (p00 < 1e-15) {
        out.theta_degenerate = true;
        out.theta = M_PI / 2;
    } else {
        out.theta = std::atan(std::sqrt(p11 / p00));
    }
    return out;
}

}  // namespace bellst
