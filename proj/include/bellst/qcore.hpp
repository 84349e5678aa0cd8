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

#ifndef BELLST_QCORE_HPP
#define BELLST_QCORE_HPP

#include <vector>

#include "bellst/complex_matrix.hpp"

namespace bellst {

// Convention used across the library: a bipartite system with local
// dimensions (d_a, d_b) is indexed jointly as a * d_b + b, i.e. the first
// party owns the most significant index. kron(A, B) follows the same order.

/// Validated quantum state. Construction checks Hermiticity (max entry
/// defect <= 1e-12), unit trace (|tr - 1| <= 1e-12) and positivity
/// (eigenvalues >= -1e-10), then stores the exactly-Hermitian part.
class DensityMatrix {
   public:
    /// Validate and wrap a candidate matrix. Throws std::invalid_argument on
    /// violation.
    static DensityMatrix make(const ComplexMatrix &m);
    /// Rank-one state |v><v| from a normalized state vector (renormalizes,
    /// rejects zero vectors).
    static DensityMatrix from_pure(const std::vector<cplx> &v);
    static DensityMatrix maximally_mixed(size_t dim);

    size_t dim() const { return mat_.rows(); }
    const ComplexMatrix &mat() const { return mat_; }

   private:
    explicit DensityMatrix(ComplexMatrix m) : mat_(std::move(m)) {}
    ComplexMatrix mat_;
};

enum class Party { alice, bob };

/// Trace out one party of a (d_a x d_b)-partitioned state, keeping the other.
ComplexMatrix partial_trace(const ComplexMatrix &rho, size_t d_a, size_t d_b, Party keep);

/// <psi| rho |psi> for a normalized pure reference |psi>.
double fidelity_to_pure(const DensityMatrix &rho, const std::vector<cplx> &psi);

/// tr(rho^2).
double purity(const DensityMatrix &rho);

/// 0.5 * || rho - sigma ||_1 via the eigenvalues of the difference.
double trace_distance(const DensityMatrix &rho, const DensityMatrix &sigma);

/// Frobenius-nearest density matrix to a Hermitian candidate: eigenvalues are
/// projected onto the probability simplex and the matrix is rebuilt in the
/// same eigenbasis. Returns the projected state and the Frobenius distance
/// moved. Used to repair linear-inversion tomography estimates.
struct DensityProjection {
    DensityMatrix rho;
    double distance;
};
DensityProjection project_to_density(const ComplexMatrix &candidate);

/// Bipartite pure state with equal local dimensions, written in its Schmidt
/// basis: sum_i c_i |ii>, all c_i >= 0, sum c_i^2 = 1 (checked to 1e-12).
struct SchmidtState {
    int d = 0;
    std::vector<double> coeffs;

    static SchmidtState make(int d, std::vector<double> coeffs);
    /// State vector in the joint d*d space (index i*d + i carries c_i).
    std::vector<cplx> to_state_vector() const;
    DensityMatrix to_density() const;
};

/// One-parameter family cos(theta)|00> + sin(theta)|11>, theta in [0, pi/4].
/// theta = pi/4 is the maximally entangled pair; theta = 0 a product state.
struct TargetQubitState {
    double theta = 0;

    static TargetQubitState make(double theta);
    SchmidtState schmidt() const { return SchmidtState::make(2, {std::cos(theta), std::sin(theta)}); }
    std::vector<cplx> state_vector() const { return schmidt().to_state_vector(); }
};

}  // namespace bellst

#endif
