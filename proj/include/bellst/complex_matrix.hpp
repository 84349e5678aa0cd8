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

#ifndef BELLST_COMPLEX_MATRIX_HPP
#define BELLST_COMPLEX_MATRIX_HPP

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace bellst {

using cplx = std::complex<double>;

/// Dense row-major complex matrix sized for small quantum systems (dim <= 16
/// in this library). Deliberately minimal: the operations below are the only
/// ones the physics layers need, and keeping the type concrete makes numeric
/// behaviour easy to audit.
class ComplexMatrix {
   public:
    ComplexMatrix() : rows_(0), cols_(0) {}
    ComplexMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static ComplexMatrix identity(size_t n);
    static ComplexMatrix zero(size_t rows, size_t cols) { return ComplexMatrix(rows, cols); }
    /// Build from nested initializer lists; rows must have equal length.
    static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows);
    /// |v><v| for a column vector v (no normalization applied).
    static ComplexMatrix outer(const std::vector<cplx> &v);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    cplx &operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }
    const cplx &operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }

    ComplexMatrix operator+(const ComplexMatrix &other) const;
    ComplexMatrix operator-(const ComplexMatrix &other) const;
    ComplexMatrix operator*(const ComplexMatrix &other) const;
    ComplexMatrix &operator+=(const ComplexMatrix &other);
    friend ComplexMatrix operator*(cplx scalar, const ComplexMatrix &m);

    ComplexMatrix adjoint() const;
    cplx trace() const;

    double max_abs() const;
    double frobenius_norm() const;
    /// Largest |M(r,c) - conj(M(c,r))| over all entries; 0 for exactly
    /// Hermitian matrices.
    double hermiticity_defect() const;
    bool is_finite() const;

    /// Apply v -> M v to a column vector.
    std::vector<cplx> apply(const std::vector<cplx> &v) const;

   private:
    size_t rows_, cols_;
    std::vector<cplx> data_;
};

/// Kronecker product with the left factor owning the most significant index:
/// (A (x) B)(i*rb + k, j*cb + l) = A(i,j) * B(k,l).
ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b);

struct EigenSystem {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // k-th column is the eigenvector of values[k]
};

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. The input is symmetrized as (M + M^dagger)/2 before iterating,
/// so callers may pass matrices that are Hermitian only up to roundoff.
/// Sweeps continue until the off-diagonal Frobenius norm drops below
/// `offdiag_tol`; failure to converge within the sweep budget throws
/// NumericError.
EigenSystem eigh(const ComplexMatrix &m, double offdiag_tol = 1e-13);

/// Matrix sign function of a Hermitian matrix: eigenvalues are replaced by
/// +1 when >= 0 and -1 otherwise. Mapping 0 to +1 rather than 0 is what makes
/// this usable as a regularizer for nearly-singular dichotomic observables.
ComplexMatrix hermitian_sign(const ComplexMatrix &m);

/// Solve the square linear system A x = b by partially pivoted Gaussian
/// elimination. Throws NumericError on (near-)singular A.
std::vector<cplx> solve_linear(ComplexMatrix a, std::vector<cplx> b);

}  // namespace bellst

#endif
