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

#include "bellst/complex_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bellst/errors.hpp"

namespace bellst {

ComplexMatrix ComplexMatrix::identity(size_t n) {
    ComplexMatrix m(n, n);
    for (size_t i = 0; i < n; i++) {
        m(i, i) = 1.0;
    }
    return m;
}

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
    size_t r = rows.size();
    size_t c = r == 0 ? 0 : rows.begin()->size();
    ComplexMatrix m(r, c);
    size_t i = 0;
    for (const auto &row : rows) {
        if (row.size() != c) {
            throw std::invalid_argument("ComplexMatrix::from_rows: ragged rows");
        }
        size_t j = 0;
        for (const auto &v : row) {
            m(i, j++) = v;
        }
        i++;
    }
    return m;
}

ComplexMatrix ComplexMatrix::outer(const std::vector<cplx> &v) {
    ComplexMatrix m(v.size(), v.size());
    for (size_t i = 0; i < v.size(); i++) {
        for (size_t j = 0; j < v.size(); j++) {
            m(i, j) = v[i] * std::conj(v[j]);
        }
    }
    return m;
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix &other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw std::invalid_argument("ComplexMatrix::operator+: shape mismatch");
    }
    ComplexMatrix out = *this;
    for (size_t k = 0; k < data_.size(); k++) {
        out.data_[k] += other.data_[k];
    }
    return out;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix &other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw std::invalid_argument("ComplexMatrix::operator-: shape mismatch");
    }
    ComplexMatrix out = *this;
    for (size_t k = 0; k < data_.size(); k++) {
        out.data_[k] -= other.data_[k];
    }
    return out;
}

ComplexMatrix &ComplexMatrix::operator+=(const ComplexMatrix &other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw std::invalid_argument("ComplexMatrix::operator+=: shape mismatch");
    }
    for (size_t k = 0; k < data_.size(); k++) {
        data_[k] += other.data_[k];
    }
    return *this;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix &other) const {
    if (cols_ != other.rows_) {
        throw std::invalid_argument("ComplexMatrix::operator*: inner dimension mismatch");
    }
    ComplexMatrix out(rows_, other.cols_);
    for (size_t i = 0; i < rows_; i++) {
        for (size_t k = 0; k < cols_; k++) {
            cplx aik = (*this)(i, k);
            if (aik == cplx{}) {
                continue;
            }
            for (size_t j = 0; j < other.cols_; j++) {
                out(i, j) += aik * other(k, j);
            }
        }
    }
    return out;
}

ComplexMatrix operator*(cplx scalar, const ComplexMatrix &m) {
    ComplexMatrix out = m;
    for (auto &v : out.data_) {
        v *= scalar;
    }
    return out;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (size_t i = 0; i < rows_; i++) {
        for (size_t j = 0; j < cols_; j++) {
            out(j, i) = std::conj((*this)(i, j));
        }
    }
    return out;
}

cplx ComplexMatrix::trace() const {
    if (rows_ != cols_) {
        throw std::invalid_argument("ComplexMatrix::trace: non-square matrix");
    }
    cplx t = 0;
    for (size_t i = 0; i < rows_; i++) {
        t += (*this)(i, i);
    }
    return t;
}

double ComplexMatrix::max_abs() const {
    double m = 0;
    for (const auto &v : data_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0;
    for (const auto &v : data_) {
        s += std::norm(v);
    }
    return std::sqrt(s);
}

double ComplexMatrix::hermiticity_defect() const {
    if (rows_ != cols_) {
        throw std::invalid_argument("hermiticity_defect: non-square matrix");
    }
    double m = 0;
    for (size_t i = 0; i < rows_; i++) {
        for (size_t j = 0; j < cols_; j++) {
            m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        }
    }
    return m;
}

bool ComplexMatrix::is_finite() const {
    for (const auto &v : data_) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            return false;
        }
    }
    return true;
}

std::vector<cplx> ComplexMatrix::apply(const std::vector<cplx> &v) const {
    if (v.size() != cols_) {
        throw std::invalid_argument("ComplexMatrix::apply: vector length mismatch");
    }
    std::vector<cplx> out(rows_);
    for (size_t i = 0; i < rows_; i++) {
        cplx s = 0;
        for (size_t j = 0; j < cols_; j++) {
            s += (*this)(i, j) * v[j];
        }
        out[i] = s;
    }
    return out;
}

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (size_t i = 0; i < a.rows(); i++) {
        for (size_t j = 0; j < a.cols(); j++) {
            cplx aij = a(i, j);
            if (aij == cplx{}) {
                continue;
            }
            for (size_t k = 0; k < b.rows(); k++) {
                for (size_t l = 0; l < b.cols(); l++) {
                    out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
                }
            }
        }
    }
    return out;
}

namespace {

double offdiag_norm(const ComplexMatrix &a) {
    double s = 0;
    for (size_t i = 0; i < a.rows(); i++) {
        for (size_t j = 0; j < a.cols(); j++) {
            if (i != j) {
                s += std::norm(a(i, j));
            }
        }
    }
    return std::sqrt(s);
}

}  // namespace

EigenSystem eigh(const ComplexMatrix &m, double offdiag_tol) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("eigh: non-square matrix");
    }
    size_t n = m.rows();

    // Work on the Hermitian part so roundoff-level asymmetry in the input
    // cannot push the iteration off the Hermitian manifold.
    ComplexMatrix a(n, n);
    for (size_t i = 0; i < n; i++) {
        for (size_t j = 0; j < n; j++) {
            a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
        }
    }
    ComplexMatrix v = ComplexMatrix::identity(n);

    const int max_sweeps = 64;
    int sweep = 0;
    for (; sweep < max_sweeps; sweep++) {
        if (offdiag_norm(a) < offdiag_tol) {
            break;
        }
        for (size_t p = 0; p + 1 < n; p++) {
            for (size_t q = p + 1; q < n; q++) {
                double r = std::abs(a(p, q));
                if (r < 1e-300) {
                    continue;
                }
                // Unitary 2x2 rotation in the (p, q) plane chosen to zero
                // a(p, q). With u = a(p,q)/|a(p,q)| and tau comparing the
                // diagonal gap to the coupling, the stable small root of
                // t^2 + 2*tau*t - 1 = 0 gives the rotation tangent.
                cplx u = a(p, q) / r;
                double tau = (a(p, p).real() - a(q, q).real()) / (2 * r);
                double sgn = tau >= 0 ? 1.0 : -1.0;
                double t = sgn / (std::abs(tau) + std::sqrt(1 + tau * tau));
                double c = 1.0 / std::sqrt(1 + t * t);
                double s = t * c;

                // Column update (right-multiplication by the rotation).
                for (size_t k = 0; k < n; k++) {
                    cplx akp = a(k, p);
                    cplx akq = a(k, q);
                    a(k, p) = c * akp + s * std::conj(u) * akq;
                    a(k, q) = -s * u * akp + c * akq;
                }
                // Row update (left-multiplication by the adjoint rotation).
                for (size_t k = 0; k < n; k++) {
                    cplx apk = a(p, k);
                    cplx aqk = a(q, k);
                    a(p, k) = c * apk + s * u * aqk;
                    a(q, k) = -s * std::conj(u) * apk + c * aqk;
                }
                a(p, q) = 0;
                a(q, p) = 0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();

                // Accumulate eigenvectors.
                for (size_t k = 0; k < n; k++) {
                    cplx vkp = v(k, p);
                    cplx vkq = v(k, q);
                    v(k, p) = c * vkp + s * std::conj(u) * vkq;
                    v(k, q) = -s * u * vkp + c * vkq;
                }
            }
        }
    }
    if (sweep == max_sweeps && offdiag_norm(a) >= offdiag_tol) {
        throw NumericError("eigh: Jacobi iteration failed to converge");
    }

    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](size_t x, size_t y) { return a(x, x).real() < a(y, y).real(); });

    EigenSystem out;
    out.values.resize(n);
    out.vectors = ComplexMatrix(n, n);
    for (size_t k = 0; k < n; k++) {
        out.values[k] = a(order[k], order[k]).real();
        for (size_t i = 0; i < n; i++) {
            out.vectors(i, k) = v(i, order[k]);
        }
    }
    return out;
}

ComplexMatrix hermitian_sign(const ComplexMatrix &m) {
    EigenSystem es = eigh(m);
    size_t n = m.rows();
    ComplexMatrix out(n, n);
    for (size_t k = 0; k < n; k++) {
        double sk = es.values[k] >= 0 ? 1.0 : -1.0;
        for (size_t i = 0; i < n; i++) {
            for (size_t j = 0; j < n; j++) {
                out(i, j) += sk * es.vectors(i, k) * std::conj(es.vectors(j, k));
            }
        }
    }
    return out;
}

std::vector<cplx> solve_linear(ComplexMatrix a, std::vector<cplx> b) {
    if (a.rows() != a.cols() || b.size() != a.rows()) {
        throw std::invalid_argument("solve_linear: shape mismatch");
    }
    size_t n = a.rows();
    for (size_t col = 0; col < n; col++) {
        size_t pivot = col;
        for (size_t r = col + 1; r < n; r++) {
            if (std::abs(a(r, col)) > std::abs(a(pivot, col))) {
                pivot = r;
            }
        }
        if (std::abs(a(pivot, col)) < 1e-14) {
            throw NumericError("solve_linear: singular system");
        }
        if (pivot != col) {
            for (size_t j = 0; j < n; j++) {
                std::swap(a(col, j), a(pivot, j));
            }
            std::swap(b[col], b[pivot]);
        }
        for (size_t r = col + 1; r < n; r++) {
            cplx f = a(r, col) / a(col, col);
            if (f == cplx{}) {
                continue;
            }
            for (size_t j = col; j < n; j++) {
                a(r, j) -= f * a(col, j);
            }
            b[r] -= f * b[col];
        }
    }
    std::vector<cplx> x(n);
    for (size_t i = n; i-- > 0;) {
        cplx s = b[i];
        for (size_t j = i + 1; j < n; j++) {
            s -= a(i, j) * x[j];
        }
        x[i] = s / a(i, i);
    }
    return x;
}

}  // namespace bellst
