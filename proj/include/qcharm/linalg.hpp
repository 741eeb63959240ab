// Copyright 2026 The qcharm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace qcharm {

using cplx = std::complex<double>;

/// Dense row-major matrix. Sizes here never exceed a few dozen rows, so the
/// storage is a flat vector and every algorithm is the textbook one.
template <typename T>
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T{}) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
        return m;
    }

    /// Row-major construction from nested initializer lists, e.g. {{1, 2}, {3, 4}}.
    static Matrix from_rows(std::initializer_list<std::initializer_list<T>> rows) {
        Matrix m(rows.size(), rows.size() ? rows.begin()->size() : 0);
        std::size_t i = 0;
        for (const auto& row : rows) {
            if (row.size() != m.cols_) throw std::invalid_argument("Matrix::from_rows: ragged rows");
            std::size_t j = 0;
            for (const auto& v : row) m(i, j++) = v;
            ++i;
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<T> data() { return data_; }
    std::span<const T> data() const { return data_; }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Matrix& operator+=(const Matrix& o) {
        check_same(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        check_same(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }
    Matrix& operator*=(T s) {
        for (auto& v : data_) v *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, T s) { return a *= s; }
    friend Matrix operator*(T s, Matrix a) { return a *= s; }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("Matrix product: shape mismatch");
        Matrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T aik = a(i, k);
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

  private:
    void check_same(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("Matrix: shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using RealMatrix = Matrix<double>;
using ComplexMatrix = Matrix<cplx>;

ComplexMatrix to_complex(const RealMatrix& m);
ComplexMatrix adjoint(const ComplexMatrix& m);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Largest |a_ij - b_ij|.
double max_abs_diff(const RealMatrix& a, const RealMatrix& b);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
double frobenius_norm(const RealMatrix& m);

std::vector<double> matvec(const RealMatrix& m, std::span<const double> x);

/// Result of a symmetric eigendecomposition. Columns of `vectors` are the
/// eigenvectors, ordered with ascending `values`.
struct SymmetricEigen {
    std::vector<double> values;
    RealMatrix vectors;
    int sweeps = 0;
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops below
/// `off_tol`. Throws std::invalid_argument for non-square or non-symmetric input.
SymmetricEigen jacobi_eigen(const RealMatrix& a, double off_tol = 1e-12, int max_sweeps = 100);

/// Cholesky solve of a symmetric positive-definite system. Returns false when
/// a non-positive pivot is met, leaving `x` untouched.
bool cholesky_solve(const RealMatrix& a, std::span<const double> b, std::vector<double>& x);

/// Minimum-norm solution through the eigendecomposition of a symmetric matrix;
/// eigenvalues with |lambda| <= rcond * max|lambda| are dropped.
std::vector<double> pseudo_inverse_solve(const RealMatrix& a, std::span<const double> b, double rcond);

/// Gaussian elimination with partial pivoting. Throws std::runtime_error when a
/// pivot falls below `singular_tol` times the largest column entry.
std::vector<double> lu_solve(const RealMatrix& a, std::span<const double> b, double singular_tol = 1e-13);

/// Least-squares polynomial fit y ~ sum_k c_k x^k, k = 0..order, via
/// Householder QR of the Vandermonde matrix. Coefficients ascending by power.
std::vector<double> polyfit(std::span<const double> x, std::span<const double> y, int order);

double polyval(std::span<const double> coeffs, double x);

}  // namespace qcharm
