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

#include "qcharm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qcharm {

ComplexMatrix to_complex(const RealMatrix& m) {
    ComplexMatrix c(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) c(i, j) = m(i, j);
    return c;
}

ComplexMatrix adjoint(const ComplexMatrix& m) {
    ComplexMatrix a(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) a(j, i) = std::conj(m(i, j));
    return a;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            for (std::size_t p = 0; p < b.rows(); ++p)
                for (std::size_t q = 0; q < b.cols(); ++q) k(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
    return k;
}

namespace {
template <typename T>
double max_abs_diff_impl(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("max_abs_diff: shape mismatch");
    double worst = 0.0;
    auto da = a.data();
    auto db = b.data();
    for (std::size_t k = 0; k < da.size(); ++k) worst = std::max(worst, std::abs(da[k] - db[k]));
    return worst;
}
}  // namespace

double max_abs_diff(const RealMatrix& a, const RealMatrix& b) { return max_abs_diff_impl(a, b); }
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return max_abs_diff_impl(a, b); }

double frobenius_norm(const RealMatrix& m) {
    double s = 0.0;
    for (double v : m.data()) s += v * v;
    return std::sqrt(s);
}

std::vector<double> matvec(const RealMatrix& m, std::span<const double> x) {
    if (x.size() != m.cols()) throw std::invalid_argument("matvec: shape mismatch");
    std::vector<double> y(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) y[i] += m(i, j) * x[j];
    return y;
}

SymmetricEigen jacobi_eigen(const RealMatrix& input, double off_tol, int max_sweeps) {
    if (!input.square()) throw std::invalid_argument("jacobi_eigen: matrix is not square");
    const std::size_t n = input.rows();
    const double scale = std::max(1.0, frobenius_norm(input));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(input(i, j) - input(j, i)) > 1e-12 * scale)
                throw std::invalid_argument("jacobi_eigen: matrix is not symmetric");

    RealMatrix a = input;
    RealMatrix v = RealMatrix::identity(n);
    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) s += a(i, j) * a(i, j);
        return std::sqrt(s);
    };

    int sweep = 0;
    while (off_norm() >= off_tol) {
        if (sweep++ >= max_sweeps) throw std::runtime_error("jacobi_eigen: no convergence");
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });

    SymmetricEigen out;
    out.sweeps = sweep;
    out.values.resize(n);
    out.vectors = RealMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]);
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

bool cholesky_solve(const RealMatrix& a, std::span<const double> b, std::vector<double>& x) {
    const std::size_t n = a.rows();
    if (!a.square() || b.size() != n) throw std::invalid_argument("cholesky_solve: shape mismatch");
    RealMatrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > 0.0)) return false;
        l(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
        y[i] = s / l(i, i);
    }
    x.assign(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = y[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= l(k, i) * x[k];
        x[i] = s / l(i, i);
    }
    return true;
}

std::vector<double> pseudo_inverse_solve(const RealMatrix& a, std::span<const double> b, double rcond) {
    const auto eig = jacobi_eigen(a);
    const std::size_t n = a.rows();
    double largest = 0.0;
    for (double v : eig.values) largest = std::max(largest, std::abs(v));
    std::vector<double> x(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        if (std::abs(eig.values[k]) <= rcond * largest) continue;
        double proj = 0.0;
        for (std::size_t i = 0; i < n; ++i) proj += eig.vectors(i, k) * b[i];
        proj /= eig.values[k];
        for (std::size_t i = 0; i < n; ++i) x[i] += proj * eig.vectors(i, k);
    }
    return x;
}

std::vector<double> lu_solve(const RealMatrix& input, std::span<const double> b, double singular_tol) {
    const std::size_t n = input.rows();
    if (!input.square() || b.size() != n) throw std::invalid_argument("lu_solve: shape mismatch");
    RealMatrix a = input;
    std::vector<double> x(b.begin(), b.end());
    double scale = 0.0;
    for (double v : a.data()) scale = std::max(scale, std::abs(v));
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        if (std::abs(a(piv, col)) <= singular_tol * scale) throw std::runtime_error("lu_solve: matrix is singular");
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
            std::swap(x[col], x[piv]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a(r, col) / a(col, col);
            for (std::size_t j = col; j < n; ++j) a(r, j) -= f * a(col, j);
            x[r] -= f * x[col];
        }
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = x[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return x;
}

std::vector<double> polyfit(std::span<const double> x, std::span<const double> y, int order) {
    if (order < 0) throw std::invalid_argument("polyfit: negative order");
    const std::size_t m = x.size();
    const std::size_t n = static_cast<std::size_t>(order) + 1;
    if (y.size() != m) throw std::invalid_argument("polyfit: x and y differ in length");
    if (m < n) throw std::invalid_argument("polyfit: need at least order+1 points");

    RealMatrix v(m, n);
    for (std::size_t i = 0; i < m; ++i) {
        double p = 1.0;
        for (std::size_t k = 0; k < n; ++k, p *= x[i]) v(i, k) = p;
    }
    std::vector<double> rhs(y.begin(), y.end());

    // Householder QR, applying each reflector to rhs as we go.
    for (std::size_t k = 0; k < n; ++k) {
        double norm = 0.0;
        for (std::size_t i = k; i < m; ++i) norm += v(i, k) * v(i, k);
        norm = std::sqrt(norm);
        if (norm == 0.0) throw std::runtime_error("polyfit: singular design matrix");
        const double alpha = v(k, k) > 0 ? -norm : norm;
        std::vector<double> u(m, 0.0);
        for (std::size_t i = k; i < m; ++i) u[i] = v(i, k);
        u[k] -= alpha;
        double unorm2 = 0.0;
        for (std::size_t i = k; i < m; ++i) unorm2 += u[i] * u[i];
        if (unorm2 == 0.0) continue;
        for (std::size_t j = k; j < n; ++j) {
            double d = 0.0;
            for (std::size_t i = k; i < m; ++i) d += u[i] * v(i, j);
            d = 2.0 * d / unorm2;
            for (std::size_t i = k; i < m; ++i) v(i, j) -= d * u[i];
        }
        double d = 0.0;
        for (std::size_t i = k; i < m; ++i) d += u[i] * rhs[i];
        d = 2.0 * d / unorm2;
        for (std::size_t i = k; i < m; ++i) rhs[i] -= d * u[i];
    }

    double rmax = 0.0;
    for (std::size_t k = 0; k < n; ++k) rmax = std::max(rmax, std::abs(v(k, k)));
    std::vector<double> c(n, 0.0);
    for (std::size_t k = n; k-- > 0;) {
        if (std::abs(v(k, k)) <= 1e-13 * rmax) throw std::runtime_error("polyfit: singular design matrix");
        double s = rhs[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= v(k, j) * c[j];
        c[k] = s / v(k, k);
    }
    return c;
}

double polyval(std::span<const double> coeffs, double x) {
    double acc = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * x + coeffs[k];
    return acc;
}

}  // namespace qcharm
