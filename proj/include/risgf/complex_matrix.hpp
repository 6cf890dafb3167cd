// Copyright 2026 The risgf Authors
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

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "risgf/errors.hpp"

namespace risgf {

using Complex = std::complex<double>;

/// Dense row-major complex matrix. Sized for the small (<= ~32 x 32)
/// channel and filter matrices of a link-level simulation.
class ComplexMatrix {
public:
    ComplexMatrix() = default;

    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
        : rows_(rows), cols_(cols), data_(std::move(entries))
    {
        if (data_.size() != rows_ * cols_) {
            throw DimensionError("ComplexMatrix: entry count " + std::to_string(data_.size()) +
                                 " does not match " + std::to_string(rows_) + "x" +
                                 std::to_string(cols_));
        }
        for (const auto& z : data_) {
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
                throw std::invalid_argument("ComplexMatrix: non-finite entry");
            }
        }
    }

    /// Row-by-row literal, e.g. {{1, 0}, {0, 1}}.
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) {
                throw DimensionError("ComplexMatrix: ragged initializer");
            }
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static ComplexMatrix identity(std::size_t n)
    {
        ComplexMatrix out(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            out(i, i) = 1.0;
        }
        return out;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    Complex& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const noexcept
    {
        return data_[r * cols_ + c];
    }

    std::span<const Complex> entries() const noexcept { return data_; }
    std::span<Complex> entries() noexcept { return data_; }

    /// Largest entry magnitude; 0 for an empty matrix.
    double max_abs() const noexcept
    {
        double m = 0.0;
        for (const auto& z : data_) {
            m = std::max(m, std::abs(z));
        }
        return m;
    }

    ComplexMatrix& operator+=(const ComplexMatrix& other)
    {
        require_same_shape(other, "operator+=");
        for (std::size_t i = 0; i < data_.size(); ++i) {
            data_[i] += other.data_[i];
        }
        return *this;
    }

    ComplexMatrix& operator-=(const ComplexMatrix& other)
    {
        require_same_shape(other, "operator-=");
        for (std::size_t i = 0; i < data_.size(); ++i) {
            data_[i] -= other.data_[i];
        }
        return *this;
    }

    ComplexMatrix& operator*=(Complex s) noexcept
    {
        for (auto& z : data_) {
            z *= s;
        }
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    void require_same_shape(const ComplexMatrix& other, const char* what) const
    {
        if (rows_ != other.rows_ || cols_ != other.cols_) {
            throw DimensionError(std::string(what) + ": shape mismatch");
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

/// Conjugate transpose.
inline ComplexMatrix hermitian(const ComplexMatrix& a)
{
    ComplexMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            out(j, i) = std::conj(a(i, j));
        }
    }
    return out;
}

inline ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b)
{
    if (a.cols() != b.rows()) {
        throw DimensionError("matmul: " + std::to_string(a.rows()) + "x" +
                             std::to_string(a.cols()) + " times " + std::to_string(b.rows()) +
                             "x" + std::to_string(b.cols()));
    }
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

/// A^H * A without forming A^H.
inline ComplexMatrix gram(const ComplexMatrix& a)
{
    const std::size_t n = a.cols();
    ComplexMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            Complex s = 0.0;
            for (std::size_t m = 0; m < a.rows(); ++m) {
                s += std::conj(a(m, i)) * a(m, j);
            }
            out(i, j) = s;
            out(j, i) = std::conj(s);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        out(i, i) = out(i, i).real();
    }
    return out;
}

namespace detail {

// Relative pivot floor for the Hermitian factorization.
inline constexpr double kPivotRatio = 1e-12;

/// Lower-triangular Cholesky factor L with A = L L^H.
inline ComplexMatrix cholesky(const ComplexMatrix& a)
{
    if (a.rows() != a.cols()) {
        throw DimensionError("cholesky: matrix is not square");
    }
    const std::size_t n = a.rows();
    double largest = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        largest = std::max(largest, a(i, i).real());
    }
    const double floor = kPivotRatio * largest;

    ComplexMatrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j).real();
        for (std::size_t k = 0; k < j; ++k) {
            d -= std::norm(l(j, k));
        }
        if (!(d > floor) || largest <= 0.0) {
            throw SingularMatrixError("cholesky: pivot " + std::to_string(j) +
                                      " below relative threshold");
        }
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            Complex s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) {
                s -= l(i, k) * std::conj(l(j, k));
            }
            l(i, j) = s / ljj;
        }
    }
    return l;
}

}  // namespace detail

/// Solves A X = B for Hermitian positive-definite A.
///
/// Throws SingularMatrixError when a Cholesky pivot falls below 1e-12 of the
/// largest diagonal entry of A.
inline ComplexMatrix solve_hermitian_system(const ComplexMatrix& a, const ComplexMatrix& b)
{
    if (a.rows() != a.cols() || b.rows() != a.rows()) {
        throw DimensionError("solve_hermitian_system: incompatible shapes");
    }
    const ComplexMatrix l = detail::cholesky(a);
    const std::size_t n = a.rows();
    ComplexMatrix x = b;
    for (std::size_t c = 0; c < b.cols(); ++c) {
        // forward: L y = b
        for (std::size_t i = 0; i < n; ++i) {
            Complex s = x(i, c);
            for (std::size_t k = 0; k < i; ++k) {
                s -= l(i, k) * x(k, c);
            }
            x(i, c) = s / l(i, i).real();
        }
        // backward: L^H x = y
        for (std::size_t ii = n; ii-- > 0;) {
            Complex s = x(ii, c);
            for (std::size_t k = ii + 1; k < n; ++k) {
                s -= std::conj(l(k, ii)) * x(k, c);
            }
            x(ii, c) = s / l(ii, ii).real();
        }
    }
    return x;
}

/// log2 det(A) for Hermitian positive-definite A.
inline double log_det_hermitian(const ComplexMatrix& a)
{
    const ComplexMatrix l = detail::cholesky(a);
    double acc = 0.0;
    for (std::size_t i = 0; i < l.rows(); ++i) {
        acc += std::log2(l(i, i).real());
    }
    return 2.0 * acc;
}

}  // namespace risgf
