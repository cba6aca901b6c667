// Copyright (c) 2026, smoe-bounds contributors
// SPDX-License-Identifier: Apache-2.0

#include "smoe/matrix.hpp"

#include <cmath>
#include <string>

#include "smoe/error.hpp"

namespace smoe {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw InputError("matrix data has " + std::to_string(data_.size()) + " entries, shape needs " +
                         std::to_string(rows_ * cols_));
    }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) : rows_(rows.size()) {
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) {
            throw InputError("ragged matrix literal");
        }
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            t(c, r) = (*this)(r, c);
        }
    }
    return t;
}

bool Matrix::all_finite() const noexcept {
    for (double v : data_) {
        if (!std::isfinite(v)) {
            return false;
        }
    }
    return true;
}

std::vector<double> Matrix::multiply(std::span<const double> x) const {
    if (x.size() != cols_) {
        throw InputError("matrix-vector product: vector has dimension " + std::to_string(x.size()) +
                         ", matrix expects " + std::to_string(cols_));
    }
    std::vector<double> y(rows_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
        const double* a = data_.data() + r * cols_;
        double acc = 0.0;
        for (std::size_t c = 0; c < cols_; ++c) {
            acc += a[c] * x[c];
        }
        y[r] = acc;
    }
    return y;
}

std::vector<double> Matrix::multiply_transposed(std::span<const double> x) const {
    if (x.size() != rows_) {
        throw InputError("transposed matrix-vector product: vector has dimension " + std::to_string(x.size()) +
                         ", matrix expects " + std::to_string(rows_));
    }
    std::vector<double> y(cols_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
        const double* a = data_.data() + r * cols_;
        for (std::size_t c = 0; c < cols_; ++c) {
            y[c] += a[c] * x[r];
        }
    }
    return y;
}

Matrix& Matrix::operator*=(double s) noexcept {
    for (double& v : data_) {
        v *= s;
    }
    return *this;
}

Matrix operator*(double s, Matrix m) {
    m *= s;
    return m;
}

double frobenius_norm(const Matrix& m) noexcept {
    double acc = 0.0;
    for (double v : m.data()) {
        acc += v * v;
    }
    return std::sqrt(acc);
}

}  // namespace smoe
