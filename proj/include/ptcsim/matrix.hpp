// Copyright 2026 The ptcsim Authors. All Rights Reserved.
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

#ifndef PTCSIM_MATRIX_HPP
#define PTCSIM_MATRIX_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ptcsim/error.hpp"

namespace ptc
{

// Dense row-major matrix. Small on purpose: the simulator only needs
// element access, transpose and a reference product.
template <typename T>
class BasicMatrix
{
public:
    using value_type = T;

    BasicMatrix() = default;

    BasicMatrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill)
    {
    }

    BasicMatrix(std::size_t rows, std::size_t cols, std::vector<T> data)
        : rows_(rows), cols_(cols), data_(std::move(data))
    {
        if (data_.size() != rows_ * cols_) {
            throw ShapeError("matrix data size " + std::to_string(data_.size()) + " does not match "
                             + std::to_string(rows_) + "x" + std::to_string(cols_));
        }
    }

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    T &operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    const T &operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    [[nodiscard]] std::span<T> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    [[nodiscard]] std::span<const T> row(std::size_t r) const noexcept
    {
        return {data_.data() + r * cols_, cols_};
    }

    [[nodiscard]] std::span<T> flat() noexcept { return data_; }
    [[nodiscard]] std::span<const T> flat() const noexcept { return data_; }

    [[nodiscard]] BasicMatrix transposed() const
    {
        BasicMatrix out(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < cols_; ++c) {
                out(c, r) = (*this)(r, c);
            }
        }
        return out;
    }

    friend bool operator==(const BasicMatrix &, const BasicMatrix &) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using Matrix = BasicMatrix<double>;

template <typename T>
BasicMatrix<T> matmul(const BasicMatrix<T> &a, const BasicMatrix<T> &b)
{
    if (a.cols() != b.rows()) {
        throw ShapeError("matmul: inner dimensions " + std::to_string(a.cols()) + " and "
                         + std::to_string(b.rows()) + " differ");
    }
    BasicMatrix<T> out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const T aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

template <typename T>
T frobenius_norm(const BasicMatrix<T> &m)
{
    T acc{};
    for (const T v : m.flat()) {
        acc += v * v;
    }
    return std::sqrt(acc);
}

// ||a - b||_F / ||b||_F, with b the reference.
template <typename T>
T relative_frobenius_error(const BasicMatrix<T> &a, const BasicMatrix<T> &b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ShapeError("relative_frobenius_error: shape mismatch");
    }
    T num{};
    for (std::size_t i = 0; i < a.size(); ++i) {
        const T d = a.flat()[i] - b.flat()[i];
        num += d * d;
    }
    const T den = frobenius_norm(b);
    return den == T{} ? std::sqrt(num) : std::sqrt(num) / den;
}

template <typename T>
T max_abs(std::span<const T> values)
{
    T m{};
    for (const T v : values) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

} // namespace ptc

#endif
