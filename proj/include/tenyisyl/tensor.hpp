// Copyright 2026 The Tenyisyl Authors
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

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace tenyisyl {

/// Dense row-major matrix of doubles. Vectors are 1×n or n×1 as convenient.
class Tensor {
 public:
  Tensor() = default;
  Tensor(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  double* row(std::size_t r) { return data_.data() + r * cols_; }
  const double* row(std::size_t r) const { return data_.data() + r * cols_; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  void fill(double v) { data_.assign(data_.size(), v); }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

namespace lin {

/// C (+)= A·B on the leading m rows of A and C (m = full height when
/// omitted). Shapes: A m×K, B K×N, C m×N.
void matmul(const Tensor& a, const Tensor& b, Tensor& c, bool accumulate,
            std::size_t m);
void matmul(const Tensor& a, const Tensor& b, Tensor& c,
            bool accumulate = false);

/// C (+)= Aᵀ·B using the leading m rows of A and B. Shapes: A m×M, B m×N,
/// C M×N. The workhorse for weight gradients (rank-m update).
void matmul_tn(const Tensor& a, const Tensor& b, Tensor& c, bool accumulate,
               std::size_t m);
void matmul_tn(const Tensor& a, const Tensor& b, Tensor& c,
               bool accumulate = false);

Tensor transposed(const Tensor& a);

/// Adds a 1×n bias row to the leading m rows.
void add_row(Tensor& a, const Tensor& bias, std::size_t m);

bool all_finite(const Tensor& a);

/// Raw-pointer core: C (+)= A·B with explicit strides, row-major.
void gemm(const double* a, std::size_t lda, const double* b, std::size_t ldb,
          double* c, std::size_t ldc, std::size_t m, std::size_t n,
          std::size_t k, bool accumulate);

}  // namespace lin

}  // namespace tenyisyl
