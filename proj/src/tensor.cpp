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

#include "tenyisyl/tensor.hpp"

#include <cmath>

#if defined(__AVX512F__)
#include <immintrin.h>
#endif

namespace tenyisyl {
namespace lin {

namespace {

#if defined(__AVX512F__)

// 4x16 microkernel: 8 zmm accumulators, column tile first so the B slab
// stays hot across row strips.
void gemm_core(const double* a, std::size_t lda, const double* b,
               std::size_t ldb, double* c, std::size_t ldc, std::size_t m,
               std::size_t n, std::size_t k, bool acc) {
  const std::size_t m4 = m - m % 4;
  const std::size_t n16 = n - n % 16;
  for (std::size_t j = 0; j < n16; j += 16) {
    for (std::size_t i = 0; i < m4; i += 4) {
      __m512d c00, c01, c10, c11, c20, c21, c30, c31;
      if (acc) {
        c00 = _mm512_loadu_pd(c + (i + 0) * ldc + j);
        c01 = _mm512_loadu_pd(c + (i + 0) * ldc + j + 8);
        c10 = _mm512_loadu_pd(c + (i + 1) * ldc + j);
        c11 = _mm512_loadu_pd(c + (i + 1) * ldc + j + 8);
        c20 = _mm512_loadu_pd(c + (i + 2) * ldc + j);
        c21 = _mm512_loadu_pd(c + (i + 2) * ldc + j + 8);
        c30 = _mm512_loadu_pd(c + (i + 3) * ldc + j);
        c31 = _mm512_loadu_pd(c + (i + 3) * ldc + j + 8);
      } else {
        c00 = c01 = c10 = c11 = c20 = c21 = c30 = c31 = _mm512_setzero_pd();
      }
      for (std::size_t kk = 0; kk < k; ++kk) {
        const __m512d b0 = _mm512_loadu_pd(b + kk * ldb + j);
        const __m512d b1 = _mm512_loadu_pd(b + kk * ldb + j + 8);
        __m512d av;
        av = _mm512_set1_pd(a[(i + 0) * lda + kk]);
        c00 = _mm512_fmadd_pd(av, b0, c00);
        c01 = _mm512_fmadd_pd(av, b1, c01);
        av = _mm512_set1_pd(a[(i + 1) * lda + kk]);
        c10 = _mm512_fmadd_pd(av, b0, c10);
        c11 = _mm512_fmadd_pd(av, b1, c11);
        av = _mm512_set1_pd(a[(i + 2) * lda + kk]);
        c20 = _mm512_fmadd_pd(av, b0, c20);
        c21 = _mm512_fmadd_pd(av, b1, c21);
        av = _mm512_set1_pd(a[(i + 3) * lda + kk]);
        c30 = _mm512_fmadd_pd(av, b0, c30);
        c31 = _mm512_fmadd_pd(av, b1, c31);
      }
      _mm512_storeu_pd(c + (i + 0) * ldc + j, c00);
      _mm512_storeu_pd(c + (i + 0) * ldc + j + 8, c01);
      _mm512_storeu_pd(c + (i + 1) * ldc + j, c10);
      _mm512_storeu_pd(c + (i + 1) * ldc + j + 8, c11);
      _mm512_storeu_pd(c + (i + 2) * ldc + j, c20);
      _mm512_storeu_pd(c + (i + 2) * ldc + j + 8, c21);
      _mm512_storeu_pd(c + (i + 3) * ldc + j, c30);
      _mm512_storeu_pd(c + (i + 3) * ldc + j + 8, c31);
    }
    for (std::size_t i = m4; i < m; ++i) {
      __m512d c0, c1;
      if (acc) {
        c0 = _mm512_loadu_pd(c + i * ldc + j);
        c1 = _mm512_loadu_pd(c + i * ldc + j + 8);
      } else {
        c0 = c1 = _mm512_setzero_pd();
      }
      for (std::size_t kk = 0; kk < k; ++kk) {
        const __m512d av = _mm512_set1_pd(a[i * lda + kk]);
        c0 = _mm512_fmadd_pd(av, _mm512_loadu_pd(b + kk * ldb + j), c0);
        c1 = _mm512_fmadd_pd(av, _mm512_loadu_pd(b + kk * ldb + j + 8), c1);
      }
      _mm512_storeu_pd(c + i * ldc + j, c0);
      _mm512_storeu_pd(c + i * ldc + j + 8, c1);
    }
  }
  if (n16 < n) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = n16; j < n; ++j) {
        double s = acc ? c[i * ldc + j] : 0.0;
        for (std::size_t kk = 0; kk < k; ++kk) {
          s += a[i * lda + kk] * b[kk * ldb + j];
        }
        c[i * ldc + j] = s;
      }
    }
  }
}

#else

void gemm_core(const double* a, std::size_t lda, const double* b,
               std::size_t ldb, double* c, std::size_t ldc, std::size_t m,
               std::size_t n, std::size_t k, bool acc) {
  constexpr std::size_t kNr = 16;
  const std::size_t n_main = n - n % kNr;
  for (std::size_t j = 0; j < n_main; j += kNr) {
    for (std::size_t i = 0; i < m; ++i) {
      double accv[kNr];
      for (std::size_t jj = 0; jj < kNr; ++jj) {
        accv[jj] = acc ? c[i * ldc + j + jj] : 0.0;
      }
      for (std::size_t kk = 0; kk < k; ++kk) {
        const double av = a[i * lda + kk];
        const double* brow = b + kk * ldb + j;
        for (std::size_t jj = 0; jj < kNr; ++jj) {
          accv[jj] += av * brow[jj];
        }
      }
      for (std::size_t jj = 0; jj < kNr; ++jj) {
        c[i * ldc + j + jj] = accv[jj];
      }
    }
  }
  if (n_main < n) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = n_main; j < n; ++j) {
        double s = acc ? c[i * ldc + j] : 0.0;
        for (std::size_t kk = 0; kk < k; ++kk) {
          s += a[i * lda + kk] * b[kk * ldb + j];
        }
        c[i * ldc + j] = s;
      }
    }
  }
}

#endif

}  // namespace

void gemm(const double* a, std::size_t lda, const double* b, std::size_t ldb,
          double* c, std::size_t ldc, std::size_t m, std::size_t n,
          std::size_t k, bool accumulate) {
  gemm_core(a, lda, b, ldb, c, ldc, m, n, k, accumulate);
}

void matmul(const Tensor& a, const Tensor& b, Tensor& c, bool accumulate,
            std::size_t m) {
  if (a.cols() != b.rows() || c.cols() != b.cols() || m > a.rows() ||
      m > c.rows()) {
    throw std::invalid_argument("matmul: shape mismatch");
  }
  gemm(a.data(), a.cols(), b.data(), b.cols(), c.data(), c.cols(), m, b.cols(),
       a.cols(), accumulate);
}

void matmul(const Tensor& a, const Tensor& b, Tensor& c, bool accumulate) {
  if (a.rows() != c.rows()) {
    throw std::invalid_argument("matmul: shape mismatch");
  }
  matmul(a, b, c, accumulate, a.rows());
}

void matmul_tn(const Tensor& a, const Tensor& b, Tensor& c, bool accumulate,
               std::size_t m) {
  if (a.cols() != c.rows() || b.cols() != c.cols() || m > a.rows() ||
      m > b.rows()) {
    throw std::invalid_argument("matmul_tn: shape mismatch");
  }
  // Transposing the m-row panel of A turns this into a plain gemm with
  // K = m, which is far kinder to the cache than a rank-m update of C.
  thread_local std::vector<double> scratch;
  scratch.resize(a.cols() * m);
  for (std::size_t r = 0; r < m; ++r) {
    const double* arow = a.row(r);
    for (std::size_t i = 0; i < a.cols(); ++i) {
      scratch[i * m + r] = arow[i];
    }
  }
  gemm(scratch.data(), m, b.data(), b.cols(), c.data(), c.cols(), a.cols(),
       b.cols(), m, accumulate);
}

void matmul_tn(const Tensor& a, const Tensor& b, Tensor& c, bool accumulate) {
  if (a.rows() != b.rows()) {
    throw std::invalid_argument("matmul_tn: shape mismatch");
  }
  matmul_tn(a, b, c, accumulate, a.rows());
}

Tensor transposed(const Tensor& a) {
  Tensor t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      t(j, i) = a(i, j);
    }
  }
  return t;
}

void add_row(Tensor& a, const Tensor& bias, std::size_t m) {
  if (bias.size() != a.cols() || m > a.rows()) {
    throw std::invalid_argument("add_row: shape mismatch");
  }
  const double* b = bias.data();
  for (std::size_t i = 0; i < m; ++i) {
    double* row = a.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) row[j] += b[j];
  }
}

bool all_finite(const Tensor& a) {
  const double* p = a.data();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!std::isfinite(p[i])) return false;
  }
  return true;
}

}  // namespace lin
}  // namespace tenyisyl
