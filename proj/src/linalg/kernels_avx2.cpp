// Copyright 2026 The bb84sdi Authors
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

// Compiled with -mavx2 -mfma. Nothing here may run before avx2_available()
// has confirmed CPU support.
#include <immintrin.h>

#include "bb84sdi/linalg/kernels.hpp"

namespace bb84sdi::linalg::kernels {
namespace {

// One __m256d holds two std::complex<double> values laid out as
// [re0, im0, re1, im1].

inline __m256d load2(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

void gemm_avx2(std::size_t n, std::size_t k, std::size_t m, const cplx* a, const cplx* b,
               cplx* c) {
  const std::size_t m2 = m & ~std::size_t{1};
  for (std::size_t i = 0; i < n; ++i) {
    const cplx* arow = a + i * k;
    cplx* crow = c + i * m;
    for (std::size_t j = 0; j < m2; j += 2) {
      // acc_re collects a_r * b, acc_im collects a_i * swap(b); addsub folds
      // them into (a_r b_r - a_i b_i, a_r b_i + a_i b_r).
      __m256d acc_re = _mm256_setzero_pd();
      __m256d acc_im = _mm256_setzero_pd();
      for (std::size_t p = 0; p < k; ++p) {
        const __m256d bv = load2(b + p * m + j);
        const __m256d bsw = _mm256_permute_pd(bv, 0b0101);
        acc_re = _mm256_fmadd_pd(_mm256_set1_pd(arow[p].real()), bv, acc_re);
        acc_im = _mm256_fmadd_pd(_mm256_set1_pd(arow[p].imag()), bsw, acc_im);
      }
      store2(crow + j, _mm256_addsub_pd(acc_re, acc_im));
    }
    if (m2 != m) {
      double re = 0.0;
      double im = 0.0;
      for (std::size_t p = 0; p < k; ++p) {
        const cplx bv = b[p * m + m2];
        re += arow[p].real() * bv.real() - arow[p].imag() * bv.imag();
        im += arow[p].real() * bv.imag() + arow[p].imag() * bv.real();
      }
      crow[m2] = cplx(re, im);
    }
  }
}

cplx dotc_avx2(std::size_t n, const cplx* x, const cplx* y) {
  __m256d s_same = _mm256_setzero_pd();  // [xr yr, xi yi, ...]
  __m256d s_swap = _mm256_setzero_pd();  // [xr yi, xi yr, ...]
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = load2(x + i);
    const __m256d yv = load2(y + i);
    s_same = _mm256_fmadd_pd(xv, yv, s_same);
    s_swap = _mm256_fmadd_pd(xv, _mm256_permute_pd(yv, 0b0101), s_swap);
  }
  alignas(32) double same[4];
  alignas(32) double swap[4];
  _mm256_store_pd(same, s_same);
  _mm256_store_pd(swap, s_swap);
  double re = (same[0] + same[2]) + (same[1] + same[3]);
  double im = (swap[0] + swap[2]) - (swap[1] + swap[3]);
  for (; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

}  // namespace

const KernelTable* avx2_table() {
  static const KernelTable table{"avx2", &gemm_avx2, &dotc_avx2};
  return &table;
}

}  // namespace bb84sdi::linalg::kernels
