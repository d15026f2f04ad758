// Copyright 2026 The Auction Forge Authors.
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

// AVX-512F variants. Compiled with -mavx512f -mfma; only reached after the
// dispatcher has confirmed CPU support.

#include <immintrin.h>

#include <algorithm>

#include "af/simd/kernels.hpp"

namespace af::simd {
namespace {

constexpr std::int64_t kRowBlock = 8;
constexpr std::int64_t kColBlock = 32;
constexpr std::int64_t kRowChunk = 128;
constexpr std::int64_t kDepthChunk = 256;

inline __mmask16 tail_mask(std::int64_t valid) {
  if (valid <= 0) return 0;
  if (valid >= 16) return 0xFFFF;
  return static_cast<__mmask16>((1u << valid) - 1u);
}

// 8x32 register tile, two zmm accumulators per row.
template <int MR>
void tile(std::int64_t k, const float* a, std::int64_t ars, std::int64_t acs, const float* b,
          std::int64_t ldb, float* c, std::int64_t ldc, __mmask16 m0, __mmask16 m1) {
  __m512 acc0[MR];
  __m512 acc1[MR];
#pragma GCC unroll 8
  for (int r = 0; r < MR; ++r) {
    acc0[r] = _mm512_setzero_ps();
    acc1[r] = _mm512_setzero_ps();
  }
  for (std::int64_t p = 0; p < k; ++p) {
    const float* bp = b + p * ldb;
    const __m512 b0 = _mm512_maskz_loadu_ps(m0, bp);
    const __m512 b1 = _mm512_maskz_loadu_ps(m1, bp + 16);
    const float* ap = a + p * acs;
#pragma GCC unroll 8
    for (int r = 0; r < MR; ++r) {
      const __m512 av = _mm512_set1_ps(ap[r * ars]);
      acc0[r] = _mm512_fmadd_ps(av, b0, acc0[r]);
      acc1[r] = _mm512_fmadd_ps(av, b1, acc1[r]);
    }
  }
#pragma GCC unroll 8
  for (int r = 0; r < MR; ++r) {
    float* cr = c + r * ldc;
    _mm512_mask_storeu_ps(cr, m0, _mm512_add_ps(_mm512_maskz_loadu_ps(m0, cr), acc0[r]));
    _mm512_mask_storeu_ps(cr + 16, m1, _mm512_add_ps(_mm512_maskz_loadu_ps(m1, cr + 16), acc1[r]));
  }
}

void tile_rows(std::int64_t rows, std::int64_t k, const float* a, std::int64_t ars, std::int64_t acs,
               const float* b, std::int64_t ldb, float* c, std::int64_t ldc, __mmask16 m0, __mmask16 m1) {
  switch (rows) {
    case 8: tile<8>(k, a, ars, acs, b, ldb, c, ldc, m0, m1); break;
    case 7: tile<7>(k, a, ars, acs, b, ldb, c, ldc, m0, m1); break;
    case 6: tile<6>(k, a, ars, acs, b, ldb, c, ldc, m0, m1); break;
    case 5: tile<5>(k, a, ars, acs, b, ldb, c, ldc, m0, m1); break;
    case 4: tile<4>(k, a, ars, acs, b, ldb, c, ldc, m0, m1); break;
    case 3: tile<3>(k, a, ars, acs, b, ldb, c, ldc, m0, m1); break;
    case 2: tile<2>(k, a, ars, acs, b, ldb, c, ldc, m0, m1); break;
    case 1: tile<1>(k, a, ars, acs, b, ldb, c, ldc, m0, m1); break;
    default: break;
  }
}

void gemm_acc_avx512(std::int64_t m, std::int64_t n, std::int64_t k, StridedMatrix a,
                     const float* b, std::int64_t ldb, float* c, std::int64_t ldc) {
  for (std::int64_t pc = 0; pc < k; pc += kDepthChunk) {
    const std::int64_t kc = std::min(kDepthChunk, k - pc);
    for (std::int64_t ic = 0; ic < m; ic += kRowChunk) {
      const std::int64_t mc = std::min(kRowChunk, m - ic);
      for (std::int64_t jc = 0; jc < n; jc += kColBlock) {
        const std::int64_t nc = std::min(kColBlock, n - jc);
        const __mmask16 m0 = tail_mask(nc);
        const __mmask16 m1 = tail_mask(nc - 16);
        const float* bp = b + pc * ldb + jc;
        for (std::int64_t i = 0; i < mc; i += kRowBlock) {
          const std::int64_t rows = std::min(kRowBlock, mc - i);
          tile_rows(rows, kc, a.data + (ic + i) * a.row_stride + pc * a.col_stride, a.row_stride, a.col_stride,
                    bp, ldb, c + (ic + i) * ldc + jc, ldc, m0, m1);
        }
      }
    }
  }
}

float dot_avx512(const float* x, const float* y, std::int64_t len) {
  __m512 acc = _mm512_setzero_ps();
  std::int64_t i = 0;
  for (; i + 16 <= len; i += 16) acc = _mm512_fmadd_ps(_mm512_loadu_ps(x + i), _mm512_loadu_ps(y + i), acc);
  const __mmask16 m = tail_mask(len - i);
  acc = _mm512_fmadd_ps(_mm512_maskz_loadu_ps(m, x + i), _mm512_maskz_loadu_ps(m, y + i), acc);
  return _mm512_reduce_add_ps(acc);
}

void axpy_avx512(float alpha, const float* x, float* y, std::int64_t len) {
  const __m512 av = _mm512_set1_ps(alpha);
  std::int64_t i = 0;
  for (; i + 16 <= len; i += 16) {
    _mm512_storeu_ps(y + i, _mm512_fmadd_ps(av, _mm512_loadu_ps(x + i), _mm512_loadu_ps(y + i)));
  }
  const __mmask16 m = tail_mask(len - i);
  _mm512_mask_storeu_ps(y + i, m, _mm512_fmadd_ps(av, _mm512_maskz_loadu_ps(m, x + i), _mm512_maskz_loadu_ps(m, y + i)));
}

void relu_avx512(const float* x, float* y, std::int64_t len) {
  const __m512 zero = _mm512_setzero_ps();
  std::int64_t i = 0;
  for (; i + 16 <= len; i += 16) _mm512_storeu_ps(y + i, _mm512_max_ps(_mm512_loadu_ps(x + i), zero));
  const __mmask16 m = tail_mask(len - i);
  _mm512_mask_storeu_ps(y + i, m, _mm512_max_ps(_mm512_maskz_loadu_ps(m, x + i), zero));
}

void relu_grad_acc_avx512(const float* x, const float* gy, float* gx, std::int64_t len) {
  const __m512 zero = _mm512_setzero_ps();
  for (std::int64_t i = 0; i < len; i += 16) {
    const __mmask16 m = tail_mask(len - i);
    const __mmask16 keep = _mm512_mask_cmp_ps_mask(m, _mm512_maskz_loadu_ps(m, x + i), zero, _CMP_GT_OQ);
    const __m512 sum = _mm512_add_ps(_mm512_maskz_loadu_ps(m, gx + i), _mm512_maskz_loadu_ps(keep, gy + i));
    _mm512_mask_storeu_ps(gx + i, m, sum);
  }
}

void mul_avx512(const float* x, const float* y, float* out, std::int64_t len) {
  for (std::int64_t i = 0; i < len; i += 16) {
    const __mmask16 m = tail_mask(len - i);
    _mm512_mask_storeu_ps(out + i, m, _mm512_mul_ps(_mm512_maskz_loadu_ps(m, x + i), _mm512_maskz_loadu_ps(m, y + i)));
  }
}

}  // namespace

const KernelTable& avx512_kernel_table() {
  static const KernelTable table{
      "avx512",    gemm_acc_avx512,      dot_avx512, axpy_avx512,
      relu_avx512, relu_grad_acc_avx512, mul_avx512,
  };
  return table;
}

}  // namespace af::simd
