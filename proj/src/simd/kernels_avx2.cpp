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

// AVX2 + FMA variants. This translation unit is compiled with -mavx2 -mfma;
// nothing in it may run before the dispatcher has confirmed CPU support.

#include <immintrin.h>

#include <algorithm>

#include "af/simd/kernels.hpp"

namespace af::simd {
namespace {

constexpr std::int64_t kRowBlock = 6;
constexpr std::int64_t kColBlock = 16;
constexpr std::int64_t kRowChunk = 96;
constexpr std::int64_t kDepthChunk = 256;

inline __m256i lane_mask(std::int64_t valid) {
  const __m256i idx = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);
  return _mm256_cmpgt_epi32(_mm256_set1_epi32(static_cast<int>(valid)), idx);
}

// 6x16 register tile: two ymm accumulators per row, B rows loaded once per
// depth step and reused across the row block.
template <int MR, bool kFull>
void tile(std::int64_t k, const float* a, std::int64_t ars, std::int64_t acs, const float* b,
          std::int64_t ldb, float* c, std::int64_t ldc, __m256i m0, __m256i m1) {
  __m256 acc0[MR];
  __m256 acc1[MR];
#pragma GCC unroll 6
  for (int r = 0; r < MR; ++r) {
    acc0[r] = _mm256_setzero_ps();
    acc1[r] = _mm256_setzero_ps();
  }
  for (std::int64_t p = 0; p < k; ++p) {
    const float* bp = b + p * ldb;
    const __m256 b0 = kFull ? _mm256_loadu_ps(bp) : _mm256_maskload_ps(bp, m0);
    const __m256 b1 = kFull ? _mm256_loadu_ps(bp + 8) : _mm256_maskload_ps(bp + 8, m1);
    const float* ap = a + p * acs;
#pragma GCC unroll 6
    for (int r = 0; r < MR; ++r) {
      const __m256 av = _mm256_broadcast_ss(ap + r * ars);
      acc0[r] = _mm256_fmadd_ps(av, b0, acc0[r]);
      acc1[r] = _mm256_fmadd_ps(av, b1, acc1[r]);
    }
  }
#pragma GCC unroll 6
  for (int r = 0; r < MR; ++r) {
    float* cr = c + r * ldc;
    if constexpr (kFull) {
      _mm256_storeu_ps(cr, _mm256_add_ps(_mm256_loadu_ps(cr), acc0[r]));
      _mm256_storeu_ps(cr + 8, _mm256_add_ps(_mm256_loadu_ps(cr + 8), acc1[r]));
    } else {
      _mm256_maskstore_ps(cr, m0, _mm256_add_ps(_mm256_maskload_ps(cr, m0), acc0[r]));
      _mm256_maskstore_ps(cr + 8, m1, _mm256_add_ps(_mm256_maskload_ps(cr + 8, m1), acc1[r]));
    }
  }
}

template <bool kFull>
void tile_rows(std::int64_t rows, std::int64_t k, const float* a, std::int64_t ars,
               std::int64_t acs, const float* b, std::int64_t ldb, float* c, std::int64_t ldc,
               __m256i m0, __m256i m1) {
  switch (rows) {
    case 6: tile<6, kFull>(k, a, ars, acs, b, ldb, c, ldc, m0, m1); break;
    case 5: tile<5, kFull>(k, a, ars, acs, b, ldb, c, ldc, m0, m1); break;
    case 4: tile<4, kFull>(k, a, ars, acs, b, ldb, c, ldc, m0, m1); break;
    case 3: tile<3, kFull>(k, a, ars, acs, b, ldb, c, ldc, m0, m1); break;
    case 2: tile<2, kFull>(k, a, ars, acs, b, ldb, c, ldc, m0, m1); break;
    case 1: tile<1, kFull>(k, a, ars, acs, b, ldb, c, ldc, m0, m1); break;
    default: break;
  }
}

void gemm_acc_avx2(std::int64_t m, std::int64_t n, std::int64_t k, StridedMatrix a,
                   const float* b, std::int64_t ldb, float* c, std::int64_t ldc) {
  const __m256i full = _mm256_set1_epi32(-1);
  for (std::int64_t pc = 0; pc < k; pc += kDepthChunk) {
    const std::int64_t kc = std::min(kDepthChunk, k - pc);
    for (std::int64_t ic = 0; ic < m; ic += kRowChunk) {
      const std::int64_t mc = std::min(kRowChunk, m - ic);
      for (std::int64_t jc = 0; jc < n; jc += kColBlock) {
        const std::int64_t nc = std::min(kColBlock, n - jc);
        const float* bp = b + pc * ldb + jc;
        const bool whole = nc == kColBlock;
        const __m256i m0 = whole ? full : lane_mask(nc);
        const __m256i m1 = whole ? full : lane_mask(nc - 8);
        for (std::int64_t i = 0; i < mc; i += kRowBlock) {
          const std::int64_t rows = std::min(kRowBlock, mc - i);
          const float* ap = a.data + (ic + i) * a.row_stride + pc * a.col_stride;
          float* cp = c + (ic + i) * ldc + jc;
          if (whole) {
            tile_rows<true>(rows, kc, ap, a.row_stride, a.col_stride, bp, ldb, cp, ldc, m0, m1);
          } else {
            tile_rows<false>(rows, kc, ap, a.row_stride, a.col_stride, bp, ldb, cp, ldc, m0, m1);
          }
        }
      }
    }
  }
}

inline float hsum(__m256 v) {
  __m128 lo = _mm256_castps256_ps128(v);
  const __m128 hi = _mm256_extractf128_ps(v, 1);
  lo = _mm_add_ps(lo, hi);
  __m128 shuf = _mm_movehdup_ps(lo);
  __m128 sums = _mm_add_ps(lo, shuf);
  shuf = _mm_movehl_ps(shuf, sums);
  sums = _mm_add_ss(sums, shuf);
  return _mm_cvtss_f32(sums);
}

float dot_avx2(const float* x, const float* y, std::int64_t len) {
  __m256 acc = _mm256_setzero_ps();
  std::int64_t i = 0;
  for (; i + 8 <= len; i += 8) {
    acc = _mm256_fmadd_ps(_mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i), acc);
  }
  float total = hsum(acc);
  for (; i < len; ++i) total += x[i] * y[i];
  return total;
}

void axpy_avx2(float alpha, const float* x, float* y, std::int64_t len) {
  const __m256 av = _mm256_set1_ps(alpha);
  std::int64_t i = 0;
  for (; i + 8 <= len; i += 8) {
    _mm256_storeu_ps(y + i, _mm256_fmadd_ps(av, _mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i)));
  }
  for (; i < len; ++i) y[i] += alpha * x[i];
}

void relu_avx2(const float* x, float* y, std::int64_t len) {
  const __m256 zero = _mm256_setzero_ps();
  std::int64_t i = 0;
  for (; i + 8 <= len; i += 8) _mm256_storeu_ps(y + i, _mm256_max_ps(_mm256_loadu_ps(x + i), zero));
  for (; i < len; ++i) y[i] = x[i] > 0.0f ? x[i] : 0.0f;
}

void relu_grad_acc_avx2(const float* x, const float* gy, float* gx, std::int64_t len) {
  const __m256 zero = _mm256_setzero_ps();
  std::int64_t i = 0;
  for (; i + 8 <= len; i += 8) {
    const __m256 keep = _mm256_cmp_ps(_mm256_loadu_ps(x + i), zero, _CMP_GT_OQ);
    const __m256 g = _mm256_and_ps(keep, _mm256_loadu_ps(gy + i));
    _mm256_storeu_ps(gx + i, _mm256_add_ps(_mm256_loadu_ps(gx + i), g));
  }
  for (; i < len; ++i) {
    if (x[i] > 0.0f) gx[i] += gy[i];
  }
}

void mul_avx2(const float* x, const float* y, float* out, std::int64_t len) {
  std::int64_t i = 0;
  for (; i + 8 <= len; i += 8) {
    _mm256_storeu_ps(out + i, _mm256_mul_ps(_mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i)));
  }
  for (; i < len; ++i) out[i] = x[i] * y[i];
}

}  // namespace

const KernelTable& avx2_kernel_table() {
  static const KernelTable table{
      "avx2",    gemm_acc_avx2,      dot_avx2, axpy_avx2,
      relu_avx2, relu_grad_acc_avx2, mul_avx2,
  };
  return table;
}

}  // namespace af::simd
