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

// NEON variants for AArch64, where Advanced SIMD is architecturally guaranteed.

#include <arm_neon.h>

#include <algorithm>

#include "af/simd/kernels.hpp"

namespace af::simd {
namespace {

constexpr std::int64_t kRowBlock = 4;
constexpr std::int64_t kColBlock = 8;

// 4x8 register tile; columns past `width` are handled by the scalar tail.
template <int MR>
void tile(std::int64_t k, const float* a, std::int64_t ars, std::int64_t acs, const float* b,
          std::int64_t ldb, float* c, std::int64_t ldc) {
  float32x4_t acc0[MR];
  float32x4_t acc1[MR];
  for (int r = 0; r < MR; ++r) {
    acc0[r] = vdupq_n_f32(0.0f);
    acc1[r] = vdupq_n_f32(0.0f);
  }
  for (std::int64_t p = 0; p < k; ++p) {
    const float* bp = b + p * ldb;
    const float32x4_t b0 = vld1q_f32(bp);
    const float32x4_t b1 = vld1q_f32(bp + 4);
    const float* ap = a + p * acs;
    for (int r = 0; r < MR; ++r) {
      const float32x4_t av = vdupq_n_f32(ap[r * ars]);
      acc0[r] = vfmaq_f32(acc0[r], av, b0);
      acc1[r] = vfmaq_f32(acc1[r], av, b1);
    }
  }
  for (int r = 0; r < MR; ++r) {
    float* cr = c + r * ldc;
    vst1q_f32(cr, vaddq_f32(vld1q_f32(cr), acc0[r]));
    vst1q_f32(cr + 4, vaddq_f32(vld1q_f32(cr + 4), acc1[r]));
  }
}

void gemm_acc_neon(std::int64_t m, std::int64_t n, std::int64_t k, StridedMatrix a,
                   const float* b, std::int64_t ldb, float* c, std::int64_t ldc) {
  const std::int64_t n_main = n - n % kColBlock;
  for (std::int64_t jc = 0; jc < n_main; jc += kColBlock) {
    for (std::int64_t i = 0; i < m; i += kRowBlock) {
      const std::int64_t rows = std::min(kRowBlock, m - i);
      const float* ap = a.data + i * a.row_stride;
      float* cp = c + i * ldc + jc;
      switch (rows) {
        case 4: tile<4>(k, ap, a.row_stride, a.col_stride, b + jc, ldb, cp, ldc); break;
        case 3: tile<3>(k, ap, a.row_stride, a.col_stride, b + jc, ldb, cp, ldc); break;
        case 2: tile<2>(k, ap, a.row_stride, a.col_stride, b + jc, ldb, cp, ldc); break;
        default: tile<1>(k, ap, a.row_stride, a.col_stride, b + jc, ldb, cp, ldc); break;
      }
    }
  }
  for (std::int64_t i = 0; i < m; ++i) {
    float* crow = c + i * ldc;
    for (std::int64_t p = 0; p < k; ++p) {
      const float av = a.data[i * a.row_stride + p * a.col_stride];
      const float* brow = b + p * ldb;
      for (std::int64_t j = n_main; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

float dot_neon(const float* x, const float* y, std::int64_t len) {
  float32x4_t acc = vdupq_n_f32(0.0f);
  std::int64_t i = 0;
  for (; i + 4 <= len; i += 4) acc = vfmaq_f32(acc, vld1q_f32(x + i), vld1q_f32(y + i));
  float total = vaddvq_f32(acc);
  for (; i < len; ++i) total += x[i] * y[i];
  return total;
}

void axpy_neon(float alpha, const float* x, float* y, std::int64_t len) {
  const float32x4_t av = vdupq_n_f32(alpha);
  std::int64_t i = 0;
  for (; i + 4 <= len; i += 4) vst1q_f32(y + i, vfmaq_f32(vld1q_f32(y + i), av, vld1q_f32(x + i)));
  for (; i < len; ++i) y[i] += alpha * x[i];
}

void relu_neon(const float* x, float* y, std::int64_t len) {
  const float32x4_t zero = vdupq_n_f32(0.0f);
  std::int64_t i = 0;
  for (; i + 4 <= len; i += 4) vst1q_f32(y + i, vmaxq_f32(vld1q_f32(x + i), zero));
  for (; i < len; ++i) y[i] = x[i] > 0.0f ? x[i] : 0.0f;
}

void relu_grad_acc_neon(const float* x, const float* gy, float* gx, std::int64_t len) {
  const float32x4_t zero = vdupq_n_f32(0.0f);
  std::int64_t i = 0;
  for (; i + 4 <= len; i += 4) {
    const uint32x4_t keep = vcgtq_f32(vld1q_f32(x + i), zero);
    const float32x4_t g =
        vreinterpretq_f32_u32(vandq_u32(keep, vreinterpretq_u32_f32(vld1q_f32(gy + i))));
    vst1q_f32(gx + i, vaddq_f32(vld1q_f32(gx + i), g));
  }
  for (; i < len; ++i) {
    if (x[i] > 0.0f) gx[i] += gy[i];
  }
}

void mul_neon(const float* x, const float* y, float* out, std::int64_t len) {
  std::int64_t i = 0;
  for (; i + 4 <= len; i += 4) vst1q_f32(out + i, vmulq_f32(vld1q_f32(x + i), vld1q_f32(y + i)));
  for (; i < len; ++i) out[i] = x[i] * y[i];
}

}  // namespace

const KernelTable& neon_kernel_table() {
  static const KernelTable table{
      "neon",    gemm_acc_neon,      dot_neon, axpy_neon,
      relu_neon, relu_grad_acc_neon, mul_neon,
  };
  return table;
}

}  // namespace af::simd
