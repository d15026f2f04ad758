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

#include "af/simd/kernels.hpp"

namespace af::simd {
namespace {

void gemm_acc_scalar(std::int64_t m, std::int64_t n, std::int64_t k, StridedMatrix a,
                     const float* b, std::int64_t ldb, float* c, std::int64_t ldc) {
  for (std::int64_t i = 0; i < m; ++i) {
    float* crow = c + i * ldc;
    for (std::int64_t p = 0; p < k; ++p) {
      const float av = a.data[i * a.row_stride + p * a.col_stride];
      const float* brow = b + p * ldb;
      for (std::int64_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

float dot_scalar(const float* x, const float* y, std::int64_t len) {
  float acc = 0.0f;
  for (std::int64_t i = 0; i < len; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy_scalar(float alpha, const float* x, float* y, std::int64_t len) {
  for (std::int64_t i = 0; i < len; ++i) y[i] += alpha * x[i];
}

void relu_scalar(const float* x, float* y, std::int64_t len) {
  for (std::int64_t i = 0; i < len; ++i) y[i] = x[i] > 0.0f ? x[i] : 0.0f;
}

void relu_grad_acc_scalar(const float* x, const float* gy, float* gx, std::int64_t len) {
  for (std::int64_t i = 0; i < len; ++i) {
    if (x[i] > 0.0f) gx[i] += gy[i];
  }
}

void mul_scalar(const float* x, const float* y, float* out, std::int64_t len) {
  for (std::int64_t i = 0; i < len; ++i) out[i] = x[i] * y[i];
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{
      "scalar",     gemm_acc_scalar,      dot_scalar, axpy_scalar,
      relu_scalar,  relu_grad_acc_scalar, mul_scalar,
  };
  return table;
}

}  // namespace af::simd
