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

#pragma once

// Data-parallel inner loops used by the tensor engine. Every kernel has a
// scalar reference implementation; vectorized variants (AVX2+FMA and AVX-512F on
// x86-64, NEON on AArch64) are compiled when the toolchain allows it and selected at
// runtime when the CPU supports them. Variants agree with the reference up to
// floating-point reassociation, which the equivalence tests bound.

#include <cstdint>
#include <string_view>
#include <vector>

namespace af::simd {

// Left gemm operand: element (r, c) lives at data[r * row_stride + c * col_stride].
// A transposed view is just swapped strides.
struct StridedMatrix {
  const float* data = nullptr;
  std::int64_t row_stride = 0;
  std::int64_t col_stride = 1;
};

struct KernelTable {
  std::string_view name;

  // c[m x n] += a[m x k] * b[k x n]; b and c row-major with leading dims ldb, ldc.
  void (*gemm_acc)(std::int64_t m, std::int64_t n, std::int64_t k, StridedMatrix a,
                   const float* b, std::int64_t ldb, float* c, std::int64_t ldc);

  float (*dot)(const float* x, const float* y, std::int64_t len);

  // y += alpha * x
  void (*axpy)(float alpha, const float* x, float* y, std::int64_t len);

  // y = max(x, 0)
  void (*relu)(const float* x, float* y, std::int64_t len);

  // gx += (x > 0) ? gy : 0
  void (*relu_grad_acc)(const float* x, const float* gy, float* gx, std::int64_t len);

  // out = x * y, elementwise
  void (*mul)(const float* x, const float* y, float* out, std::int64_t len);
};

const KernelTable& scalar_kernels();

// Null when the variant was not compiled in or this CPU lacks the ISA.
const KernelTable* avx2_kernels();
const KernelTable* avx512_kernels();
const KernelTable* neon_kernels();

// All variants usable on this machine, reference first.
std::vector<const KernelTable*> available_kernels();

// The table used by the tensor engine. Defaults to the widest supported
// variant; AF_KERNELS=scalar|avx2|avx512|neon in the environment overrides it.
const KernelTable& active_kernels();

// Returns false when the named variant is unavailable.
bool select_kernels(std::string_view name);

// Flushes subnormal results and inputs to zero on the calling thread for the
// guard's lifetime, then restores the previous mode. Subnormals make the
// vector units take a microcode path that is two orders of magnitude slower,
// and long training runs drift into that range. No-op off x86-64.
class FlushDenormals {
 public:
  FlushDenormals();
  ~FlushDenormals();
  FlushDenormals(const FlushDenormals&) = delete;
  FlushDenormals& operator=(const FlushDenormals&) = delete;

 private:
  unsigned saved_ = 0;
};

}  // namespace af::simd
