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

#include <atomic>
#include <cstdlib>

#if defined(__x86_64__) || defined(_M_X64)
#include <xmmintrin.h>
#define AF_HAVE_MXCSR 1
#endif

namespace af::simd {

#if defined(AF_HAVE_AVX2)
const KernelTable& avx2_kernel_table();
#endif
#if defined(AF_HAVE_AVX512)
const KernelTable& avx512_kernel_table();
#endif
#if defined(AF_HAVE_NEON)
const KernelTable& neon_kernel_table();
#endif

const KernelTable* avx2_kernels() {
#if defined(AF_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &avx2_kernel_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* avx512_kernels() {
#if defined(AF_HAVE_AVX512) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = __builtin_cpu_supports("avx512f");
  return supported ? &avx512_kernel_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* neon_kernels() {
#if defined(AF_HAVE_NEON)
  return &neon_kernel_table();
#else
  return nullptr;
#endif
}

std::vector<const KernelTable*> available_kernels() {
  std::vector<const KernelTable*> out{&scalar_kernels()};
  if (const auto* t = avx2_kernels()) out.push_back(t);
  if (const auto* t = avx512_kernels()) out.push_back(t);
  if (const auto* t = neon_kernels()) out.push_back(t);
  return out;
}

namespace {

const KernelTable* find_kernels(std::string_view name) {
  for (const auto* t : available_kernels()) {
    if (t->name == name) return t;
  }
  return nullptr;
}

const KernelTable* default_kernels() {
  if (const char* env = std::getenv("AF_KERNELS")) {
    if (const auto* t = find_kernels(env)) return t;
  }
  return available_kernels().back();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{default_kernels()};
  return table;
}

}  // namespace

const KernelTable& active_kernels() { return *current().load(std::memory_order_relaxed); }

bool select_kernels(std::string_view name) {
  const auto* t = find_kernels(name);
  if (t == nullptr) return false;
  current().store(t, std::memory_order_relaxed);
  return true;
}

#if defined(AF_HAVE_MXCSR)
// FTZ (bit 15) and DAZ (bit 6) of MXCSR.
constexpr unsigned kFlushBits = 0x8040u;
FlushDenormals::FlushDenormals() : saved_(_mm_getcsr()) { _mm_setcsr(saved_ | kFlushBits); }
FlushDenormals::~FlushDenormals() { _mm_setcsr(saved_); }
#else
FlushDenormals::FlushDenormals() = default;
FlushDenormals::~FlushDenormals() = default;
#endif

}  // namespace af::simd
