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

#include <cstdint>
#include <string_view>

namespace af {

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

std::uint64_t hash_label(std::string_view label);

// Stream seed derived from a master seed by labeled hashing, so the data,
// init, misreport and eval streams never overlap.
std::uint64_t derive_seed(std::uint64_t master, std::string_view label);

// Counter-based generator: draw k of a stream is a pure function of
// (key, k), which makes per-sample streams shardable by index range.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  CounterRng substream(std::uint64_t index) const;
  CounterRng substream(std::string_view label) const;

  std::uint64_t key() const { return key_; }

  std::uint64_t next_bits();
  // Uniform on [0, 1) with 53 random bits.
  double next_uniform();
  // Uniform on the open interval (0, 1); safe for inverse-CDF sampling.
  double next_open_uniform();
  double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_uniform(); }
  // Uniform integer in [lo, hi].
  std::int64_t next_int(std::int64_t lo, std::int64_t hi);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace af
