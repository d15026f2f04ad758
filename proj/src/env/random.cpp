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

#include "af/env/random.hpp"

namespace af {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_label(std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view label) {
  return mix64(mix64(master) ^ hash_label(label));
}

CounterRng CounterRng::substream(std::uint64_t index) const {
  return CounterRng(mix64(key_ ^ mix64(index ^ 0x5851f42d4c957f2dULL)));
}

CounterRng CounterRng::substream(std::string_view label) const { return CounterRng(mix64(key_ ^ hash_label(label))); }

std::uint64_t CounterRng::next_bits() { return mix64(key_ + 0x2545f4914f6cdd1dULL * (++counter_)); }

double CounterRng::next_uniform() { return static_cast<double>(next_bits() >> 11) * 0x1.0p-53; }

double CounterRng::next_open_uniform() {
  return (static_cast<double>(next_bits() >> 11) + 0.5) * 0x1.0p-53;
}

std::int64_t CounterRng::next_int(std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  // Multiply-shift; bias is below 2^-64 * span and irrelevant for small domains.
  const auto r = static_cast<unsigned __int128>(next_bits()) * span;
  return lo + static_cast<std::int64_t>(r >> 64);
}

}  // namespace af
