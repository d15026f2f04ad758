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
#include <filesystem>
#include <span>
#include <vector>

#include "af/auction.hpp"
#include "af/env/setting.hpp"

namespace af::env {

// Sampled (contexts, values) for one setting. Sample k is a pure function of
// (setting, seed, k).
struct Dataset {
  SettingSpec spec;
  std::uint64_t seed = 0;
  int count = 0;
  ContextBatch contexts;
  std::vector<float> values;  // [count, n, m]
  std::vector<float> caps;    // [count, n, m], upper ends of the value support

  // Truthful bids for the listed samples.
  AuctionBatch truthful(std::span<const int> indices) const;
  AuctionBatch truthful() const;

  // Samples [first, first + length).
  Dataset slice(int first, int length) const;
};

Dataset generate_dataset(const SettingSpec& spec, int count, std::uint64_t seed);

// Binary layout, all little-endian:
//   "AFDS" | u32 version=1 | u8 setting id | 3 zero bytes | u32 n | u32 m |
//   u32 bidder_dim | u32 item_dim | u64 count | u64 seed
// followed by `count` rows of float32: x (n*bidder_dim), y (m*item_dim), v (n*m).
void save_dataset(const Dataset& data, const std::filesystem::path& path);
Dataset load_dataset(const std::filesystem::path& path);

// One row per sample: sample,x_<i>_<k>...,y_<j>_<k>...,v_<i>_<j>...
void export_dataset_csv(const Dataset& data, const std::filesystem::path& path);

}  // namespace af::env
