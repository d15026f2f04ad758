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
#include <vector>

#include "af/auction.hpp"
#include "af/env/setting.hpp"

namespace af::env {

// Contexts for samples [first, first + count). Each sample draws from its own
// substream, so any index range reproduces the same rows as a full run.
// Discrete ids are uniform on 1..|X| (1..|Y|); continuous contexts are
// uniform on [-1, 1]^10.
ContextBatch sample_contexts(const SettingSpec& spec, int count, std::uint64_t seed, std::int64_t first = 0);

// Values [count, n, m] drawn by inverse CDF from each pair's conditional law.
std::vector<float> sample_valuations(const SettingSpec& spec, const ContextBatch& contexts, std::uint64_t seed,
                                     std::int64_t first = 0);

// Upper ends of the misreport box, [count, n, m].
std::vector<float> value_caps(const SettingSpec& spec, const ContextBatch& contexts);

}  // namespace af::env
