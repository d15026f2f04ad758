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

#include "af/env/sampler.hpp"

#include <algorithm>

#include "af/env/random.hpp"
#include "af/env/value_law.hpp"
#include "af/errors.hpp"

namespace af::env {

ContextBatch sample_contexts(const SettingSpec& spec, int count, std::uint64_t seed, std::int64_t first) {
  if (count < 1) throw ValidationError("sample_contexts: count must be >= 1");
  ContextBatch ctx;
  ctx.count = count;
  ctx.n = spec.n;
  ctx.m = spec.m;
  ctx.bidder_dim = spec.bidder_dim;
  ctx.item_dim = spec.item_dim;
  ctx.bidder.reserve(static_cast<std::size_t>(count) * spec.n * spec.bidder_dim);
  ctx.item.reserve(static_cast<std::size_t>(count) * spec.m * spec.item_dim);
  const CounterRng root(derive_seed(seed, "contexts"));
  for (int k = 0; k < count; ++k) {
    CounterRng rng = root.substream(static_cast<std::uint64_t>(first + k));
    if (spec.discrete()) {
      for (int i = 0; i < spec.n; ++i) ctx.bidder.push_back(static_cast<float>(rng.next_int(1, spec.bidder_domain)));
      for (int j = 0; j < spec.m; ++j) ctx.item.push_back(static_cast<float>(rng.next_int(1, spec.item_domain)));
    } else {
      for (int i = 0; i < spec.n * spec.bidder_dim; ++i) ctx.bidder.push_back(static_cast<float>(rng.next_uniform(-1.0, 1.0)));
      for (int j = 0; j < spec.m * spec.item_dim; ++j) ctx.item.push_back(static_cast<float>(rng.next_uniform(-1.0, 1.0)));
    }
  }
  return ctx;
}

std::vector<float> sample_valuations(const SettingSpec& spec, const ContextBatch& contexts, std::uint64_t seed,
                                     std::int64_t first) {
  std::vector<float> v;
  v.reserve(static_cast<std::size_t>(contexts.count) * spec.n * spec.m);
  const CounterRng root(derive_seed(seed, "values"));
  for (int k = 0; k < contexts.count; ++k) {
    CounterRng rng = root.substream(static_cast<std::uint64_t>(first + k));
    for (int i = 0; i < spec.n; ++i) {
      for (int j = 0; j < spec.m; ++j) {
        const ValueLaw law = conditional_law(spec, i, contexts.bidder_context(k, i), contexts.item_context(k, j));
        const float draw = static_cast<float>(law.quantile(rng.next_open_uniform()));
        // Rounding to float can step past the cap of a continuous law.
        v.push_back(std::min(draw, static_cast<float>(law.hi)));
      }
    }
  }
  return v;
}

std::vector<float> value_caps(const SettingSpec& spec, const ContextBatch& contexts) {
  std::vector<float> caps;
  caps.reserve(static_cast<std::size_t>(contexts.count) * spec.n * spec.m);
  for (int k = 0; k < contexts.count; ++k) {
    for (int i = 0; i < spec.n; ++i) {
      for (int j = 0; j < spec.m; ++j) caps.push_back(value_cap(spec, contexts.bidder_context(k, i), contexts.item_context(k, j)));
    }
  }
  return caps;
}

}  // namespace af::env
