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

#include "af/myerson/item_wise_myerson.hpp"

#include "af/errors.hpp"

namespace af::myerson {

ItemWiseMyerson::ItemWiseMyerson(const env::SettingSpec& spec, int grid)
    : ItemWiseMyerson(
          [spec](const ContextBatch& c, int k, int i, int j) {
            return env::conditional_law(spec, i, c.bidder_context(k, i), c.item_context(k, j));
          },
          grid) {}

ItemWiseMyerson::ItemWiseMyerson(LawFn laws, int grid) : laws_(std::move(laws)), grid_(grid) {
  if (grid_ < 2) throw ValidationError("myerson grid must have at least 2 points");
}

std::shared_ptr<const VirtualValueTable> ItemWiseMyerson::table(const env::ValueLaw& law) const {
  const Key key{static_cast<int>(law.kind), law.mean, law.stddev, law.rate, law.lo, law.hi};
  {
    std::lock_guard<std::mutex> lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  auto built = std::make_shared<const VirtualValueTable>(build_virtual_values(law, grid_));
  std::lock_guard<std::mutex> lock(mutex_);
  if (cache_.size() >= kCacheLimit) cache_.clear();
  cache_.emplace(key, built);
  return built;
}

AuctionOutcome ItemWiseMyerson::run(const AuctionBatch& batch) const {
  if (batch.bids.size() != static_cast<std::size_t>(batch.count) * batch.n * batch.m) {
    throw ValidationError("myerson: bids do not match batch shape");
  }
  AuctionOutcome out;
  out.count = batch.count;
  out.n = batch.n;
  out.m = batch.m;
  out.allocation.assign(batch.bids.size(), 0.0f);
  out.payments.assign(static_cast<std::size_t>(batch.count) * batch.n, 0.0f);
  std::vector<std::shared_ptr<const VirtualValueTable>> tables(static_cast<std::size_t>(batch.n));
  for (int k = 0; k < batch.count; ++k) {
    for (int j = 0; j < batch.m; ++j) {
      int winner = -1;
      double best = 0.0, second = 0.0;
      for (int i = 0; i < batch.n; ++i) {
        tables[static_cast<std::size_t>(i)] = table(laws_(batch.contexts, k, i, j));
        const double b = batch.bids[(static_cast<std::size_t>(k) * batch.n + i) * batch.m + j];
        const double v = (*tables[static_cast<std::size_t>(i)])(b);
        if (v > 0.0 && (winner < 0 || v > best)) {
          if (winner >= 0) second = std::max(second, best);
          winner = i;
          best = v;
        } else if (v > 0.0) {
          second = std::max(second, v);
        }
      }
      if (winner < 0) continue;
      const VirtualValueTable& t = *tables[static_cast<std::size_t>(winner)];
      const double price = t.threshold(second);
      out.allocation[(static_cast<std::size_t>(k) * batch.n + winner) * batch.m + j] = 1.0f;
      out.payments[static_cast<std::size_t>(k) * batch.n + winner] += static_cast<float>(price);
    }
  }
  return out;
}

double baseline_revenue(const Mechanism& mechanism, const env::Dataset& data) {
  const AuctionOutcome o = mechanism.run(data.truthful());
  double total = 0.0;
  for (float p : o.payments) total += p;
  return total / data.count;
}

}  // namespace af::myerson
