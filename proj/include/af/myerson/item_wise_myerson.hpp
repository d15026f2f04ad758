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

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "af/env/dataset.hpp"
#include "af/mechanism.hpp"
#include "af/myerson/virtual_values.hpp"

namespace af::myerson {

// Law of bidder i's value for item j in instance k.
using LawFn = std::function<env::ValueLaw(const ContextBatch& contexts, int instance, int bidder, int item)>;

// Runs a separate Myerson auction per item: the bidder with the highest
// positive ironed virtual value wins (ties to the lowest index) and pays
// the smallest bid that would still have won.
class ItemWiseMyerson final : public Mechanism {
 public:
  explicit ItemWiseMyerson(const env::SettingSpec& spec, int grid = 2048);
  ItemWiseMyerson(LawFn laws, int grid = 2048);

  std::string name() const override { return "item_wise_myerson"; }
  AuctionOutcome run(const AuctionBatch& batch) const override;

  // Memoized by law parameters.
  std::shared_ptr<const VirtualValueTable> table(const env::ValueLaw& law) const;

 private:
  using Key = std::tuple<int, double, double, double, double, double>;
  static constexpr std::size_t kCacheLimit = 4096;

  LawFn laws_;
  int grid_;
  mutable std::mutex mutex_;
  mutable std::map<Key, std::shared_ptr<const VirtualValueTable>> cache_;
};

// Mean over samples of total payments under truthful bids.
double baseline_revenue(const Mechanism& mechanism, const env::Dataset& data);

}  // namespace af::myerson
