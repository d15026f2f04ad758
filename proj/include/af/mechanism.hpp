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

#include <span>
#include <string>
#include <vector>

#include "af/auction.hpp"

namespace af {

// Utility of one designated bidder per instance, with its gradient with
// respect to that bidder's own bid row.
struct UtilityProbe {
  std::vector<float> utility;  // [count]
  std::vector<float> grad;     // [count, m]
};

class Mechanism {
 public:
  virtual ~Mechanism() = default;

  virtual std::string name() const = 0;
  virtual AuctionOutcome run(const AuctionBatch& batch) const = 0;

  // In instance k, bidder[k] holds values[k*m .. k*m+m) and has reported
  // batch.bids for its row. Utility is sum_j g_ij v_ij - p_i.
  // The default has no gradient information and returns zeros for it.
  virtual UtilityProbe probe(const AuctionBatch& batch, std::span<const int> bidder,
                             std::span<const float> values) const;

  virtual bool differentiable() const { return false; }
};

// Per-instance utility of bidder[k] read off an outcome.
std::vector<float> bidder_utility(const AuctionOutcome& outcome, std::span<const int> bidder,
                                  std::span<const float> values);

// Utility of every bidder [count, n] when values are [count, n, m]; the same
// arithmetic as bidder_utility, so equal inputs give equal floats.
std::vector<float> all_utilities(const AuctionOutcome& outcome, std::span<const float> values);

}  // namespace af
