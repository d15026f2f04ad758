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
#include <span>
#include <vector>

namespace af {

// Public contexts for `count` auction instances with n bidders and m items.
// Discrete ids are stored as their (integral) float values with dim 1.
struct ContextBatch {
  int count = 0;
  int n = 0;
  int m = 0;
  int bidder_dim = 1;
  int item_dim = 1;
  std::vector<float> bidder;  // [count, n, bidder_dim]
  std::vector<float> item;    // [count, m, item_dim]

  std::span<const float> bidder_context(int instance, int i) const {
    return {bidder.data() + (static_cast<std::size_t>(instance) * n + i) * bidder_dim,
            static_cast<std::size_t>(bidder_dim)};
  }
  std::span<const float> item_context(int instance, int j) const {
    return {item.data() + (static_cast<std::size_t>(instance) * m + j) * item_dim,
            static_cast<std::size_t>(item_dim)};
  }

  // Instances listed by `source` index, in order.
  ContextBatch select(std::span<const int> source) const;
};

// Bids plus contexts for a batch of auction instances.
struct AuctionBatch {
  int count = 0;
  int n = 0;
  int m = 0;
  std::vector<float> bids;  // [count, n, m]
  ContextBatch contexts;
};

// Mechanism output for a batch. g is [count, n, m], p is [count, n].
// h, q and the payment fraction are filled by the learned mechanism only.
struct AuctionOutcome {
  int count = 0;
  int n = 0;
  int m = 0;
  std::vector<float> allocation;
  std::vector<float> payments;
  std::vector<float> softmax_share;    // h
  std::vector<float> keep_weight;      // q
  std::vector<float> payment_fraction; // p~

  float g(int k, int i, int j) const { return allocation[(static_cast<std::size_t>(k) * n + i) * m + j]; }
  float p(int k, int i) const { return payments[static_cast<std::size_t>(k) * n + i]; }
};

}  // namespace af
