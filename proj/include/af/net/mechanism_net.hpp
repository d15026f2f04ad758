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
#include <string_view>
#include <vector>

#include "af/auction.hpp"
#include "af/net/params.hpp"
#include "af/tensor/graph.hpp"

namespace af::net {

// Parameters placed on a graph, addressable by name.
class BoundParams {
 public:
  BoundParams(const MechanismParams& params, std::vector<Var> vars) : params_(&params), vars_(std::move(vars)) {}
  Var operator[](std::string_view name) const { return vars_[params_->index_of(name)]; }
  std::span<const Var> vars() const { return vars_; }

 private:
  const MechanismParams* params_;
  std::vector<Var> vars_;
};

// Leaves for every parameter. With trainable=false they are constants and
// the backward sweep skips all weight gradients.
BoundParams bind_params(Graph& g, const MechanismParams& params, bool trainable);

struct OutcomeVars {
  Var allocation;        // g [B, n, m]
  Var payments;          // p [B, n]
  Var softmax_share;     // h [B, n, m]
  Var keep_weight;       // q [B, n, m]
  Var payment_fraction;  // p~ [B, n]
};

// Context features per bidder [B, n, Dx] and per item [B, m, Dy]: embedding
// lookups for discrete ids (id k -> row k-1), raw vectors otherwise.
struct ContextVars {
  Var bidder;
  Var item;
};
ContextVars embed_contexts(Graph& g, const NetConfig& config, const BoundParams& p, const ContextBatch& contexts);

// Pair features [b_ij; e_x; f_y] through two 1x1 convolutions, with the raw
// bid concatenated in front: [B, n, m, d].
Var input_layer(Graph& g, const NetConfig& config, const BoundParams& p, Var bids, const ContextVars& ctx);

// Self-attention plus token-wise MLP along one axis of [B, n, m, d]:
// seq_axis 2 attends across items within a bidder row, 1 across bidders.
Var transformer(Graph& g, const NetConfig& config, const BoundParams& p, Var x, int layer, int seq_axis);

// Row transformer, column transformer and the global mean token, merged by
// two 1x1 convolutions. The last layer emits 3 channels.
Var interaction_layer(Graph& g, const NetConfig& config, const BoundParams& p, Var x, int layer);

// Channels of f [B, n, m, 3] -> allocation and payments for bids [B, n, m].
OutcomeVars output_layer(Graph& g, Var f, Var bids);

class MechanismNet {
 public:
  MechanismNet(NetConfig config, std::uint64_t seed);
  MechanismNet(NetConfig config, MechanismParams params);

  const NetConfig& config() const { return config_; }
  const MechanismParams& params() const { return params_; }
  MechanismParams& params() { return params_; }

  // Builds the whole forward pass on g. bids must be [B, n, m].
  OutcomeVars build(Graph& g, const BoundParams& p, Var bids, const ContextBatch& contexts) const;

  // Forward without gradients.
  AuctionOutcome run(const AuctionBatch& batch) const;

  // Throws ValidationError when the batch cannot be fed to this network.
  void check_batch(const AuctionBatch& batch) const;

 private:
  NetConfig config_;
  MechanismParams params_;
};

AuctionOutcome outcome_from(const Graph& g, const OutcomeVars& out, int count, int n, int m);

}  // namespace af::net
