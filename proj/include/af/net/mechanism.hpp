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

#include <memory>

#include "af/mechanism.hpp"
#include "af/net/mechanism_net.hpp"

namespace af::net {

// Adapter presenting a network as a Mechanism; probes back-propagate through
// the frozen network to the reported bids.
class NetMechanism final : public Mechanism {
 public:
  explicit NetMechanism(const MechanismNet& net) : net_(&net) {}

  std::string name() const override { return "citransnet"; }
  AuctionOutcome run(const AuctionBatch& batch) const override { return net_->run(batch); }
  UtilityProbe probe(const AuctionBatch& batch, std::span<const int> bidder,
                     std::span<const float> values) const override;
  bool differentiable() const override { return true; }

 private:
  const MechanismNet* net_;
};

}  // namespace af::net
