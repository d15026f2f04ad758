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

#include "af/net/mechanism.hpp"

#include "af/errors.hpp"
#include "af/tensor/ops.hpp"

namespace af {

namespace {

float utility_of(const AuctionOutcome& o, int k, int i, const float* v) {
  double total = -o.p(k, i);
  for (int j = 0; j < o.m; ++j) total += static_cast<double>(o.g(k, i, j)) * v[j];
  return static_cast<float>(total);
}

}  // namespace

std::vector<float> bidder_utility(const AuctionOutcome& o, std::span<const int> bidder,
                                  std::span<const float> values) {
  std::vector<float> u(static_cast<std::size_t>(o.count));
  for (int k = 0; k < o.count; ++k) {
    u[static_cast<std::size_t>(k)] = utility_of(o, k, bidder[static_cast<std::size_t>(k)], values.data() + static_cast<std::size_t>(k) * o.m);
  }
  return u;
}

std::vector<float> all_utilities(const AuctionOutcome& o, std::span<const float> values) {
  std::vector<float> u(static_cast<std::size_t>(o.count) * o.n);
  for (int k = 0; k < o.count; ++k) {
    for (int i = 0; i < o.n; ++i) {
      const std::size_t ki = static_cast<std::size_t>(k) * o.n + i;
      u[ki] = utility_of(o, k, i, values.data() + ki * o.m);
    }
  }
  return u;
}

namespace {

void check_probe(const AuctionBatch& batch, std::span<const int> bidder, std::span<const float> values) {
  if (bidder.size() != static_cast<std::size_t>(batch.count) ||
      values.size() != static_cast<std::size_t>(batch.count) * batch.m) {
    throw ShapeError("probe: bidder/value arrays do not match the batch");
  }
  for (int i : bidder) {
    if (i < 0 || i >= batch.n) throw ShapeError("probe: bidder index out of range");
  }
}

}  // namespace

UtilityProbe Mechanism::probe(const AuctionBatch& batch, std::span<const int> bidder,
                              std::span<const float> values) const {
  check_probe(batch, bidder, values);
  UtilityProbe out;
  out.utility = bidder_utility(run(batch), bidder, values);
  out.grad.assign(static_cast<std::size_t>(batch.count) * batch.m, 0.0f);
  return out;
}

namespace net {

UtilityProbe NetMechanism::probe(const AuctionBatch& batch, std::span<const int> bidder,
                                 std::span<const float> values) const {
  check_probe(batch, bidder, values);
  net_->check_batch(batch);
  const int count = batch.count, n = batch.n, m = batch.m;
  // Values scattered into the probed bidder's row and a one-hot payment mask,
  // so the sum over the batch separates into per-instance utilities.
  std::vector<float> value_grid(static_cast<std::size_t>(count) * n * m, 0.0f);
  std::vector<float> pay_mask(static_cast<std::size_t>(count) * n, 0.0f);
  for (int k = 0; k < count; ++k) {
    const int i = bidder[static_cast<std::size_t>(k)];
    pay_mask[static_cast<std::size_t>(k) * n + i] = 1.0f;
    for (int j = 0; j < m; ++j) {
      value_grid[(static_cast<std::size_t>(k) * n + i) * m + j] = values[static_cast<std::size_t>(k) * m + j];
    }
  }
  Graph g;
  const BoundParams p = bind_params(g, net_->params(), false);
  const Var bids = g.leaf(Tensor({count, n, m}, batch.bids, true));
  const OutcomeVars o = net_->build(g, p, bids, batch.contexts);
  const Var gain = ops::sum(g, ops::mul(g, o.allocation, g.constant(Tensor({count, n, m}, std::move(value_grid)))));
  const Var paid = ops::sum(g, ops::mul(g, o.payments, g.constant(Tensor({count, n}, std::move(pay_mask)))));
  const Gradients grads = backward(g, ops::sub(g, gain, paid));

  UtilityProbe out;
  out.utility = bidder_utility(outcome_from(g, o, count, n, m), bidder, values);
  const Tensor gb = grads.of(bids);
  out.grad.resize(static_cast<std::size_t>(count) * m);
  for (int k = 0; k < count; ++k) {
    const int i = bidder[static_cast<std::size_t>(k)];
    for (int j = 0; j < m; ++j) out.grad[static_cast<std::size_t>(k) * m + j] = gb[(static_cast<std::int64_t>(k) * n + i) * m + j];
  }
  return out;
}

}  // namespace net
}  // namespace af
