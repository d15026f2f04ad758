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

#include "af/checks/property_check.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "af/env/random.hpp"
#include "af/net/mechanism_net.hpp"

namespace af::checks {

namespace {

net::NetConfig random_config(CounterRng& rng) {
  net::NetConfig c;
  c.discrete = rng.next_uniform() < 0.5;
  c.bidder_vocab = 10;
  c.item_vocab = 10;
  c.bidder_dim = 10;
  c.item_dim = 10;
  return c;
}

AuctionBatch random_batch(CounterRng& rng, const net::NetConfig& c, int count, int n, int m) {
  AuctionBatch b;
  b.count = count;
  b.n = n;
  b.m = m;
  b.bids.resize(static_cast<std::size_t>(count) * n * m);
  for (float& v : b.bids) v = static_cast<float>(rng.next_uniform());
  ContextBatch& ctx = b.contexts;
  ctx.count = count;
  ctx.n = n;
  ctx.m = m;
  ctx.bidder_dim = c.discrete ? 1 : c.bidder_dim;
  ctx.item_dim = c.discrete ? 1 : c.item_dim;
  ctx.bidder.resize(static_cast<std::size_t>(count) * n * ctx.bidder_dim);
  ctx.item.resize(static_cast<std::size_t>(count) * m * ctx.item_dim);
  for (float& x : ctx.bidder) x = c.discrete ? static_cast<float>(rng.next_int(1, c.bidder_vocab)) : static_cast<float>(rng.next_uniform(-1, 1));
  for (float& y : ctx.item) y = c.discrete ? static_cast<float>(rng.next_int(1, c.item_vocab)) : static_cast<float>(rng.next_uniform(-1, 1));
  return b;
}

std::vector<int> permutation(CounterRng& rng, int size) {
  std::vector<int> p(static_cast<std::size_t>(size));
  std::iota(p.begin(), p.end(), 0);
  for (int i = size - 1; i > 0; --i) std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(rng.next_int(0, i))]);
  return p;
}

}  // namespace

EquivarianceResult check_equivariance(std::uint64_t seed, int triples, const std::vector<std::pair<int, int>>& sizes) {
  EquivarianceResult r;
  const CounterRng root(derive_seed(seed, "equivariance"));
  for (int t = 0; t < triples; ++t) {
    CounterRng rng = root.substream(static_cast<std::uint64_t>(t));
    const auto [n, m] = sizes[static_cast<std::size_t>(t) % sizes.size()];
    const net::NetConfig c = random_config(rng);
    const net::MechanismNet net(c, rng.next_bits());
    const AuctionBatch a = random_batch(rng, c, 1, n, m);
    const std::vector<int> sigma = permutation(rng, n), tau = permutation(rng, m);
    // Permuted instance: new bidder i is old sigma[i], new item j is old tau[j].
    AuctionBatch b = a;
    const ContextBatch& src = a.contexts;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < m; ++j) b.bids[static_cast<std::size_t>(i) * m + j] = a.bids[static_cast<std::size_t>(sigma[static_cast<std::size_t>(i)]) * m + tau[static_cast<std::size_t>(j)]];
      const auto x = src.bidder_context(0, sigma[static_cast<std::size_t>(i)]);
      std::copy(x.begin(), x.end(), b.contexts.bidder.begin() + static_cast<std::ptrdiff_t>(i) * src.bidder_dim);
    }
    for (int j = 0; j < m; ++j) {
      const auto y = src.item_context(0, tau[static_cast<std::size_t>(j)]);
      std::copy(y.begin(), y.end(), b.contexts.item.begin() + static_cast<std::ptrdiff_t>(j) * src.item_dim);
    }
    const AuctionOutcome oa = net.run(a), ob = net.run(b);
    for (int i = 0; i < n; ++i) {
      const int si = sigma[static_cast<std::size_t>(i)];
      r.max_deviation = std::max(r.max_deviation, std::abs(static_cast<double>(ob.p(0, i)) - oa.p(0, si)));
      for (int j = 0; j < m; ++j) {
        r.max_deviation = std::max(r.max_deviation, std::abs(static_cast<double>(ob.g(0, i, j)) - oa.g(0, si, tau[static_cast<std::size_t>(j)])));
      }
    }
    ++r.triples;
  }
  return r;
}

FeasibilityResult check_feasibility(std::uint64_t seed, std::int64_t passes) {
  FeasibilityResult r;
  const CounterRng root(derive_seed(seed, "feasibility"));
  for (std::uint64_t round = 0; r.passes < passes; ++round) {
    CounterRng rng = root.substream(round);
    const net::NetConfig c = random_config(rng);
    const net::MechanismNet net(c, rng.next_bits());
    const int n = static_cast<int>(rng.next_int(1, 6)), m = static_cast<int>(rng.next_int(1, 10));
    const int count = static_cast<int>(std::min<std::int64_t>(passes - r.passes, std::max(1, 4000 / (n * m))));
    const AuctionBatch b = random_batch(rng, c, count, n, m);
    const AuctionOutcome o = net.run(b);
    for (int k = 0; k < count; ++k) {
      for (int j = 0; j < m; ++j) {
        double total = 0.0;
        for (int i = 0; i < n; ++i) total += o.g(k, i, j);
        if (!(total > 0.0 && total < 1.0)) ++r.allocation_violations;
      }
      for (int i = 0; i < n; ++i) {
        float bound = 0.0f;
        for (int j = 0; j < m; ++j) bound += o.g(k, i, j) * b.bids[(static_cast<std::size_t>(k) * n + i) * m + j];
        const float p = o.p(k, i);
        // p = p~ * sum_j g b with p~ in (0, 1); allow the rounding of that sum.
        if (!(p >= 0.0f && p <= bound * (1.0f + 1e-6f))) ++r.payment_violations;
      }
    }
    r.passes += count;
  }
  return r;
}

}  // namespace af::checks
