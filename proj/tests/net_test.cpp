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

#include <gtest/gtest.h>

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>

#include "af/checks/property_check.hpp"
#include "af/env/dataset.hpp"
#include "af/errors.hpp"
#include "af/net/checkpoint.hpp"
#include "af/net/mechanism_net.hpp"
#include "af/tensor/ops.hpp"

namespace {

using namespace af;
using namespace af::net;

NetConfig discrete_config(int vocab_x = 10, int vocab_y = 10) {
  NetConfig c;
  c.discrete = true;
  c.bidder_vocab = vocab_x;
  c.item_vocab = vocab_y;
  return c;
}

NetConfig continuous_config(int dim = 10) {
  NetConfig c;
  c.discrete = false;
  c.bidder_dim = dim;
  c.item_dim = dim;
  return c;
}

AuctionBatch random_batch(const NetConfig& c, int count, int n, int m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  AuctionBatch b;
  b.count = count;
  b.n = n;
  b.m = m;
  b.bids.resize(static_cast<std::size_t>(count * n * m));
  for (auto& v : b.bids) v = u(rng);
  ContextBatch& x = b.contexts;
  x.count = count;
  x.n = n;
  x.m = m;
  x.bidder_dim = c.discrete ? 1 : c.bidder_dim;
  x.item_dim = c.discrete ? 1 : c.item_dim;
  x.bidder.resize(static_cast<std::size_t>(count * n * x.bidder_dim));
  x.item.resize(static_cast<std::size_t>(count * m * x.item_dim));
  if (c.discrete) {
    std::uniform_int_distribution<int> ix(1, c.bidder_vocab);
    std::uniform_int_distribution<int> iy(1, c.item_vocab);
    for (auto& v : x.bidder) v = static_cast<float>(ix(rng));
    for (auto& v : x.item) v = static_cast<float>(iy(rng));
  } else {
    std::uniform_real_distribution<float> s(-1.0f, 1.0f);
    for (auto& v : x.bidder) v = s(rng);
    for (auto& v : x.item) v = s(rng);
  }
  return b;
}

std::int64_t expected_parameter_count(const NetConfig& c) {
  const std::int64_t d = c.model_dim, ch = c.conv_hidden, h = c.mlp_hidden;
  const std::int64_t dx = c.bidder_feature_dim(), dy = c.item_feature_dim();
  std::int64_t total = c.discrete ? (c.bidder_vocab + c.item_vocab) * c.embed_dim : 0;
  total += (1 + dx + dy) * ch + ch + ch * (d - 1) + (d - 1);
  for (int l = 0; l < c.layers; ++l) {
    const std::int64_t out = l + 1 == c.layers ? 3 : d;
    total += 2 * (d * 3 * d + d * h + h + h * d + d);
    total += 3 * d * ch + ch + ch * out + out;
  }
  return total;
}

TEST(Params, CountIsScaleFreeAndMatchesArchitecture) {
  for (const NetConfig& c : {discrete_config(), continuous_config(), discrete_config(5, 1)}) {
    const MechanismNet small(c, 1);
    const MechanismNet large(c, 2);
    EXPECT_EQ(small.params().parameter_count(), large.params().parameter_count());
    EXPECT_EQ(small.params().parameter_count(), expected_parameter_count(c));
    // The same parameters serve both auction sizes.
    EXPECT_EQ(small.run(random_batch(c, 2, 2, 5, 3)).allocation.size(), 2u * 2 * 5);
    EXPECT_EQ(small.run(random_batch(c, 2, 7, 10, 3)).allocation.size(), 2u * 7 * 10);
  }
  NetConfig three = discrete_config();
  three.layers = 3;
  EXPECT_EQ(MechanismNet(three, 0).params().parameter_count(), expected_parameter_count(three));
}

TEST(Params, InitializationRanges) {
  const NetConfig c = discrete_config(5, 1);
  const MechanismParams p = init_params(c, 4);
  EXPECT_EQ(p.get("embed.bidder").shape(), (Shape{5, 16}));
  EXPECT_EQ(p.get("input.conv1.w").shape(), (Shape{1 + 16 + 16, 64}));
  EXPECT_EQ(p.get("layer1.conv4.w").shape(), (Shape{64, 3}));
  EXPECT_EQ(p.get("layer0.conv4.w").shape(), (Shape{64, 64}));
  const float bound = std::sqrt(1.0f / 33.0f);
  for (float v : p.get("input.conv1.w").data()) ASSERT_LE(std::abs(v), bound);
  for (float v : p.get("input.conv1.b").data()) ASSERT_EQ(v, 0.0f);
  EXPECT_EQ(init_params(c, 4).get("layer0.row.qkv").data()[7], p.get("layer0.row.qkv").data()[7]);
}

TEST(Params, ConfigValidation) {
  NetConfig c = discrete_config();
  c.heads = 3;
  EXPECT_THROW(c.validate(), ValidationError);
  EXPECT_THROW(MechanismNet(discrete_config(), init_params(continuous_config(), 0)), ValidationError);
}

TEST(Embedding, ContinuousPassThroughAndDiscreteLookup) {
  for (const NetConfig& c : {continuous_config(), discrete_config(5, 3)}) {
    const MechanismNet net(c, 8);
    AuctionBatch b = random_batch(c, 1, 3, 2, 1);
    if (c.discrete) {
      b.contexts.bidder = {3.0f, 3.0f, 1.0f};
    }
    Graph g;
    const BoundParams p = bind_params(g, net.params(), false);
    const ContextVars ctx = embed_contexts(g, c, p, b.contexts);
    const Tensor e = g.value(ctx.bidder);
    if (c.discrete) {
      EXPECT_EQ(e.shape(), (Shape{1, 3, 16}));
      EXPECT_TRUE(std::equal(e.raw(), e.raw() + 16, e.raw() + 16));
      const Tensor table = net.params().get("embed.bidder");
      EXPECT_TRUE(std::equal(e.raw(), e.raw() + 16, table.raw() + 2 * 16));
    } else {
      EXPECT_TRUE(std::equal(e.data().begin(), e.data().end(), b.contexts.bidder.begin()));
    }
  }
}

TEST(Embedding, OutOfRangeIdNamesIdAndTable) {
  const NetConfig c = discrete_config(5, 1);
  const MechanismNet net(c, 0);
  AuctionBatch b = random_batch(c, 1, 2, 1, 0);
  b.contexts.bidder = {2.0f, 6.0f};
  try {
    net.run(b);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("id 6"), std::string::npos) << msg;
    EXPECT_NE(msg.find("size 5"), std::string::npos) << msg;
  }
}

TEST(InputLayer, ChannelZeroIsTheBid) {
  const NetConfig c = discrete_config();
  const MechanismNet net(c, 5);
  const AuctionBatch b = random_batch(c, 3, 2, 4, 9);
  Graph g;
  const BoundParams p = bind_params(g, net.params(), false);
  const Var bids = g.constant(Tensor({3, 2, 4}, b.bids));
  const Var x = input_layer(g, c, p, bids, embed_contexts(g, c, p, b.contexts));
  const Tensor& v = g.value(x);
  ASSERT_EQ(v.shape(), (Shape{3, 2, 4, 64}));
  for (std::size_t cell = 0; cell < b.bids.size(); ++cell) ASSERT_EQ(v[static_cast<std::int64_t>(cell * 64)], b.bids[cell]);
}

TEST(InteractionLayer, LastLayerEmitsThreeChannelsAndSingleCellDegenerates) {
  const NetConfig c = continuous_config(4);
  const MechanismNet net(c, 2);
  Graph g;
  const BoundParams p = bind_params(g, net.params(), false);
  std::mt19937 rng(1);
  std::uniform_real_distribution<float> u(-1, 1);
  std::vector<float> data(64);
  for (auto& v : data) v = u(rng);
  const Var x = g.constant(Tensor({1, 1, 1, 64}, data));
  EXPECT_EQ(g.value(interaction_layer(g, c, p, x, 1)).shape(), (Shape{1, 1, 1, 3}));
  EXPECT_EQ(g.value(interaction_layer(g, c, p, x, 0)).shape(), (Shape{1, 1, 1, 64}));

  // One token: every attention weight is 1, so the output is the value projection.
  Tensor weights;
  const Var qkv = ops::matmul(g, x, p["layer0.row.qkv"]);
  const Var att = ops::attention(g, qkv, 2, c.heads, &weights);
  for (float w : weights.data()) EXPECT_EQ(w, 1.0f);
  const Tensor& q = g.value(qkv);
  const Tensor& a = g.value(att);
  for (int k = 0; k < 64; ++k) EXPECT_EQ(a[k], q[128 + k]);
}

TEST(InteractionLayer, SwappingItemsSwapsColumns) {
  const NetConfig c = continuous_config(3);
  const MechanismNet net(c, 6);
  std::mt19937 rng(2);
  std::uniform_real_distribution<float> u(-1, 1);
  const int n = 3, m = 4, d = 64;
  std::vector<float> data(static_cast<std::size_t>(n * m * d));
  for (auto& v : data) v = u(rng);
  std::vector<float> swapped = data;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < d; ++k) std::swap(swapped[(i * m + 0) * d + k], swapped[(i * m + 2) * d + k]);
  }
  Graph g;
  const BoundParams p = bind_params(g, net.params(), false);
  const Tensor y = g.value(interaction_layer(g, c, p, g.constant(Tensor({1, n, m, d}, data)), 0));
  const Tensor z = g.value(interaction_layer(g, c, p, g.constant(Tensor({1, n, m, d}, swapped)), 0));
  auto at = [&](const Tensor& t, int i, int j, int k) { return t[(i * m + j) * d + k]; };
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < d; ++k) {
      EXPECT_NEAR(at(y, i, 0, k), at(z, i, 2, k), 1e-5);
      EXPECT_NEAR(at(y, i, 2, k), at(z, i, 0, k), 1e-5);
      EXPECT_NEAR(at(y, i, 1, k), at(z, i, 1, k), 1e-5);
    }
  }
}

TEST(Attention, WeightsNormalizeAndDuplicatesAgree) {
  std::mt19937 rng(4);
  std::uniform_real_distribution<float> u(-1, 1);
  const int L = 5, heads = 4, hd = 8;
  std::vector<float> tokens(static_cast<std::size_t>(2 * L * 3 * heads * hd));
  for (auto& v : tokens) v = u(rng);
  // Token 3 duplicates token 1 in the first sequence.
  std::copy_n(tokens.begin() + 1 * 3 * heads * hd, 3 * heads * hd, tokens.begin() + 3 * 3 * heads * hd);
  Graph g;
  Tensor weights;
  const Tensor out = g.value(ops::attention(g, g.constant(Tensor({2, L, 3 * heads * hd}, tokens)), 1, heads, &weights));
  ASSERT_EQ(weights.numel(), 2 * heads * L * L);
  for (std::int64_t row = 0; row < 2 * heads * L; ++row) {
    double s = 0.0;
    for (int k = 0; k < L; ++k) s += weights[row * L + k];
    EXPECT_NEAR(s, 1.0, 1e-6);
  }
  for (int k = 0; k < heads * hd; ++k) EXPECT_NEAR(out[1 * heads * hd + k], out[3 * heads * hd + k], 1e-6);
}

TEST(OutputLayer, SharesSumToOneAndZeroBidsPayNothing) {
  std::mt19937 rng(5);
  std::normal_distribution<float> nd(0.0f, 3.0f);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + trial % 5, m = 1 + trial % 3;
    std::vector<float> f(static_cast<std::size_t>(n * m * 3));
    for (auto& v : f) v = nd(rng);
    std::vector<float> bids(static_cast<std::size_t>(n * m));
    for (auto& v : bids) v = trial % 7 == 0 ? 0.0f : std::abs(nd(rng));
    Graph g;
    const OutcomeVars o = output_layer(g, g.constant(Tensor({1, n, m, 3}, f)), g.constant(Tensor({1, n, m}, bids)));
    const Tensor& h = g.value(o.softmax_share);
    const Tensor& alloc = g.value(o.allocation);
    const Tensor& pay = g.value(o.payments);
    for (int j = 0; j < m; ++j) {
      double sh = 0.0, sg = 0.0;
      for (int i = 0; i < n; ++i) {
        sh += h[i * m + j];
        sg += alloc[i * m + j];
      }
      ASSERT_NEAR(sh, 1.0, 1e-6);
      ASSERT_GT(sg, 0.0);
      ASSERT_LT(sg, 1.0);
    }
    for (int i = 0; i < n; ++i) {
      double bound = 0.0;
      for (int j = 0; j < m; ++j) bound += alloc[i * m + j] * bids[static_cast<std::size_t>(i * m + j)];
      ASSERT_GE(pay[i], 0.0f);
      ASSERT_LE(pay[i], bound * (1 + 1e-6));
      if (trial % 7 == 0) ASSERT_EQ(pay[i], 0.0f);
    }
  }
}

TEST(Forward, ShapesPurityAndBatchChecks) {
  const NetConfig c = discrete_config();
  const MechanismNet net(c, 3);
  for (auto [n, m] : {std::pair{1, 1}, {2, 5}, {4, 2}, {7, 10}}) {
    const AuctionBatch b = random_batch(c, 3, n, m, 11);
    const AuctionOutcome o1 = net.run(b);
    const AuctionOutcome o2 = net.run(b);
    EXPECT_EQ(o1.allocation.size(), static_cast<std::size_t>(3 * n * m));
    EXPECT_EQ(o1.payments.size(), static_cast<std::size_t>(3 * n));
    EXPECT_EQ(o1.allocation, o2.allocation);
    EXPECT_EQ(o1.payments, o2.payments);
  }
  AuctionBatch bad = random_batch(c, 2, 2, 3, 0);
  bad.bids.pop_back();
  EXPECT_THROW(net.run(bad), ValidationError);
  EXPECT_THROW(net.run(random_batch(continuous_config(), 2, 2, 3, 0)), ValidationError);
}

TEST(Properties, EquivarianceAndFeasibilitySmall) {
  const auto eq = checks::check_equivariance(3, 6);
  EXPECT_EQ(eq.triples, 6);
  EXPECT_LT(eq.max_deviation, 1e-4);
  const auto fe = checks::check_feasibility(4, 3000);
  EXPECT_GE(fe.passes, 3000);
  EXPECT_EQ(fe.allocation_violations, 0);
  EXPECT_EQ(fe.payment_violations, 0);
}

TEST(Checkpoint, RoundTripIsBitExact) {
  const auto dir = std::filesystem::temp_directory_path() / "af_net_test";
  std::filesystem::create_directories(dir);
  for (const NetConfig& c : {discrete_config(5, 1), continuous_config()}) {
    const MechanismNet net(c, 21);
    save_checkpoint(dir / "a.afck", net, {{"setting", "A"}, {"epoch", "3"}});
    const Checkpoint back = load_checkpoint(dir / "a.afck");
    EXPECT_EQ(back.config, c);
    EXPECT_EQ(back.meta.at("epoch"), "3");
    ASSERT_EQ(back.params.names(), net.params().names());
    for (std::size_t i = 0; i < back.params.size(); ++i) {
      const Tensor& a = back.params.tensors()[i];
      const Tensor& b = net.params().tensors()[i];
      ASSERT_EQ(a.shape(), b.shape());
      ASSERT_EQ(0, std::memcmp(a.raw(), b.raw(), sizeof(float) * static_cast<std::size_t>(a.numel())));
    }
    // Saving the loaded copy reproduces the file byte for byte.
    save_checkpoint(dir / "b.afck", MechanismNet(back.config, back.params), back.meta);
    std::ifstream fa(dir / "a.afck", std::ios::binary);
    std::ifstream fb(dir / "b.afck", std::ios::binary);
    EXPECT_EQ(std::string(std::istreambuf_iterator<char>(fa), {}), std::string(std::istreambuf_iterator<char>(fb), {}));

    std::ifstream text(dir / "a.afck", std::ios::binary);
    std::string first;
    std::getline(text, first);
    EXPECT_EQ(first, "AFCKPT 1");
  }
  std::ofstream(dir / "bad.afck") << "AFCKPT 1\ntensor x 0 1 4\nend 2\n";
  EXPECT_THROW(load_checkpoint(dir / "bad.afck"), ValidationError);
  std::filesystem::remove_all(dir);
}

}  // namespace
