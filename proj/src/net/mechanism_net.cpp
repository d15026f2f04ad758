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

#include "af/net/mechanism_net.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "af/errors.hpp"
#include "af/tensor/ops.hpp"

namespace af::net {

BoundParams bind_params(Graph& g, const MechanismParams& params, bool trainable) {
  std::vector<Var> vars;
  vars.reserve(params.size());
  for (const Tensor& t : params.tensors()) vars.push_back(g.leaf(t.with_requires_grad(trainable)));
  return BoundParams(params, std::move(vars));
}

namespace {

// Context id k selects table row k - 1.
std::vector<std::int32_t> discrete_ids(std::span<const float> raw, int vocab, const char* what) {
  std::vector<std::int32_t> ids(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const long id = std::lround(raw[i]);
    if (!(raw[i] == static_cast<float>(id)) || id < 1 || id > vocab) {
      char shown[32];
      std::snprintf(shown, sizeof shown, "%g", static_cast<double>(raw[i]));
      throw ValidationError(std::string(what) + " context id " + shown + " outside the embedding table of size " +
                            std::to_string(vocab) + " (ids 1.." + std::to_string(vocab) + ")");
    }
    ids[i] = static_cast<std::int32_t>(id - 1);
  }
  return ids;
}

Var conv(Graph& g, const BoundParams& p, Var x, const std::string& name) {
  return ops::linear(g, x, p[name + ".w"], p[name + ".b"]);
}

}  // namespace

ContextVars embed_contexts(Graph& g, const NetConfig& c, const BoundParams& p, const ContextBatch& ctx) {
  const std::int64_t count = ctx.count;
  if (c.discrete) {
    const auto bidder_ids = discrete_ids(ctx.bidder, c.bidder_vocab, "bidder");
    const auto item_ids = discrete_ids(ctx.item, c.item_vocab, "item");
    return {ops::gather_rows(g, p["embed.bidder"], bidder_ids, {count, ctx.n}),
            ops::gather_rows(g, p["embed.item"], item_ids, {count, ctx.m})};
  }
  return {g.constant(Tensor({count, ctx.n, ctx.bidder_dim}, ctx.bidder)),
          g.constant(Tensor({count, ctx.m, ctx.item_dim}, ctx.item))};
}

Var input_layer(Graph& g, const NetConfig&, const BoundParams& p, Var bids, const ContextVars& ctx) {
  const Shape& bs = g.value(bids).shape();
  const std::int64_t count = bs[0], n = bs[1], m = bs[2];
  const Var b4 = ops::reshape(g, bids, {count, n, m, 1});
  const Var ex = ops::repeat(g, ctx.bidder, 2, m);  // [B, n, m, Dx]
  const Var fy = ops::repeat(g, ctx.item, 1, n);    // [B, n, m, Dy]
  const Var pair = ops::concat(g, std::vector<Var>{b4, ex, fy}, 3);
  const Var hidden = ops::relu(g, conv(g, p, pair, "input.conv1"));
  const Var features = conv(g, p, hidden, "input.conv2");
  return ops::concat(g, std::vector<Var>{b4, features}, 3);
}

Var transformer(Graph& g, const NetConfig& c, const BoundParams& p, Var x, int layer, int seq_axis) {
  const std::string t = "layer" + std::to_string(layer) + (seq_axis == 2 ? ".row." : ".col.");
  const Var qkv = ops::matmul(g, x, p[t + "qkv"]);
  const Var att = ops::attention(g, qkv, seq_axis, c.heads);
  const Var hidden = ops::relu(g, ops::linear(g, att, p[t + "mlp1.w"], p[t + "mlp1.b"]));
  return ops::linear(g, hidden, p[t + "mlp2.w"], p[t + "mlp2.b"]);
}

Var interaction_layer(Graph& g, const NetConfig& c, const BoundParams& p, Var x, int layer) {
  const Shape& s = g.value(x).shape();
  const std::int64_t count = s[0], n = s[1], m = s[2], d = s[3];
  const Var row = transformer(g, c, p, x, layer, 2);
  const Var col = transformer(g, c, p, x, layer, 1);
  const Var pooled = ops::mean_axis(g, ops::reshape(g, x, {count, n * m, d}), 1);   // [B, d]
  const Var global = ops::repeat(g, ops::repeat(g, pooled, 1, n), 2, m);          // [B, n, m, d]
  const Var merged = ops::concat(g, std::vector<Var>{row, col, global}, 3);
  const std::string prefix = "layer" + std::to_string(layer) + ".";
  const Var hidden = ops::relu(g, conv(g, p, merged, prefix + "conv3"));
  return conv(g, p, hidden, prefix + "conv4");
}

OutcomeVars output_layer(Graph& g, Var f, Var bids) {
  const Shape& s = g.value(f).shape();
  if (s.size() != 4 || s[3] != 3) throw ShapeError("output layer expects [B, n, m, 3], got " + shape_string(s));
  const Shape grid{s[0], s[1], s[2]};
  auto channel = [&](int k) { return ops::reshape(g, ops::slice(g, f, 3, k, 1), grid); };
  OutcomeVars out;
  out.softmax_share = ops::softmax(g, channel(0), 1);
  out.keep_weight = ops::sigmoid(g, channel(1));
  out.allocation = ops::mul(g, out.keep_weight, out.softmax_share);
  out.payment_fraction = ops::sigmoid(g, ops::mean_axis(g, channel(2), 2));
  out.payments = ops::mul(g, out.payment_fraction, ops::inner(g, out.allocation, bids));
  return out;
}

MechanismNet::MechanismNet(NetConfig config, std::uint64_t seed)
    : config_(config), params_(init_params(config, seed)) {}

MechanismNet::MechanismNet(NetConfig config, MechanismParams params)
    : config_(config), params_(std::move(params)) {
  config_.validate();
  const MechanismParams reference = init_params(config_, 0);
  if (reference.names() != params_.names()) throw ValidationError("parameters do not match the model configuration");
  for (std::size_t i = 0; i < reference.size(); ++i) {
    if (reference.at(i).shape() != params_.at(i).shape()) {
      throw ValidationError("parameter " + reference.names()[i] + " has shape " +
                            shape_string(params_.at(i).shape()) + ", expected " +
                            shape_string(reference.at(i).shape()));
    }
  }
}

void MechanismNet::check_batch(const AuctionBatch& b) const {
  if (b.count < 1 || b.n < 1 || b.m < 1) throw ValidationError("empty auction batch");
  if (b.bids.size() != static_cast<std::size_t>(b.count) * b.n * b.m) throw ValidationError("bids do not match batch shape");
  const ContextBatch& c = b.contexts;
  if (c.count != b.count || c.n != b.n || c.m != b.m) throw ValidationError("contexts do not match batch shape");
  const int want_x = config_.discrete ? 1 : config_.bidder_dim;
  const int want_y = config_.discrete ? 1 : config_.item_dim;
  if (c.bidder_dim != want_x || c.item_dim != want_y) {
    throw ValidationError("context width " + std::to_string(c.bidder_dim) + "/" + std::to_string(c.item_dim) +
                          " does not match the model (" + std::to_string(want_x) + "/" + std::to_string(want_y) + ")");
  }
}

OutcomeVars MechanismNet::build(Graph& g, const BoundParams& p, Var bids, const ContextBatch& contexts) const {
  const ContextVars ctx = embed_contexts(g, config_, p, contexts);
  Var x = input_layer(g, config_, p, bids, ctx);
  for (int l = 0; l < config_.layers; ++l) x = interaction_layer(g, config_, p, x, l);
  return output_layer(g, x, bids);
}

AuctionOutcome outcome_from(const Graph& g, const OutcomeVars& out, int count, int n, int m) {
  auto copy = [&](Var v) {
    const auto d = g.value(v).data();
    return std::vector<float>(d.begin(), d.end());
  };
  AuctionOutcome o;
  o.count = count;
  o.n = n;
  o.m = m;
  o.allocation = copy(out.allocation);
  o.payments = copy(out.payments);
  o.softmax_share = copy(out.softmax_share);
  o.keep_weight = copy(out.keep_weight);
  o.payment_fraction = copy(out.payment_fraction);
  return o;
}

AuctionOutcome MechanismNet::run(const AuctionBatch& batch) const {
  check_batch(batch);
  Graph g;
  const BoundParams p = bind_params(g, params_, false);
  const Var bids = g.constant(Tensor({batch.count, batch.n, batch.m}, batch.bids));
  return outcome_from(g, build(g, p, bids, batch.contexts), batch.count, batch.n, batch.m);
}

}  // namespace af::net
