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

#include "af/checks/gradient_check.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "af/checks/reference.hpp"
#include "af/env/random.hpp"
#include "af/net/mechanism_net.hpp"
#include "af/tensor/ops.hpp"

namespace af::checks {

int CheckSummary::failures() const {
  return static_cast<int>(std::count_if(cases.begin(), cases.end(), [](const CheckCase& c) { return !c.passed; }));
}

double CheckSummary::worst() const {
  double w = 0.0;
  for (const auto& c : cases) w = std::max(w, c.error);
  return w;
}

namespace {

constexpr double kStep = 1e-7;

using EngineFn = std::function<Var(Graph&, const std::vector<Var>&)>;
using RefFn = std::function<RefTensor(const std::vector<RefTensor>&)>;

struct OpCase {
  std::string name;
  std::vector<Tensor> inputs;
  std::vector<bool> differentiable;  // per input; defaults to all
  EngineFn engine;
  RefFn reference;
};

double relative(const std::vector<double>& got, const std::vector<double>& want) {
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < want.size(); ++i) {
    diff = std::max(diff, std::abs(got[i] - want[i]));
    scale = std::max(scale, std::abs(want[i]));
  }
  return diff / std::max(scale, 1e-12);
}

Tensor random_tensor(CounterRng& rng, Shape shape, double away_from_zero = 0.0) {
  std::vector<float> d(static_cast<std::size_t>(shape_numel(shape)));
  for (float& v : d) {
    const double u = rng.next_uniform(-1.0, 1.0);
    v = static_cast<float>(u < 0 ? -away_from_zero + (1 - away_from_zero) * u : away_from_zero + (1 - away_from_zero) * u);
  }
  return Tensor(std::move(shape), std::move(d));
}

CheckCase run_case(const OpCase& c, CounterRng& rng, double tol) {
  Graph g;
  std::vector<Var> leaves;
  for (std::size_t k = 0; k < c.inputs.size(); ++k) {
    const bool diff = c.differentiable.empty() || c.differentiable[k];
    leaves.push_back(g.leaf(c.inputs[k].with_requires_grad(diff)));
  }
  const Var y = c.engine(g, leaves);
  const Tensor weights = random_tensor(rng, g.value(y).shape());
  const Var loss = ops::sum(g, ops::mul(g, y, g.constant(weights)));
  const Gradients grads = backward(g, loss);

  std::vector<RefTensor> ref_in;
  for (const auto& t : c.inputs) ref_in.push_back(RefTensor::of(t));
  const RefTensor w = RefTensor::of(weights);
  auto objective = [&](const std::vector<RefTensor>& in) {
    const RefTensor out = c.reference(in);
    double total = 0.0;
    for (std::size_t i = 0; i < out.data.size(); ++i) total += out.data[i] * w.data[i];
    return total;
  };

  const RefTensor ref_out = c.reference(ref_in);
  const auto engine_out = g.value(y).data();
  double error = relative(std::vector<double>(engine_out.begin(), engine_out.end()), ref_out.data);

  for (std::size_t k = 0; k < c.inputs.size(); ++k) {
    if (!(c.differentiable.empty() || c.differentiable[k])) continue;
    const Tensor analytic = grads.of(leaves[k]);
    std::vector<double> numeric(static_cast<std::size_t>(analytic.numel()));
    for (std::size_t e = 0; e < numeric.size(); ++e) {
      std::vector<RefTensor> plus = ref_in, minus = ref_in;
      plus[k].data[e] += kStep;
      minus[k].data[e] -= kStep;
      numeric[e] = (objective(plus) - objective(minus)) / (2 * kStep);
    }
    error = std::max(error, relative(std::vector<double>(analytic.data().begin(), analytic.data().end()), numeric));
  }
  return {c.name, error, error < tol};
}

std::int64_t dim(CounterRng& rng, std::int64_t lo, std::int64_t hi) { return rng.next_int(lo, hi); }

std::vector<OpCase> op_cases(CounterRng& rng) {
  std::vector<OpCase> out;
  auto unary = [&](const char* name, Tensor x, EngineFn e, RefFn r) {
    out.push_back({name, {std::move(x)}, {}, std::move(e), std::move(r)});
  };
  {
    const std::int64_t a = dim(rng, 1, 3), b = dim(rng, 1, 4), k = dim(rng, 1, 6), n = dim(rng, 1, 5);
    out.push_back({"matmul", {random_tensor(rng, {a, b, k}), random_tensor(rng, {k, n})}, {},
                   [](Graph& g, const std::vector<Var>& v) { return ops::matmul(g, v[0], v[1]); },
                   [](const std::vector<RefTensor>& v) { return ref_matmul(v[0], v[1]); }});
  }
  {
    const std::int64_t r = dim(rng, 1, 5), k = dim(rng, 1, 6), n = dim(rng, 1, 18);
    out.push_back({"linear", {random_tensor(rng, {r, k}), random_tensor(rng, {k, n}), random_tensor(rng, {n})}, {},
                   [](Graph& g, const std::vector<Var>& v) { return ops::linear(g, v[0], v[1], v[2]); },
                   [](const std::vector<RefTensor>& v) { return ref_linear(v[0], v[1], &v[2]); }});
  }
  const Shape s{dim(rng, 1, 3), dim(rng, 1, 4), dim(rng, 1, 4)};
  out.push_back({"add", {random_tensor(rng, s), random_tensor(rng, s)}, {},
                 [](Graph& g, const std::vector<Var>& v) { return ops::add(g, v[0], v[1]); },
                 [](const std::vector<RefTensor>& v) { return ref_add(v[0], v[1]); }});
  out.push_back({"sub", {random_tensor(rng, s), random_tensor(rng, s)}, {},
                 [](Graph& g, const std::vector<Var>& v) { return ops::sub(g, v[0], v[1]); },
                 [](const std::vector<RefTensor>& v) { return ref_sub(v[0], v[1]); }});
  out.push_back({"mul", {random_tensor(rng, s), random_tensor(rng, s)}, {},
                 [](Graph& g, const std::vector<Var>& v) { return ops::mul(g, v[0], v[1]); },
                 [](const std::vector<RefTensor>& v) { return ref_mul(v[0], v[1]); }});
  const float factor = static_cast<float>(rng.next_uniform(-2.0, 2.0));
  unary("scale", random_tensor(rng, s), [factor](Graph& g, const std::vector<Var>& v) { return ops::scale(g, v[0], factor); },
        [factor](const std::vector<RefTensor>& v) { return ref_scale(v[0], factor); });
  unary("relu", random_tensor(rng, s, 0.05), [](Graph& g, const std::vector<Var>& v) { return ops::relu(g, v[0]); },
        [](const std::vector<RefTensor>& v) { return ref_relu(v[0]); });
  unary("sigmoid", random_tensor(rng, s), [](Graph& g, const std::vector<Var>& v) { return ops::sigmoid(g, v[0]); },
        [](const std::vector<RefTensor>& v) { return ref_sigmoid(v[0]); });
  const int axis = static_cast<int>(rng.next_int(0, 2));
  unary("softmax", random_tensor(rng, s), [axis](Graph& g, const std::vector<Var>& v) { return ops::softmax(g, v[0], axis); },
        [axis](const std::vector<RefTensor>& v) { return ref_softmax(v[0], axis); });
  unary("sum", random_tensor(rng, s), [](Graph& g, const std::vector<Var>& v) { return ops::sum(g, v[0]); },
        [](const std::vector<RefTensor>& v) { return ref_sum(v[0]); });
  unary("mean", random_tensor(rng, s), [](Graph& g, const std::vector<Var>& v) { return ops::mean(g, v[0]); },
        [](const std::vector<RefTensor>& v) { return ref_mean(v[0]); });
  unary("sum_axis", random_tensor(rng, s), [axis](Graph& g, const std::vector<Var>& v) { return ops::sum_axis(g, v[0], axis); },
        [axis](const std::vector<RefTensor>& v) { return ref_sum_axis(v[0], axis); });
  unary("mean_axis", random_tensor(rng, s), [axis](Graph& g, const std::vector<Var>& v) { return ops::mean_axis(g, v[0], axis); },
        [axis](const std::vector<RefTensor>& v) { return ref_mean_axis(v[0], axis); });
  {
    Shape s2 = s;
    s2[static_cast<std::size_t>(axis)] = dim(rng, 1, 3);
    out.push_back({"concat", {random_tensor(rng, s), random_tensor(rng, s2)}, {},
                   [axis](Graph& g, const std::vector<Var>& v) { return ops::concat(g, v, axis); },
                   [axis](const std::vector<RefTensor>& v) { return ref_concat(v, axis); }});
  }
  {
    const std::int64_t len = s[static_cast<std::size_t>(axis)];
    const std::int64_t start = rng.next_int(0, len - 1);
    const std::int64_t count = rng.next_int(1, len - start);
    unary("slice", random_tensor(rng, s),
          [=](Graph& g, const std::vector<Var>& v) { return ops::slice(g, v[0], axis, start, count); },
          [=](const std::vector<RefTensor>& v) { return ref_slice(v[0], axis, start, count); });
  }
  {
    const Shape flat{shape_numel(s)};
    unary("reshape", random_tensor(rng, s), [flat](Graph& g, const std::vector<Var>& v) { return ops::reshape(g, v[0], flat); },
          [flat](const std::vector<RefTensor>& v) { return ref_reshape(v[0], flat); });
  }
  {
    const int at = static_cast<int>(rng.next_int(0, 3));
    const std::int64_t count = dim(rng, 1, 3);
    unary("repeat", random_tensor(rng, s), [=](Graph& g, const std::vector<Var>& v) { return ops::repeat(g, v[0], at, count); },
          [=](const std::vector<RefTensor>& v) { return ref_repeat(v[0], at, count); });
  }
  out.push_back({"inner", {random_tensor(rng, s), random_tensor(rng, s)}, {},
                 [](Graph& g, const std::vector<Var>& v) { return ops::inner(g, v[0], v[1]); },
                 [](const std::vector<RefTensor>& v) { return ref_inner(v[0], v[1]); }});
  {
    const std::int64_t vocab = dim(rng, 1, 5), d = dim(rng, 1, 4);
    const Shape lead{dim(rng, 1, 3), dim(rng, 1, 3)};
    std::vector<std::int32_t> ids(static_cast<std::size_t>(shape_numel(lead)));
    for (auto& id : ids) id = static_cast<std::int32_t>(rng.next_int(0, vocab - 1));
    unary("gather", random_tensor(rng, {vocab, d}),
          [=](Graph& g, const std::vector<Var>& v) { return ops::gather_rows(g, v[0], ids, lead); },
          [=](const std::vector<RefTensor>& v) { return ref_gather(v[0], ids, lead); });
  }
  {
    const int heads = static_cast<int>(rng.next_int(1, 3));
    const std::int64_t hd = dim(rng, 1, 3);
    const Shape q{dim(rng, 1, 2), dim(rng, 1, 4), dim(rng, 1, 4), 3 * heads * hd};
    const int seq = static_cast<int>(rng.next_int(1, 2));
    unary("attention", random_tensor(rng, q),
          [=](Graph& g, const std::vector<Var>& v) { return ops::attention(g, v[0], seq, heads); },
          [=](const std::vector<RefTensor>& v) { return ref_attention(v[0], seq, heads); });
  }
  return out;
}

ContextBatch random_contexts(CounterRng& rng, const net::NetConfig& c, int count, int n, int m) {
  ContextBatch ctx;
  ctx.count = count;
  ctx.n = n;
  ctx.m = m;
  ctx.bidder_dim = c.discrete ? 1 : c.bidder_dim;
  ctx.item_dim = c.discrete ? 1 : c.item_dim;
  ctx.bidder.resize(static_cast<std::size_t>(count) * n * ctx.bidder_dim);
  ctx.item.resize(static_cast<std::size_t>(count) * m * ctx.item_dim);
  for (float& x : ctx.bidder) x = c.discrete ? static_cast<float>(rng.next_int(1, c.bidder_vocab)) : static_cast<float>(rng.next_uniform(-1, 1));
  for (float& y : ctx.item) y = c.discrete ? static_cast<float>(rng.next_int(1, c.item_vocab)) : static_cast<float>(rng.next_uniform(-1, 1));
  return ctx;
}

CheckCase end_to_end_case(CounterRng& rng, int index, double tol) {
  net::NetConfig c;
  if (index % 4 == 0) {
    c.discrete = true;
    c.bidder_vocab = 5;
    c.item_vocab = 3;
  } else {
    const int d = 2 * static_cast<int>(rng.next_int(2, 4));
    c.model_dim = d;
    c.heads = 2;
    c.conv_hidden = static_cast<int>(rng.next_int(3, 8));
    c.mlp_hidden = static_cast<int>(rng.next_int(3, 8));
    c.layers = static_cast<int>(rng.next_int(1, 2));
    c.embed_dim = static_cast<int>(rng.next_int(2, 4));
    c.discrete = rng.next_uniform() < 0.5;
    c.bidder_vocab = 4;
    c.item_vocab = 4;
    c.bidder_dim = static_cast<int>(rng.next_int(1, 3));
    c.item_dim = static_cast<int>(rng.next_int(1, 3));
  }
  const int count = static_cast<int>(rng.next_int(1, 2));
  const int n = static_cast<int>(rng.next_int(1, 3)), m = static_cast<int>(rng.next_int(1, 3));
  const net::MechanismNet net(c, rng.next_bits());
  const ContextBatch ctx = random_contexts(rng, c, count, n, m);
  std::vector<float> bids(static_cast<std::size_t>(count) * n * m);
  for (float& b : bids) b = static_cast<float>(rng.next_uniform());
  const int k = static_cast<int>(rng.next_int(0, count - 1)), i = static_cast<int>(rng.next_int(0, n - 1));

  Graph g;
  const net::BoundParams p = net::bind_params(g, net.params(), false);
  const Var bv = g.leaf(Tensor({count, n, m}, bids, true));
  const net::OutcomeVars o = net.build(g, p, bv, ctx);
  std::vector<float> mask(static_cast<std::size_t>(count) * n, 0.0f);
  mask[static_cast<std::size_t>(k) * n + i] = 1.0f;
  const Var target = ops::sum(g, ops::mul(g, o.payments, g.constant(Tensor({count, n}, std::move(mask)))));
  const Tensor analytic = backward(g, target).of(bv);

  std::vector<double> bd(bids.begin(), bids.end());
  auto pay = [&](const std::vector<double>& b) {
    return reference_forward(c, net.params(), b, ctx).payments[static_cast<std::size_t>(k) * n + i];
  };
  const RefOutcome ref = reference_forward(c, net.params(), bd, ctx);
  const auto eg = g.value(o.allocation).data();
  const auto ep = g.value(o.payments).data();
  double error = std::max(relative(std::vector<double>(eg.begin(), eg.end()), ref.allocation),
                          relative(std::vector<double>(ep.begin(), ep.end()), ref.payments));
  std::vector<double> numeric(bd.size());
  for (std::size_t e = 0; e < bd.size(); ++e) {
    auto plus = bd, minus = bd;
    plus[e] += kStep;
    minus[e] -= kStep;
    numeric[e] = (pay(plus) - pay(minus)) / (2 * kStep);
  }
  error = std::max(error, relative(std::vector<double>(analytic.data().begin(), analytic.data().end()), numeric));
  return {"end_to_end_dp_db(n=" + std::to_string(n) + ",m=" + std::to_string(m) + ")", error, error < tol};
}

}  // namespace

CheckSummary gradient_check(const GradCheckConfig& config) {
  CheckSummary summary;
  CounterRng root(derive_seed(config.seed, "grad-check"));
  for (int r = 0; r < config.cases_per_op; ++r) {
    CounterRng rng = root.substream(static_cast<std::uint64_t>(r));
    for (const OpCase& c : op_cases(rng)) summary.cases.push_back(run_case(c, rng, config.tolerance));
  }
  CounterRng e2e = root.substream("end-to-end");
  for (int r = 0; r < config.end_to_end_cases; ++r) {
    CounterRng rng = e2e.substream(static_cast<std::uint64_t>(r));
    summary.cases.push_back(end_to_end_case(rng, r, config.tolerance));
  }
  return summary;
}

}  // namespace af::checks
