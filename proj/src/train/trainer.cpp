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

#include "af/train/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "af/env/random.hpp"
#include "af/errors.hpp"
#include "af/net/mechanism.hpp"
#include "af/simd/kernels.hpp"
#include "af/tensor/ops.hpp"
#include "af/train/misreport.hpp"

namespace af::train {

void TrainConfig::validate() const {
  auto require = [](bool ok, const char* field, const char* why) {
    if (!ok) throw ValidationError(std::string("train.") + field + ": " + why);
  };
  require(batch_size >= 1, "batch_size", "must be at least 1");
  require(epochs >= 1, "epochs", "must be at least 1");
  require(misreport_steps >= 1, "misreport_steps", "must be at least 1");
  require(misreport_lr > 0.0f && std::isfinite(misreport_lr), "misreport_lr", "must be positive");
  require(model_lr > 0.0f && std::isfinite(model_lr), "model_lr", "must be positive");
  require(rho_init > 0.0f && std::isfinite(rho_init), "rho_init", "must be positive");
  require(rho_increment >= 0.0f && std::isfinite(rho_increment), "rho_increment", "must be nonnegative");
  require(rho_period >= 1, "rho_period", "must be at least 1");
  require(std::isfinite(lambda_init), "lambda_init", "must be finite");
  require(lambda_period >= 1, "lambda_period", "must be at least 1");
  require(checkpoint_every >= 0, "checkpoint_every", "must be nonnegative");
}

float TrainConfig::rho_at(int epoch) const {
  return rho_init + rho_increment * static_cast<float>((epoch - 1) / rho_period);
}

std::string history_json(const EpochRecord& r) {
  nlohmann::json j;
  j["epoch"] = r.epoch;
  j["revenue"] = r.revenue;
  j["mean_regret"] = r.mean_regret;
  j["per_bidder_regret"] = r.per_bidder_regret;
  j["lambda"] = r.lambda;
  j["rho"] = r.rho;
  j["wall_ms"] = r.wall_ms;
  return j.dump();
}

LossTerms lagrangian_loss(Graph& g, const net::MechanismNet& net, const net::BoundParams& p,
                          const AuctionBatch& truthful, std::span<const float> values,
                          std::span<const float> misreports, const LagrangeState& state) {
  const std::int64_t L = truthful.count, n = truthful.n, m = truthful.m;
  if (state.lambda.size() != static_cast<std::size_t>(n)) throw ShapeError("lagrangian: lambda must have n entries");

  // Truthful pass: revenue and each bidder's truthful utility [L, n].
  const Var bids = g.constant(Tensor({L, n, m}, truthful.bids));
  const Var value_grid = g.constant(Tensor({L, n, m}, std::vector<float>(values.begin(), values.end())));
  const net::OutcomeVars honest = net.build(g, p, bids, truthful.contexts);
  const Var revenue = ops::mean(g, ops::sum_axis(g, honest.payments, 1));
  const Var u_truth = ops::sub(g, ops::inner(g, honest.allocation, value_grid), honest.payments);

  // Deviating pass: instance l*n+i has bidder i misreporting.
  const DeviationBatch d = deviation_batch(truthful, values, misreports);
  std::vector<float> scattered(static_cast<std::size_t>(L * n * n * m), 0.0f);
  std::vector<float> mask(static_cast<std::size_t>(L * n * n), 0.0f);
  for (std::int64_t k = 0; k < L * n; ++k) {
    const std::int64_t i = d.bidder[static_cast<std::size_t>(k)];
    mask[static_cast<std::size_t>(k * n + i)] = 1.0f;
    std::copy_n(d.value.data() + k * m, m, scattered.data() + (k * n + i) * m);
  }
  const Var dev_bids = g.constant(Tensor({L * n, n, m}, d.batch.bids));
  const net::OutcomeVars dev = net.build(g, p, dev_bids, d.batch.contexts);
  const Var gain = ops::sum_axis(g, ops::inner(g, dev.allocation, g.constant(Tensor({L * n, n, m}, std::move(scattered)))), 1);
  const Var paid = ops::sum_axis(g, ops::mul(g, dev.payments, g.constant(Tensor({L * n, n}, std::move(mask)))), 1);
  const Var u_dev = ops::reshape(g, ops::sub(g, gain, paid), {L, n});

  const Var regret = ops::mean_axis(g, ops::relu(g, ops::sub(g, u_dev, u_truth)), 0);  // [n]
  const Var lambda = g.constant(Tensor({n}, state.lambda));
  const Var penalty = ops::add(g, ops::inner(g, lambda, regret), ops::scale(g, ops::inner(g, regret, regret), 0.5f * state.rho));
  const Var loss = ops::add(g, ops::scale(g, revenue, -1.0f), penalty);
  return {loss, revenue, regret};
}

namespace {

std::vector<int> shuffled(int count, std::uint64_t seed, int epoch) {
  std::vector<int> order(static_cast<std::size_t>(count));
  std::iota(order.begin(), order.end(), 0);
  CounterRng rng = CounterRng(derive_seed(seed, "shuffle")).substream(static_cast<std::uint64_t>(epoch));
  for (int i = count - 1; i > 0; --i) std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(rng.next_int(0, i))]);
  return order;
}

std::vector<float> gather_rows(const std::vector<float>& src, std::span<const int> rows, std::size_t width) {
  std::vector<float> out(rows.size() * width);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::copy_n(src.data() + static_cast<std::size_t>(rows[r]) * width, width, out.data() + r * width);
  }
  return out;
}

}  // namespace

TrainResult train(const TrainConfig& config, const env::Dataset& data, net::MechanismNet& net,
                  const TrainHooks& hooks) {
  config.validate();
  const simd::FlushDenormals flush;
  if (data.count < 1) throw ValidationError("train: dataset is empty");
  const int n = data.spec.n;
  const std::size_t width = static_cast<std::size_t>(n) * data.spec.m;

  TrainResult result;
  result.state.lambda.assign(static_cast<std::size_t>(n), config.lambda_init);
  AdamState adam;
  adam.config.learning_rate = config.model_lr;
  MisreportCache cache(data, config.seed);
  const net::NetMechanism mechanism(net);
  std::int64_t iteration = 0;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    result.state.rho = config.rho_at(epoch);
    const std::vector<int> order = shuffled(data.count, config.seed, epoch);
    double revenue_sum = 0.0;
    std::vector<double> regret_sum(static_cast<std::size_t>(n), 0.0);
    int batches = 0;
    for (int first = 0; first < data.count; first += config.batch_size) {
      const int size = std::min(config.batch_size, data.count - first);
      const std::span<const int> idx(order.data() + first, static_cast<std::size_t>(size));
      const AuctionBatch truthful = data.truthful(idx);
      const std::vector<float> values = gather_rows(data.values, idx, width);
      const std::vector<float> caps = gather_rows(data.caps, idx, width);
      std::vector<float> mis = cache.gather(idx);
      misreport_ascent(mechanism, truthful, values, caps, mis, config.misreport_steps, config.misreport_lr);
      cache.scatter(idx, mis);

      Graph g;
      const net::BoundParams p = net::bind_params(g, net.params(), true);
      const LossTerms terms = lagrangian_loss(g, net, p, truthful, values, mis, result.state);
      const float loss = g.value(terms.loss).item();
      if (!std::isfinite(loss)) {
        throw NumericError("non-finite loss at epoch " + std::to_string(epoch) + ", batch " + std::to_string(batches + 1));
      }
      const Gradients grads = backward(g, terms.loss);
      std::vector<Tensor> grad_list;
      grad_list.reserve(p.vars().size());
      for (Var v : p.vars()) grad_list.push_back(grads.of(v));
      net.params().assign(adam_step(net.params().tensors(), grad_list, adam));

      result.batch_loss.push_back(loss);
      revenue_sum += g.value(terms.revenue).item();
      const Tensor& rg = g.value(terms.regret);
      for (int i = 0; i < n; ++i) regret_sum[static_cast<std::size_t>(i)] += rg[i];
      ++batches;
      ++iteration;
      if (config.lambda_unit == PeriodUnit::kIterations && iteration % config.lambda_period == 0) {
        for (int i = 0; i < n; ++i) result.state.lambda[static_cast<std::size_t>(i)] += result.state.rho * rg[i];
      }
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.revenue = revenue_sum / batches;
    rec.per_bidder_regret.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      rec.per_bidder_regret[static_cast<std::size_t>(i)] = regret_sum[static_cast<std::size_t>(i)] / batches;
      rec.mean_regret += rec.per_bidder_regret[static_cast<std::size_t>(i)] / n;
    }
    if (config.lambda_unit == PeriodUnit::kEpochs && epoch % config.lambda_period == 0) {
      for (int i = 0; i < n; ++i) {
        result.state.lambda[static_cast<std::size_t>(i)] +=
            result.state.rho * static_cast<float>(rec.per_bidder_regret[static_cast<std::size_t>(i)]);
      }
    }
    rec.lambda.assign(result.state.lambda.begin(), result.state.lambda.end());
    rec.rho = result.state.rho;
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    result.history.push_back(rec);
    if (hooks.on_epoch) hooks.on_epoch(rec);
    if (hooks.on_checkpoint && config.checkpoint_every > 0 &&
        (epoch % config.checkpoint_every == 0 || epoch == config.epochs)) {
      hooks.on_checkpoint(epoch, net);
    }
  }
  return result;
}

}  // namespace af::train
