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
#include <functional>
#include <string>
#include <vector>

#include "af/env/dataset.hpp"
#include "af/net/mechanism_net.hpp"
#include "af/tensor/adam.hpp"

namespace af::train {

enum class PeriodUnit { kEpochs, kIterations };

struct TrainConfig {
  int batch_size = 500;
  int epochs = 80;
  int misreport_steps = 25;     // Gamma
  float misreport_lr = 0.05f;   // gamma, plain ascent
  float model_lr = 1e-3f;       // eta, Adam
  float rho_init = 1.0f;
  float rho_increment = 5.0f;
  int rho_period = 2;           // epochs
  float lambda_init = 5.0f;
  int lambda_period = 2;
  PeriodUnit lambda_unit = PeriodUnit::kEpochs;
  int checkpoint_every = 0;     // epochs; 0 disables
  std::uint64_t seed = 0;

  // Throws ValidationError naming the field.
  void validate() const;

  // Penalty weight in force during 1-based `epoch`.
  float rho_at(int epoch) const;
};

struct LagrangeState {
  std::vector<float> lambda;
  float rho = 1.0f;
};

struct EpochRecord {
  int epoch = 0;
  double revenue = 0.0;
  double mean_regret = 0.0;
  std::vector<double> per_bidder_regret;
  std::vector<double> lambda;  // after this epoch's updates
  double rho = 0.0;
  double wall_ms = 0.0;
};

// One JSON object on a single line.
std::string history_json(const EpochRecord& record);

struct LossTerms {
  Var loss;
  Var revenue;     // mean over samples of sum_i p_i
  Var regret;      // [n], sample mean of max(0, u(misreport) - u(truth))
};

// -revenue + sum_i lambda_i rgt_i + rho/2 sum_i rgt_i^2 with misreports held
// fixed. Parameter gradients flow through both the truthful and the deviating
// forward passes.
LossTerms lagrangian_loss(Graph& g, const net::MechanismNet& net, const net::BoundParams& params,
                          const AuctionBatch& truthful, std::span<const float> values,
                          std::span<const float> misreports, const LagrangeState& state);

struct TrainHooks {
  std::function<void(const EpochRecord&)> on_epoch;
  std::function<void(int epoch, const net::MechanismNet&)> on_checkpoint;
};

struct TrainResult {
  std::vector<EpochRecord> history;
  std::vector<double> batch_loss;  // every minibatch, in order
  LagrangeState state;
};

// Trains `net` in place. Throws NumericError on a non-finite loss.
TrainResult train(const TrainConfig& config, const env::Dataset& data, net::MechanismNet& net,
                  const TrainHooks& hooks = {});

}  // namespace af::train
