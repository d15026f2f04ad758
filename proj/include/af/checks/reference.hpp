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
#include <vector>

#include "af/auction.hpp"
#include "af/net/params.hpp"

// Plain double-precision loops, written without the tensor engine, used as
// oracles for the engine's forward values and gradients.
namespace af::checks {

struct RefTensor {
  Shape shape;
  std::vector<double> data;

  RefTensor() = default;
  RefTensor(Shape s, std::vector<double> d) : shape(std::move(s)), data(std::move(d)) {}
  static RefTensor of(const Tensor& t);
  std::int64_t numel() const { return static_cast<std::int64_t>(data.size()); }
};

RefTensor ref_matmul(const RefTensor& a, const RefTensor& b);
RefTensor ref_linear(const RefTensor& x, const RefTensor& w, const RefTensor* bias);
RefTensor ref_add(const RefTensor& a, const RefTensor& b);
RefTensor ref_sub(const RefTensor& a, const RefTensor& b);
RefTensor ref_mul(const RefTensor& a, const RefTensor& b);
RefTensor ref_scale(const RefTensor& a, double factor);
RefTensor ref_relu(const RefTensor& x);
RefTensor ref_sigmoid(const RefTensor& x);
RefTensor ref_softmax(const RefTensor& x, int axis);
RefTensor ref_sum(const RefTensor& x);
RefTensor ref_mean(const RefTensor& x);
RefTensor ref_sum_axis(const RefTensor& x, int axis);
RefTensor ref_mean_axis(const RefTensor& x, int axis);
RefTensor ref_concat(const std::vector<RefTensor>& parts, int axis);
RefTensor ref_slice(const RefTensor& x, int axis, std::int64_t start, std::int64_t length);
RefTensor ref_reshape(const RefTensor& x, Shape shape);
RefTensor ref_repeat(const RefTensor& x, int axis, std::int64_t count);
RefTensor ref_inner(const RefTensor& a, const RefTensor& b);
RefTensor ref_gather(const RefTensor& table, const std::vector<std::int32_t>& ids, Shape lead);
RefTensor ref_attention(const RefTensor& qkv, int seq_axis, int heads);

struct RefOutcome {
  std::vector<double> allocation;  // [B, n, m]
  std::vector<double> payments;    // [B, n]
};

// The mechanism network evaluated directly on double-precision copies of the
// parameters, cell by cell.
RefOutcome reference_forward(const net::NetConfig& config, const net::MechanismParams& params,
                             const std::vector<double>& bids, const ContextBatch& contexts);

}  // namespace af::checks
