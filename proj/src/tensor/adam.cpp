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

#include "af/tensor/adam.hpp"

#include <cmath>
#include <string>

namespace af {

void adam_update(std::span<float> params, std::span<const float> grads, std::span<float> first_moment,
                 std::span<float> second_moment, std::int64_t step, const AdamConfig& config) {
  if (grads.size() != params.size() || first_moment.size() != params.size() ||
      second_moment.size() != params.size()) {
    throw ShapeError("adam: parameter, gradient and moment sizes differ");
  }
  const double c1 = 1.0 - std::pow(static_cast<double>(config.beta1), static_cast<double>(step));
  const double c2 = 1.0 - std::pow(static_cast<double>(config.beta2), static_cast<double>(step));
  const float step_size = static_cast<float>(config.learning_rate / c1);
  const float inv_sqrt_c2 = static_cast<float>(1.0 / std::sqrt(c2));
  const float b1 = config.beta1;
  const float b2 = config.beta2;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const float g = grads[i];
    first_moment[i] = b1 * first_moment[i] + (1.0f - b1) * g;
    second_moment[i] = b2 * second_moment[i] + (1.0f - b2) * g * g;
    const float denom = std::sqrt(second_moment[i]) * inv_sqrt_c2 + config.epsilon;
    params[i] -= step_size * first_moment[i] / denom;
  }
}

std::vector<Tensor> adam_step(std::span<const Tensor> params, std::span<const Tensor> grads, AdamState& state) {
  if (params.size() != grads.size()) {
    throw ShapeError("adam: " + std::to_string(params.size()) + " parameters but " + std::to_string(grads.size()) +
                     " gradients");
  }
  if (state.step_count == 0 && state.first_moment.empty()) {
    for (const auto& p : params) {
      state.first_moment.push_back(Tensor::zeros(p.shape()));
      state.second_moment.push_back(Tensor::zeros(p.shape()));
    }
  }
  if (state.first_moment.size() != params.size()) throw ShapeError("adam: state tracks a different parameter list");
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i].shape() != grads[i].shape() || params[i].shape() != state.first_moment[i].shape()) {
      throw ShapeError("adam: parameter " + std::to_string(i) + " shape " + shape_string(params[i].shape()) +
                       " vs gradient " + shape_string(grads[i].shape()) + " vs moment " +
                       shape_string(state.first_moment[i].shape()));
    }
  }
  const std::int64_t step = state.step_count + 1;
  std::vector<Tensor> updated;
  updated.reserve(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    std::vector<float> p(params[i].data().begin(), params[i].data().end());
    std::vector<float> m(state.first_moment[i].data().begin(), state.first_moment[i].data().end());
    std::vector<float> v(state.second_moment[i].data().begin(), state.second_moment[i].data().end());
    adam_update(p, grads[i].data(), m, v, step, state.config);
    updated.emplace_back(params[i].shape(), std::move(p), params[i].requires_grad());
    state.first_moment[i] = Tensor(params[i].shape(), std::move(m));
    state.second_moment[i] = Tensor(params[i].shape(), std::move(v));
  }
  state.step_count = step;
  return updated;
}

}  // namespace af
