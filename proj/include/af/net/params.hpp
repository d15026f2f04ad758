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
#include <string>
#include <string_view>
#include <vector>

#include "af/env/setting.hpp"
#include "af/tensor/tensor.hpp"

namespace af::net {

// Architecture hyperparameters. Nothing here depends on the auction size.
struct NetConfig {
  int model_dim = 64;    // d; also the transformer width d_h (the two must agree)
  int heads = 4;
  int conv_hidden = 64;  // output channels of the first 1x1 conv in every layer
  int mlp_hidden = 64;   // token-wise MLP hidden width
  int layers = 2;        // interaction layers
  int embed_dim = 16;
  bool discrete = true;
  int bidder_vocab = 0;  // discrete: |X|
  int item_vocab = 0;    // discrete: |Y|
  int bidder_dim = 1;    // continuous: raw context width
  int item_dim = 1;

  int bidder_feature_dim() const { return discrete ? embed_dim : bidder_dim; }
  int item_feature_dim() const { return discrete ? embed_dim : item_dim; }
  int head_dim() const { return model_dim / heads; }

  // Context handling taken from the setting, architecture from defaults.
  static NetConfig for_setting(const env::SettingSpec& spec);

  // Throws ValidationError naming the bad field.
  void validate() const;

  friend bool operator==(const NetConfig&, const NetConfig&) = default;
};

// Named, ordered parameter tensors.
class MechanismParams {
 public:
  void add(std::string name, Tensor value);

  std::size_t size() const { return tensors_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<Tensor>& tensors() const { return tensors_; }
  const Tensor& at(std::size_t index) const { return tensors_[index]; }
  const Tensor& get(std::string_view name) const;
  std::size_t index_of(std::string_view name) const;
  bool contains(std::string_view name) const;

  // Replaces every tensor, keeping names; shapes must match.
  void assign(std::vector<Tensor> tensors);

  std::int64_t parameter_count() const;

 private:
  std::vector<std::string> names_;
  std::vector<Tensor> tensors_;
};

// Weights uniform in +-sqrt(1/fan_in), biases zero. Embedding tables are
// lookups of one-hot inputs (fan_in 1), so their rows are uniform in [-1, 1].
MechanismParams init_params(const NetConfig& config, std::uint64_t seed);

}  // namespace af::net
