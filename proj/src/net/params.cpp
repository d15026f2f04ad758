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

#include "af/net/params.hpp"

#include <cmath>

#include "af/env/random.hpp"
#include "af/errors.hpp"

namespace af::net {

NetConfig NetConfig::for_setting(const env::SettingSpec& spec) {
  NetConfig c;
  c.discrete = spec.discrete();
  if (c.discrete) {
    c.bidder_vocab = spec.bidder_domain;
    c.item_vocab = spec.item_domain;
  } else {
    c.bidder_dim = spec.bidder_dim;
    c.item_dim = spec.item_dim;
  }
  return c;
}

void NetConfig::validate() const {
  auto require = [](bool ok, const char* field, const std::string& why) {
    if (!ok) throw ValidationError(std::string("model.") + field + ": " + why);
  };
  require(model_dim >= 2, "d", "must be at least 2");
  require(heads >= 1, "heads", "must be positive");
  require(model_dim % heads == 0, "heads", "must divide d");
  require(conv_hidden >= 1, "conv_hidden", "must be positive");
  require(mlp_hidden >= 1, "mlp_hidden", "must be positive");
  require(layers >= 1, "layers", "must be positive");
  if (discrete) {
    require(embed_dim >= 1, "embed_dim", "must be positive");
    require(bidder_vocab >= 1 && item_vocab >= 1, "vocab", "discrete contexts need non-empty id domains");
  } else {
    require(bidder_dim >= 1 && item_dim >= 1, "context_dim", "must be positive");
  }
}

void MechanismParams::add(std::string name, Tensor value) {
  if (contains(name)) throw std::invalid_argument("duplicate parameter " + name);
  names_.push_back(std::move(name));
  tensors_.push_back(std::move(value));
}

std::size_t MechanismParams::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  throw std::out_of_range("no parameter named " + std::string(name));
}

const Tensor& MechanismParams::get(std::string_view name) const { return tensors_[index_of(name)]; }

bool MechanismParams::contains(std::string_view name) const {
  for (const auto& n : names_) {
    if (n == name) return true;
  }
  return false;
}

void MechanismParams::assign(std::vector<Tensor> tensors) {
  if (tensors.size() != tensors_.size()) throw ShapeError("params: wrong number of tensors");
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    if (tensors[i].shape() != tensors_[i].shape()) {
      throw ShapeError("params: " + names_[i] + " expects " + shape_string(tensors_[i].shape()) + ", got " +
                       shape_string(tensors[i].shape()));
    }
  }
  tensors_ = std::move(tensors);
}

std::int64_t MechanismParams::parameter_count() const {
  std::int64_t n = 0;
  for (const auto& t : tensors_) n += t.numel();
  return n;
}

namespace {

class Initializer {
 public:
  Initializer(MechanismParams& out, std::uint64_t seed) : out_(out), root_(derive_seed(seed, "init")) {}

  void weight(const std::string& name, std::int64_t fan_in, std::int64_t fan_out) {
    uniform(name, {fan_in, fan_out}, std::sqrt(1.0 / static_cast<double>(fan_in)));
  }
  void bias(const std::string& name, std::int64_t width) { out_.add(name, Tensor::zeros({width})); }
  void uniform(const std::string& name, Shape shape, double bound) {
    CounterRng rng = root_.substream(name);
    std::vector<float> data(static_cast<std::size_t>(shape_numel(shape)));
    for (float& v : data) v = static_cast<float>(rng.next_uniform(-bound, bound));
    out_.add(name, Tensor(std::move(shape), std::move(data)));
  }

 private:
  MechanismParams& out_;
  CounterRng root_;
};

}  // namespace

MechanismParams init_params(const NetConfig& c, std::uint64_t seed) {
  c.validate();
  MechanismParams p;
  Initializer init(p, seed);
  if (c.discrete) {
    init.uniform("embed.bidder", {c.bidder_vocab, c.embed_dim}, 1.0);
    init.uniform("embed.item", {c.item_vocab, c.embed_dim}, 1.0);
  }
  const int d = c.model_dim;
  const int pair_width = 1 + c.bidder_feature_dim() + c.item_feature_dim();
  init.weight("input.conv1.w", pair_width, c.conv_hidden);
  init.bias("input.conv1.b", c.conv_hidden);
  init.weight("input.conv2.w", c.conv_hidden, d - 1);
  init.bias("input.conv2.b", d - 1);
  for (int l = 0; l < c.layers; ++l) {
    const std::string prefix = "layer" + std::to_string(l) + ".";
    for (const char* dir : {"row", "col"}) {
      const std::string t = prefix + dir + ".";
      init.weight(t + "qkv", d, 3 * d);
      init.weight(t + "mlp1.w", d, c.mlp_hidden);
      init.bias(t + "mlp1.b", c.mlp_hidden);
      init.weight(t + "mlp2.w", c.mlp_hidden, d);
      init.bias(t + "mlp2.b", d);
    }
    const int d_out = l + 1 == c.layers ? 3 : d;
    init.weight(prefix + "conv3.w", 3 * d, c.conv_hidden);
    init.bias(prefix + "conv3.b", c.conv_hidden);
    init.weight(prefix + "conv4.w", c.conv_hidden, d_out);
    init.bias(prefix + "conv4.b", d_out);
  }
  return p;
}

}  // namespace af::net
