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
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "af/errors.hpp"

namespace af {

using Shape = std::vector<std::int64_t>;

std::int64_t shape_numel(const Shape& shape);
std::string shape_string(const Shape& shape);

// Dense row-major float32 tensor. The buffer is immutable once constructed
// and shared between copies, so tensors can be read from several threads.
class Tensor {
 public:
  Tensor();
  Tensor(Shape shape, std::vector<float> data, bool requires_grad = false);

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor full(Shape shape, float value, bool requires_grad = false);
  static Tensor scalar(float value, bool requires_grad = false);

  const Shape& shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  // Negative axes count from the back.
  std::int64_t dim(int axis) const;
  std::int64_t numel() const { return static_cast<std::int64_t>(data_->size()); }

  std::span<const float> data() const { return {data_->data(), data_->size()}; }
  const float* raw() const { return data_->data(); }
  float operator[](std::int64_t i) const { return (*data_)[static_cast<std::size_t>(i)]; }
  // Value of a single-element tensor.
  float item() const;

  bool requires_grad() const { return requires_grad_; }
  Tensor with_requires_grad(bool flag) const;

  // Same buffer, new shape with equal element count.
  Tensor reshaped(Shape shape) const;

  bool all_finite() const;

 private:
  Shape shape_;
  std::shared_ptr<const std::vector<float>> data_;
  bool requires_grad_ = false;
};

}  // namespace af
