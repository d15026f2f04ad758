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
#include <span>
#include <string_view>
#include <vector>

#include "af/tensor/tensor.hpp"

namespace af {

enum class OpKind {
  kLeaf,
  kMatMul,
  kLinear,
  kAdd,
  kSub,
  kMul,
  kScale,
  kRelu,
  kSigmoid,
  kSoftmax,
  kSum,
  kMean,
  kSumAxis,
  kMeanAxis,
  kConcat,
  kSlice,
  kReshape,
  kRepeat,
  kInner,
  kGather,
  kAttention,
};

std::string_view op_name(OpKind kind);

// Handle to a node of a Graph.
struct Var {
  std::int32_t id = -1;
  bool valid() const { return id >= 0; }
  friend bool operator==(Var, Var) = default;
};

class Graph;
class Gradients;
Gradients backward(const Graph& graph, Var output);

// View handed to a node's backward closure. Input gradients are allocated
// (zeroed) on first request and accumulate, so fan-out sums naturally.
class GradContext {
 public:
  std::span<const float> grad_out() const { return grad_out_; }
  const Tensor& output() const;
  const Tensor& input(int k) const;
  bool needs(int k) const;
  std::span<float> grad_in(int k);

 private:
  friend class Gradients;
  friend Gradients backward(const Graph& graph, Var output);
  GradContext(const Graph& graph, Var node, std::span<const float> grad_out,
              std::vector<std::vector<float>>& grads)
      : graph_(graph), node_(node), grad_out_(grad_out), grads_(grads) {}

  const Graph& graph_;
  Var node_;
  std::span<const float> grad_out_;
  std::vector<std::vector<float>>& grads_;
};

using BackwardFn = std::function<void(GradContext&)>;

// Append-only tape of op records. Inputs always precede their consumers, so
// node order is a topological order and cycles cannot be expressed.
class Graph {
 public:
  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;
  Graph(Graph&&) = default;
  Graph& operator=(Graph&&) = default;

  // Gradient eligibility comes from value.requires_grad().
  Var leaf(Tensor value);
  Var constant(Tensor value) { return leaf(value.with_requires_grad(false)); }

  Var record(OpKind kind, std::vector<Var> inputs, Tensor output, BackwardFn backward);

  const Tensor& value(Var v) const { return node(v).value; }
  bool requires_grad(Var v) const { return node(v).requires_grad; }
  OpKind kind(Var v) const { return node(v).kind; }
  std::span<const Var> inputs(Var v) const { return node(v).inputs; }
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    OpKind kind;
    std::vector<Var> inputs;
    Tensor value;
    bool requires_grad;
    BackwardFn backward;
  };
  const Node& node(Var v) const;

  std::vector<Node> nodes_;

  friend class GradContext;
  friend Gradients backward(const Graph& graph, Var output);
};

// Result of a reverse sweep: gradients of every leaf that requires grad.
class Gradients {
 public:
  // Shaped like the leaf; zeros when the leaf is unreachable from the output.
  Tensor of(Var leaf) const;
  bool reached(Var leaf) const;

 private:
  friend Gradients backward(const Graph& graph, Var output);
  std::vector<Shape> shapes_;
  std::vector<std::vector<float>> grads_;
};

// Reverse-mode sweep from a scalar output. Each node's backward runs at most once.
Gradients backward(const Graph& graph, Var output);

}  // namespace af
