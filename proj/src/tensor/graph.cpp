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

#include "af/tensor/graph.hpp"

#include <algorithm>

namespace af {

std::string_view op_name(OpKind kind) {
  switch (kind) {
    case OpKind::kLeaf: return "leaf";
    case OpKind::kMatMul: return "matmul";
    case OpKind::kLinear: return "linear";
    case OpKind::kAdd: return "add";
    case OpKind::kSub: return "sub";
    case OpKind::kMul: return "mul";
    case OpKind::kScale: return "scale";
    case OpKind::kRelu: return "relu";
    case OpKind::kSigmoid: return "sigmoid";
    case OpKind::kSoftmax: return "softmax";
    case OpKind::kSum: return "sum";
    case OpKind::kMean: return "mean";
    case OpKind::kSumAxis: return "sum_axis";
    case OpKind::kMeanAxis: return "mean_axis";
    case OpKind::kConcat: return "concat";
    case OpKind::kSlice: return "slice";
    case OpKind::kReshape: return "reshape";
    case OpKind::kRepeat: return "repeat";
    case OpKind::kInner: return "inner";
    case OpKind::kGather: return "gather";
    case OpKind::kAttention: return "attention";
  }
  return "unknown";
}

const Tensor& GradContext::output() const { return graph_.value(node_); }

const Tensor& GradContext::input(int k) const {
  return graph_.value(graph_.inputs(node_)[static_cast<std::size_t>(k)]);
}

bool GradContext::needs(int k) const {
  return graph_.requires_grad(graph_.inputs(node_)[static_cast<std::size_t>(k)]);
}

std::span<float> GradContext::grad_in(int k) {
  const Var v = graph_.inputs(node_)[static_cast<std::size_t>(k)];
  auto& g = grads_[static_cast<std::size_t>(v.id)];
  if (g.empty()) g.assign(static_cast<std::size_t>(graph_.value(v).numel()), 0.0f);
  return g;
}

const Graph::Node& Graph::node(Var v) const {
  if (v.id < 0 || static_cast<std::size_t>(v.id) >= nodes_.size()) {
    throw std::out_of_range("graph: unknown node id " + std::to_string(v.id));
  }
  return nodes_[static_cast<std::size_t>(v.id)];
}

Var Graph::leaf(Tensor value) {
  const bool rg = value.requires_grad();
  nodes_.push_back(Node{OpKind::kLeaf, {}, std::move(value), rg, nullptr});
  return Var{static_cast<std::int32_t>(nodes_.size() - 1)};
}

Var Graph::record(OpKind kind, std::vector<Var> inputs, Tensor output, BackwardFn backward) {
  bool rg = false;
  for (Var in : inputs) {
    if (in.id < 0 || static_cast<std::size_t>(in.id) >= nodes_.size()) {
      throw std::invalid_argument("graph: op '" + std::string(op_name(kind)) +
                                  "' references a node that does not precede it");
    }
    rg = rg || nodes_[static_cast<std::size_t>(in.id)].requires_grad;
  }
  if (!rg) backward = nullptr;
  nodes_.push_back(Node{kind, std::move(inputs), std::move(output), rg, std::move(backward)});
  return Var{static_cast<std::int32_t>(nodes_.size() - 1)};
}

Tensor Gradients::of(Var leaf) const {
  const auto i = static_cast<std::size_t>(leaf.id);
  if (leaf.id < 0 || i >= shapes_.size()) throw std::out_of_range("gradients: unknown node");
  if (grads_[i].empty()) return Tensor::zeros(shapes_[i]);
  return Tensor(shapes_[i], grads_[i]);
}

bool Gradients::reached(Var leaf) const {
  const auto i = static_cast<std::size_t>(leaf.id);
  return leaf.id >= 0 && i < grads_.size() && !grads_[i].empty();
}

Gradients backward(const Graph& graph, Var output) {
  const Tensor& out = graph.value(output);
  if (out.numel() != 1) {
    throw ShapeError("backward: output must be scalar, got shape " + shape_string(out.shape()));
  }
  std::vector<std::vector<float>> grads(graph.size());
  grads[static_cast<std::size_t>(output.id)] = {1.0f};
  for (std::int32_t id = output.id; id >= 0; --id) {
    const auto i = static_cast<std::size_t>(id);
    const auto& node = graph.nodes_[i];
    if (grads[i].empty() || !node.requires_grad || node.kind == OpKind::kLeaf) continue;
    if (node.backward) {
      // Keep the output gradient alive while the closure writes into inputs.
      std::vector<float> g = std::move(grads[i]);
      GradContext ctx(graph, Var{id}, g, grads);
      node.backward(ctx);
    }
    grads[i].clear();
    grads[i].shrink_to_fit();
  }
  Gradients result;
  result.shapes_.reserve(graph.size());
  for (std::size_t i = 0; i < graph.size(); ++i) {
    result.shapes_.push_back(graph.nodes_[i].value.shape());
    if (graph.nodes_[i].kind != OpKind::kLeaf) grads[i].clear();
  }
  result.grads_ = std::move(grads);
  return result;
}

}  // namespace af
