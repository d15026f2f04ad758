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
#include <span>
#include <vector>

#include "af/tensor/graph.hpp"

// Differentiable ops recorded on a Graph. Shapes are checked eagerly and a
// mismatch throws ShapeError naming the op and the offending shapes.
namespace af::ops {

// [..., K] x [K, N] -> [..., N]; leading dims of `a` are flattened into rows.
Var matmul(Graph& g, Var a, Var b);

// x [..., K] times w [K, N] plus bias [N] (pass an invalid Var for no bias).
// This is the 1x1 convolution over a bidder-item grid.
Var linear(Graph& g, Var x, Var w, Var bias);

Var add(Graph& g, Var a, Var b);
Var sub(Graph& g, Var a, Var b);
Var mul(Graph& g, Var a, Var b);
Var scale(Graph& g, Var a, float factor);

Var relu(Graph& g, Var x);
Var sigmoid(Graph& g, Var x);

// Max-subtracted softmax along `axis`.
Var softmax(Graph& g, Var x, int axis);

// Reductions to a scalar.
Var sum(Graph& g, Var x);
Var mean(Graph& g, Var x);

// Reductions that drop `axis`.
Var sum_axis(Graph& g, Var x, int axis);
Var mean_axis(Graph& g, Var x, int axis);

Var concat(Graph& g, std::span<const Var> parts, int axis);
Var slice(Graph& g, Var x, int axis, std::int64_t start, std::int64_t length);
Var reshape(Graph& g, Var x, Shape shape);

// Inserts a new axis at position `axis` holding `count` copies of x.
Var repeat(Graph& g, Var x, int axis, std::int64_t count);

// Inner product over the last axis: [..., L] . [..., L] -> [...].
Var inner(Graph& g, Var a, Var b);

// Row lookup: table [V, D], ids -> lead_shape + [D]. Ids outside [0, V) throw
// ValidationError naming the id and the table size.
Var gather_rows(Graph& g, Var table, std::span<const std::int32_t> ids, Shape lead_shape);

// Multi-head key-value self-attention over sequences laid out along
// `seq_axis` of qkv. The last axis of qkv packs [query | key | value], each
// of width heads * head_dim with head h occupying columns [h*head_dim, (h+1)*head_dim).
// Every other non-channel axis indexes an independent sequence. Scores are the
// plain inner product <q_i, k_j> (no temperature). Output keeps the shape of qkv
// with the last axis reduced to heads * head_dim (heads concatenated).
// When `weights` is non-null it receives the attention weights laid out
// [sequence, head, query, key].
Var attention(Graph& g, Var qkv, int seq_axis, int heads, Tensor* weights = nullptr);

}  // namespace af::ops
