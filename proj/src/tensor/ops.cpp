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

#include "af/tensor/ops.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "af/simd/kernels.hpp"

namespace af::ops {
namespace {

using simd::active_kernels;
using simd::StridedMatrix;

[[noreturn]] void shape_fail(OpKind kind, const Shape& a, const Shape& b, const std::string& detail = {}) {
  std::string msg = "op '" + std::string(op_name(kind)) + "': incompatible shapes " + shape_string(a) +
                    " and " + shape_string(b);
  if (!detail.empty()) msg += " (" + detail + ")";
  throw ShapeError(msg);
}

[[noreturn]] void shape_fail(OpKind kind, const Shape& a, const std::string& detail) {
  throw ShapeError("op '" + std::string(op_name(kind)) + "': shape " + shape_string(a) + " " + detail);
}

int normalize_axis(OpKind kind, const Shape& s, int axis, int extra = 0) {
  const int r = static_cast<int>(s.size()) + extra;
  const int a = axis < 0 ? axis + r : axis;
  if (a < 0 || a >= r) shape_fail(kind, s, "has no axis " + std::to_string(axis));
  return a;
}

struct AxisSplit {
  std::int64_t outer = 1;
  std::int64_t len = 1;
  std::int64_t inner = 1;
};

AxisSplit split_at(const Shape& s, int axis) {
  AxisSplit out;
  for (int i = 0; i < axis; ++i) out.outer *= s[static_cast<std::size_t>(i)];
  out.len = s[static_cast<std::size_t>(axis)];
  for (std::size_t i = static_cast<std::size_t>(axis) + 1; i < s.size(); ++i) out.inner *= s[i];
  return out;
}

std::vector<float> buffer(std::int64_t n, float fill = 0.0f) {
  return std::vector<float>(static_cast<std::size_t>(n), fill);
}

// dst[r x k] += src[r x n] * w^T where w is [k x n].
void gemm_times_transpose(std::int64_t rows, std::int64_t k, std::int64_t n, const float* src,
                          const float* w, float* dst) {
  std::vector<float> wt(static_cast<std::size_t>(k * n));
  for (std::int64_t i = 0; i < k; ++i) {
    for (std::int64_t j = 0; j < n; ++j) wt[static_cast<std::size_t>(j * k + i)] = w[i * n + j];
  }
  active_kernels().gemm_acc(rows, k, n, StridedMatrix{src, n, 1}, wt.data(), k, dst, k);
}

// dst[k x n] += x^T * gy where x is [rows x k] and gy is [rows x n].
void gemm_transpose_times(std::int64_t rows, std::int64_t k, std::int64_t n, const float* x,
                          const float* gy, float* dst) {
  active_kernels().gemm_acc(k, n, rows, StridedMatrix{x, 1, k}, gy, n, dst, n);
}

Var linear_impl(Graph& g, OpKind kind, Var x, Var w, Var bias) {
  const Tensor& xv = g.value(x);
  const Tensor& wv = g.value(w);
  if (wv.rank() != 2 || xv.rank() < 1 || xv.dim(-1) != wv.dim(0)) shape_fail(kind, xv.shape(), wv.shape());
  const std::int64_t k = wv.dim(0);
  const std::int64_t n = wv.dim(1);
  const std::int64_t rows = k == 0 ? 0 : xv.numel() / k;
  if (bias.valid()) {
    const Tensor& bv = g.value(bias);
    if (bv.rank() != 1 || bv.dim(0) != n) shape_fail(kind, wv.shape(), bv.shape(), "bias");
  }
  auto out = buffer(rows * n);
  if (bias.valid()) {
    const float* b = g.value(bias).raw();
    for (std::int64_t r = 0; r < rows; ++r) std::copy(b, b + n, out.data() + r * n);
  }
  active_kernels().gemm_acc(rows, n, k, StridedMatrix{xv.raw(), k, 1}, wv.raw(), n, out.data(), n);
  Shape os = xv.shape();
  os.back() = n;
  std::vector<Var> inputs{x, w};
  if (bias.valid()) inputs.push_back(bias);
  const bool has_bias = bias.valid();
  return g.record(kind, std::move(inputs), Tensor(std::move(os), std::move(out)),
                  [rows, k, n, has_bias](GradContext& ctx) {
                    const float* gy = ctx.grad_out().data();
                    if (ctx.needs(0)) {
                      gemm_times_transpose(rows, k, n, gy, ctx.input(1).raw(), ctx.grad_in(0).data());
                    }
                    if (ctx.needs(1)) {
                      gemm_transpose_times(rows, k, n, ctx.input(0).raw(), gy, ctx.grad_in(1).data());
                    }
                    if (has_bias && ctx.needs(2)) {
                      float* gb = ctx.grad_in(2).data();
                      const auto& kern = active_kernels();
                      for (std::int64_t r = 0; r < rows; ++r) kern.axpy(1.0f, gy + r * n, gb, n);
                    }
                  });
}

void require_same(OpKind kind, const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) shape_fail(kind, a.shape(), b.shape());
}

Var reduce_axis(Graph& g, OpKind kind, Var x, int axis, bool average) {
  const Tensor& xv = g.value(x);
  const int a = normalize_axis(kind, xv.shape(), axis);
  const AxisSplit sp = split_at(xv.shape(), a);
  auto out = buffer(sp.outer * sp.inner);
  const float* xs = xv.raw();
  const float factor = average ? 1.0f / static_cast<float>(sp.len) : 1.0f;
  for (std::int64_t o = 0; o < sp.outer; ++o) {
    float* dst = out.data() + o * sp.inner;
    for (std::int64_t l = 0; l < sp.len; ++l) {
      const float* src = xs + (o * sp.len + l) * sp.inner;
      for (std::int64_t i = 0; i < sp.inner; ++i) dst[i] += src[i];
    }
    if (average) {
      for (std::int64_t i = 0; i < sp.inner; ++i) dst[i] *= factor;
    }
  }
  Shape os = xv.shape();
  os.erase(os.begin() + a);
  return g.record(kind, {x}, Tensor(std::move(os), std::move(out)), [sp, factor](GradContext& ctx) {
    const float* gy = ctx.grad_out().data();
    float* gx = ctx.grad_in(0).data();
    for (std::int64_t o = 0; o < sp.outer; ++o) {
      for (std::int64_t l = 0; l < sp.len; ++l) {
        float* dst = gx + (o * sp.len + l) * sp.inner;
        const float* src = gy + o * sp.inner;
        for (std::int64_t i = 0; i < sp.inner; ++i) dst[i] += factor * src[i];
      }
    }
  });
}

}  // namespace

Var matmul(Graph& g, Var a, Var b) { return linear_impl(g, OpKind::kMatMul, a, b, Var{}); }

Var linear(Graph& g, Var x, Var w, Var bias) { return linear_impl(g, OpKind::kLinear, x, w, bias); }

Var add(Graph& g, Var a, Var b) {
  const Tensor& av = g.value(a);
  const Tensor& bv = g.value(b);
  require_same(OpKind::kAdd, av, bv);
  auto out = buffer(av.numel());
  for (std::int64_t i = 0; i < av.numel(); ++i) out[static_cast<std::size_t>(i)] = av[i] + bv[i];
  return g.record(OpKind::kAdd, {a, b}, Tensor(av.shape(), std::move(out)), [](GradContext& ctx) {
    const auto gy = ctx.grad_out();
    const auto n = static_cast<std::int64_t>(gy.size());
    for (int k = 0; k < 2; ++k) {
      if (ctx.needs(k)) active_kernels().axpy(1.0f, gy.data(), ctx.grad_in(k).data(), n);
    }
  });
}

Var sub(Graph& g, Var a, Var b) {
  const Tensor& av = g.value(a);
  const Tensor& bv = g.value(b);
  require_same(OpKind::kSub, av, bv);
  auto out = buffer(av.numel());
  for (std::int64_t i = 0; i < av.numel(); ++i) out[static_cast<std::size_t>(i)] = av[i] - bv[i];
  return g.record(OpKind::kSub, {a, b}, Tensor(av.shape(), std::move(out)), [](GradContext& ctx) {
    const auto gy = ctx.grad_out();
    const auto n = static_cast<std::int64_t>(gy.size());
    if (ctx.needs(0)) active_kernels().axpy(1.0f, gy.data(), ctx.grad_in(0).data(), n);
    if (ctx.needs(1)) active_kernels().axpy(-1.0f, gy.data(), ctx.grad_in(1).data(), n);
  });
}

Var mul(Graph& g, Var a, Var b) {
  const Tensor& av = g.value(a);
  const Tensor& bv = g.value(b);
  require_same(OpKind::kMul, av, bv);
  auto out = buffer(av.numel());
  active_kernels().mul(av.raw(), bv.raw(), out.data(), av.numel());
  return g.record(OpKind::kMul, {a, b}, Tensor(av.shape(), std::move(out)), [](GradContext& ctx) {
    const auto gy = ctx.grad_out();
    for (int k = 0; k < 2; ++k) {
      if (!ctx.needs(k)) continue;
      const float* other = ctx.input(1 - k).raw();
      auto gx = ctx.grad_in(k);
      for (std::size_t i = 0; i < gy.size(); ++i) gx[i] += gy[i] * other[i];
    }
  });
}

Var scale(Graph& g, Var a, float factor) {
  const Tensor& av = g.value(a);
  auto out = buffer(av.numel());
  for (std::int64_t i = 0; i < av.numel(); ++i) out[static_cast<std::size_t>(i)] = factor * av[i];
  return g.record(OpKind::kScale, {a}, Tensor(av.shape(), std::move(out)), [factor](GradContext& ctx) {
    const auto gy = ctx.grad_out();
    active_kernels().axpy(factor, gy.data(), ctx.grad_in(0).data(), static_cast<std::int64_t>(gy.size()));
  });
}

Var relu(Graph& g, Var x) {
  const Tensor& xv = g.value(x);
  auto out = buffer(xv.numel());
  active_kernels().relu(xv.raw(), out.data(), xv.numel());
  return g.record(OpKind::kRelu, {x}, Tensor(xv.shape(), std::move(out)), [](GradContext& ctx) {
    const auto gy = ctx.grad_out();
    active_kernels().relu_grad_acc(ctx.input(0).raw(), gy.data(), ctx.grad_in(0).data(),
                                   static_cast<std::int64_t>(gy.size()));
  });
}

Var sigmoid(Graph& g, Var x) {
  const Tensor& xv = g.value(x);
  auto out = buffer(xv.numel());
  for (std::int64_t i = 0; i < xv.numel(); ++i) {
    const float v = xv[i];
    if (v >= 0.0f) {
      out[static_cast<std::size_t>(i)] = 1.0f / (1.0f + std::exp(-v));
    } else {
      const float e = std::exp(v);
      out[static_cast<std::size_t>(i)] = e / (1.0f + e);
    }
  }
  return g.record(OpKind::kSigmoid, {x}, Tensor(xv.shape(), std::move(out)), [](GradContext& ctx) {
    const auto gy = ctx.grad_out();
    const float* y = ctx.output().raw();
    auto gx = ctx.grad_in(0);
    for (std::size_t i = 0; i < gy.size(); ++i) gx[i] += gy[i] * y[i] * (1.0f - y[i]);
  });
}

Var softmax(Graph& g, Var x, int axis) {
  const Tensor& xv = g.value(x);
  const int a = normalize_axis(OpKind::kSoftmax, xv.shape(), axis);
  const AxisSplit sp = split_at(xv.shape(), a);
  auto out = buffer(xv.numel());
  const float* xs = xv.raw();
  for (std::int64_t o = 0; o < sp.outer; ++o) {
    for (std::int64_t i = 0; i < sp.inner; ++i) {
      const std::int64_t base = o * sp.len * sp.inner + i;
      float mx = -INFINITY;
      for (std::int64_t l = 0; l < sp.len; ++l) mx = std::max(mx, xs[base + l * sp.inner]);
      float total = 0.0f;
      for (std::int64_t l = 0; l < sp.len; ++l) {
        const float e = std::exp(xs[base + l * sp.inner] - mx);
        out[static_cast<std::size_t>(base + l * sp.inner)] = e;
        total += e;
      }
      const float inv = 1.0f / total;
      for (std::int64_t l = 0; l < sp.len; ++l) out[static_cast<std::size_t>(base + l * sp.inner)] *= inv;
    }
  }
  return g.record(OpKind::kSoftmax, {x}, Tensor(xv.shape(), std::move(out)), [sp](GradContext& ctx) {
    const float* gy = ctx.grad_out().data();
    const float* y = ctx.output().raw();
    float* gx = ctx.grad_in(0).data();
    for (std::int64_t o = 0; o < sp.outer; ++o) {
      for (std::int64_t i = 0; i < sp.inner; ++i) {
        const std::int64_t base = o * sp.len * sp.inner + i;
        float dotp = 0.0f;
        for (std::int64_t l = 0; l < sp.len; ++l) dotp += y[base + l * sp.inner] * gy[base + l * sp.inner];
        for (std::int64_t l = 0; l < sp.len; ++l) {
          const std::int64_t idx = base + l * sp.inner;
          gx[idx] += y[idx] * (gy[idx] - dotp);
        }
      }
    }
  });
}

Var sum(Graph& g, Var x) {
  const Tensor& xv = g.value(x);
  double total = 0.0;
  for (float v : xv.data()) total += v;
  return g.record(OpKind::kSum, {x}, Tensor::scalar(static_cast<float>(total)), [](GradContext& ctx) {
    const float gy = ctx.grad_out()[0];
    for (float& v : ctx.grad_in(0)) v += gy;
  });
}

Var mean(Graph& g, Var x) {
  const Tensor& xv = g.value(x);
  if (xv.numel() == 0) shape_fail(OpKind::kMean, xv.shape(), "is empty");
  double total = 0.0;
  for (float v : xv.data()) total += v;
  const float inv = 1.0f / static_cast<float>(xv.numel());
  return g.record(OpKind::kMean, {x}, Tensor::scalar(static_cast<float>(total) * inv), [inv](GradContext& ctx) {
    const float gy = ctx.grad_out()[0] * inv;
    for (float& v : ctx.grad_in(0)) v += gy;
  });
}

Var sum_axis(Graph& g, Var x, int axis) { return reduce_axis(g, OpKind::kSumAxis, x, axis, false); }

Var mean_axis(Graph& g, Var x, int axis) { return reduce_axis(g, OpKind::kMeanAxis, x, axis, true); }

Var concat(Graph& g, std::span<const Var> parts, int axis) {
  if (parts.empty()) throw ShapeError("op 'concat': no inputs");
  const Shape& first = g.value(parts[0]).shape();
  const int a = normalize_axis(OpKind::kConcat, first, axis);
  std::vector<std::int64_t> widths;
  Shape os = first;
  os[static_cast<std::size_t>(a)] = 0;
  for (Var p : parts) {
    const Shape& s = g.value(p).shape();
    if (s.size() != first.size()) shape_fail(OpKind::kConcat, first, s, "rank");
    for (std::size_t d = 0; d < s.size(); ++d) {
      if (static_cast<int>(d) != a && s[d] != first[d]) shape_fail(OpKind::kConcat, first, s);
    }
    os[static_cast<std::size_t>(a)] += s[static_cast<std::size_t>(a)];
  }
  const AxisSplit sp = split_at(os, a);
  for (Var p : parts) widths.push_back(g.value(p).dim(a) * sp.inner);
  const std::int64_t row = sp.len * sp.inner;
  auto out = buffer(shape_numel(os));
  std::int64_t offset = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const float* src = g.value(parts[k]).raw();
    const std::int64_t w = widths[k];
    for (std::int64_t o = 0; o < sp.outer; ++o) std::copy(src + o * w, src + (o + 1) * w, out.data() + o * row + offset);
    offset += w;
  }
  return g.record(OpKind::kConcat, std::vector<Var>(parts.begin(), parts.end()), Tensor(std::move(os), std::move(out)),
                  [widths, sp, row](GradContext& ctx) {
                    const float* gy = ctx.grad_out().data();
                    std::int64_t off = 0;
                    for (std::size_t k = 0; k < widths.size(); ++k) {
                      const std::int64_t w = widths[k];
                      if (ctx.needs(static_cast<int>(k))) {
                        float* gx = ctx.grad_in(static_cast<int>(k)).data();
                        for (std::int64_t o = 0; o < sp.outer; ++o) {
                          const float* src = gy + o * row + off;
                          for (std::int64_t i = 0; i < w; ++i) gx[o * w + i] += src[i];
                        }
                      }
                      off += w;
                    }
                  });
}

Var slice(Graph& g, Var x, int axis, std::int64_t start, std::int64_t length) {
  const Tensor& xv = g.value(x);
  const int a = normalize_axis(OpKind::kSlice, xv.shape(), axis);
  const AxisSplit sp = split_at(xv.shape(), a);
  if (start < 0 || length < 0 || start + length > sp.len) {
    shape_fail(OpKind::kSlice, xv.shape(),
               "cannot take [" + std::to_string(start) + ", " + std::to_string(start + length) + ") on axis " +
                   std::to_string(axis));
  }
  Shape os = xv.shape();
  os[static_cast<std::size_t>(a)] = length;
  const std::int64_t w = length * sp.inner;
  const std::int64_t row = sp.len * sp.inner;
  const std::int64_t off = start * sp.inner;
  auto out = buffer(sp.outer * w);
  const float* src = xv.raw();
  for (std::int64_t o = 0; o < sp.outer; ++o) std::copy(src + o * row + off, src + o * row + off + w, out.data() + o * w);
  return g.record(OpKind::kSlice, {x}, Tensor(std::move(os), std::move(out)), [sp, w, row, off](GradContext& ctx) {
    const float* gy = ctx.grad_out().data();
    float* gx = ctx.grad_in(0).data();
    for (std::int64_t o = 0; o < sp.outer; ++o) {
      for (std::int64_t i = 0; i < w; ++i) gx[o * row + off + i] += gy[o * w + i];
    }
  });
}

Var reshape(Graph& g, Var x, Shape shape) {
  const Tensor& xv = g.value(x);
  if (shape_numel(shape) != xv.numel()) shape_fail(OpKind::kReshape, xv.shape(), shape);
  return g.record(OpKind::kReshape, {x}, xv.reshaped(std::move(shape)), [](GradContext& ctx) {
    const auto gy = ctx.grad_out();
    active_kernels().axpy(1.0f, gy.data(), ctx.grad_in(0).data(), static_cast<std::int64_t>(gy.size()));
  });
}

Var repeat(Graph& g, Var x, int axis, std::int64_t count) {
  const Tensor& xv = g.value(x);
  const int a = normalize_axis(OpKind::kRepeat, xv.shape(), axis, 1);
  if (count < 1) shape_fail(OpKind::kRepeat, xv.shape(), "repeat count " + std::to_string(count));
  std::int64_t outer = 1;
  for (int i = 0; i < a; ++i) outer *= xv.shape()[static_cast<std::size_t>(i)];
  const std::int64_t inner = outer == 0 ? 0 : xv.numel() / outer;
  Shape os = xv.shape();
  os.insert(os.begin() + a, count);
  auto out = buffer(outer * count * inner);
  const float* src = xv.raw();
  for (std::int64_t o = 0; o < outer; ++o) {
    for (std::int64_t c = 0; c < count; ++c) {
      std::copy(src + o * inner, src + (o + 1) * inner, out.data() + (o * count + c) * inner);
    }
  }
  return g.record(OpKind::kRepeat, {x}, Tensor(std::move(os), std::move(out)), [outer, count, inner](GradContext& ctx) {
    const float* gy = ctx.grad_out().data();
    float* gx = ctx.grad_in(0).data();
    const auto& kern = active_kernels();
    for (std::int64_t o = 0; o < outer; ++o) {
      for (std::int64_t c = 0; c < count; ++c) kern.axpy(1.0f, gy + (o * count + c) * inner, gx + o * inner, inner);
    }
  });
}

Var inner(Graph& g, Var a, Var b) {
  const Tensor& av = g.value(a);
  const Tensor& bv = g.value(b);
  require_same(OpKind::kInner, av, bv);
  if (av.rank() < 1) shape_fail(OpKind::kInner, av.shape(), "needs rank >= 1");
  const std::int64_t len = av.dim(-1);
  const std::int64_t rows = len == 0 ? 0 : av.numel() / len;
  auto out = buffer(rows);
  const auto& kern = active_kernels();
  for (std::int64_t r = 0; r < rows; ++r) out[static_cast<std::size_t>(r)] = kern.dot(av.raw() + r * len, bv.raw() + r * len, len);
  Shape os = av.shape();
  os.pop_back();
  return g.record(OpKind::kInner, {a, b}, Tensor(std::move(os), std::move(out)), [rows, len](GradContext& ctx) {
    const float* gy = ctx.grad_out().data();
    const auto& kern = active_kernels();
    for (int k = 0; k < 2; ++k) {
      if (!ctx.needs(k)) continue;
      const float* other = ctx.input(1 - k).raw();
      float* gx = ctx.grad_in(k).data();
      for (std::int64_t r = 0; r < rows; ++r) kern.axpy(gy[r], other + r * len, gx + r * len, len);
    }
  });
}

Var gather_rows(Graph& g, Var table, std::span<const std::int32_t> ids, Shape lead_shape) {
  const Tensor& tv = g.value(table);
  if (tv.rank() != 2) shape_fail(OpKind::kGather, tv.shape(), "is not a [rows, dim] table");
  if (shape_numel(lead_shape) != static_cast<std::int64_t>(ids.size())) {
    shape_fail(OpKind::kGather, lead_shape, "does not hold " + std::to_string(ids.size()) + " ids");
  }
  const std::int64_t vocab = tv.dim(0);
  const std::int64_t d = tv.dim(1);
  for (auto id : ids) {
    if (id < 0 || id >= vocab) {
      throw ValidationError("gather: id " + std::to_string(id) + " outside table of " + std::to_string(vocab) + " rows");
    }
  }
  auto out = buffer(static_cast<std::int64_t>(ids.size()) * d);
  for (std::size_t r = 0; r < ids.size(); ++r) {
    const float* src = tv.raw() + ids[r] * d;
    std::copy(src, src + d, out.data() + static_cast<std::int64_t>(r) * d);
  }
  Shape os = std::move(lead_shape);
  os.push_back(d);
  std::vector<std::int32_t> saved(ids.begin(), ids.end());
  return g.record(OpKind::kGather, {table}, Tensor(std::move(os), std::move(out)),
                  [saved = std::move(saved), d](GradContext& ctx) {
                    const float* gy = ctx.grad_out().data();
                    float* gt = ctx.grad_in(0).data();
                    for (std::size_t r = 0; r < saved.size(); ++r) {
                      active_kernels().axpy(1.0f, gy + static_cast<std::int64_t>(r) * d, gt + saved[r] * d, d);
                    }
                  });
}

Var attention(Graph& g, Var qkv, int seq_axis, int heads, Tensor* weights) {
  const Tensor& xv = g.value(qkv);
  const Shape& s = xv.shape();
  if (xv.rank() < 2) shape_fail(OpKind::kAttention, s, "needs a sequence axis and a channel axis");
  const int a = normalize_axis(OpKind::kAttention, s, seq_axis);
  if (a == xv.rank() - 1) shape_fail(OpKind::kAttention, s, "sequence axis cannot be the channel axis");
  const std::int64_t channels = s.back();
  if (heads < 1 || channels % (3 * heads) != 0) {
    shape_fail(OpKind::kAttention, s, "channels not divisible into 3 x " + std::to_string(heads) + " heads");
  }
  const std::int64_t width = channels / 3;
  const std::int64_t hd = width / heads;
  std::int64_t outer = 1;
  for (int i = 0; i < a; ++i) outer *= s[static_cast<std::size_t>(i)];
  const std::int64_t len = s[static_cast<std::size_t>(a)];
  std::int64_t inner = 1;
  for (int i = a + 1; i < xv.rank() - 1; ++i) inner *= s[static_cast<std::size_t>(i)];
  const std::int64_t sequences = outer * inner;
  const std::int64_t h_count = heads;

  auto alpha = std::make_shared<std::vector<float>>(static_cast<std::size_t>(sequences * h_count * len * len));
  auto out = buffer(xv.numel() / 3);
  const float* x = xv.raw();
  const auto& kern = active_kernels();
  std::vector<float> scores(static_cast<std::size_t>(len));
  for (std::int64_t o = 0; o < outer; ++o) {
    for (std::int64_t in = 0; in < inner; ++in) {
      const std::int64_t seq = o * inner + in;
      const std::int64_t base = o * len * inner + in;
      for (std::int64_t h = 0; h < h_count; ++h) {
        float* al = alpha->data() + (seq * h_count + h) * len * len;
        for (std::int64_t qi = 0; qi < len; ++qi) {
          const float* q = x + (base + qi * inner) * channels + h * hd;
          float mx = -INFINITY;
          for (std::int64_t kj = 0; kj < len; ++kj) {
            const float* k = x + (base + kj * inner) * channels + width + h * hd;
            scores[static_cast<std::size_t>(kj)] = kern.dot(q, k, hd);
            mx = std::max(mx, scores[static_cast<std::size_t>(kj)]);
          }
          float total = 0.0f;
          for (std::int64_t kj = 0; kj < len; ++kj) {
            const float e = std::exp(scores[static_cast<std::size_t>(kj)] - mx);
            al[qi * len + kj] = e;
            total += e;
          }
          const float inv = 1.0f / total;
          float* dst = out.data() + (base + qi * inner) * width + h * hd;
          for (std::int64_t kj = 0; kj < len; ++kj) {
            al[qi * len + kj] *= inv;
            const float* v = x + (base + kj * inner) * channels + 2 * width + h * hd;
            kern.axpy(al[qi * len + kj], v, dst, hd);
          }
        }
      }
    }
  }
  if (weights != nullptr) *weights = Tensor({sequences, h_count, len, len}, *alpha);
  Shape os = s;
  os.back() = width;
  return g.record(
      OpKind::kAttention, {qkv}, Tensor(std::move(os), std::move(out)),
      [alpha, outer, inner, len, h_count, hd, width, channels](GradContext& ctx) {
        const float* gy = ctx.grad_out().data();
        const float* x = ctx.input(0).raw();
        float* gx = ctx.grad_in(0).data();
        const auto& kern = active_kernels();
        std::vector<float> dalpha(static_cast<std::size_t>(len));
        for (std::int64_t o = 0; o < outer; ++o) {
          for (std::int64_t in = 0; in < inner; ++in) {
            const std::int64_t seq = o * inner + in;
            const std::int64_t base = o * len * inner + in;
            for (std::int64_t h = 0; h < h_count; ++h) {
              const float* al = alpha->data() + (seq * h_count + h) * len * len;
              for (std::int64_t qi = 0; qi < len; ++qi) {
                const std::int64_t qrow = (base + qi * inner);
                const float* go = gy + qrow * width + h * hd;
                float weighted = 0.0f;
                for (std::int64_t kj = 0; kj < len; ++kj) {
                  const std::int64_t krow = (base + kj * inner);
                  const float a_ij = al[qi * len + kj];
                  // value gradient
                  kern.axpy(a_ij, go, gx + krow * channels + 2 * width + h * hd, hd);
                  const float da = kern.dot(go, x + krow * channels + 2 * width + h * hd, hd);
                  dalpha[static_cast<std::size_t>(kj)] = da;
                  weighted += a_ij * da;
                }
                const float* q = x + qrow * channels + h * hd;
                float* gq = gx + qrow * channels + h * hd;
                for (std::int64_t kj = 0; kj < len; ++kj) {
                  const std::int64_t krow = (base + kj * inner);
                  const float ds = al[qi * len + kj] * (dalpha[static_cast<std::size_t>(kj)] - weighted);
                  kern.axpy(ds, x + krow * channels + width + h * hd, gq, hd);
                  kern.axpy(ds, q, gx + krow * channels + width + h * hd, hd);
                }
              }
            }
          }
        }
      });
}

}  // namespace af::ops
