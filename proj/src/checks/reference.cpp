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

#include "af/checks/reference.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "af/errors.hpp"

namespace af::checks {

RefTensor RefTensor::of(const Tensor& t) {
  return RefTensor(t.shape(), std::vector<double>(t.data().begin(), t.data().end()));
}

namespace {

struct Split {
  std::int64_t outer = 1, len = 1, inner = 1;
};

Split split(const Shape& s, int axis) {
  Split out;
  for (int i = 0; i < axis; ++i) out.outer *= s[static_cast<std::size_t>(i)];
  out.len = s[static_cast<std::size_t>(axis)];
  for (std::size_t i = static_cast<std::size_t>(axis) + 1; i < s.size(); ++i) out.inner *= s[i];
  return out;
}

int axis_of(const Shape& s, int axis) { return axis < 0 ? axis + static_cast<int>(s.size()) : axis; }

RefTensor zip(const RefTensor& a, const RefTensor& b, double (*f)(double, double)) {
  if (a.shape != b.shape) throw ShapeError("reference: shape mismatch");
  RefTensor out(a.shape, std::vector<double>(a.data.size()));
  for (std::size_t i = 0; i < a.data.size(); ++i) out.data[i] = f(a.data[i], b.data[i]);
  return out;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

RefTensor ref_matmul(const RefTensor& a, const RefTensor& b) { return ref_linear(a, b, nullptr); }

RefTensor ref_linear(const RefTensor& x, const RefTensor& w, const RefTensor* bias) {
  const std::int64_t k = w.shape[0], n = w.shape[1];
  const std::int64_t rows = x.numel() / k;
  Shape os = x.shape;
  os.back() = n;
  RefTensor out(os, std::vector<double>(static_cast<std::size_t>(rows * n)));
  for (std::int64_t r = 0; r < rows; ++r) {
    for (std::int64_t c = 0; c < n; ++c) {
      double acc = bias ? bias->data[static_cast<std::size_t>(c)] : 0.0;
      for (std::int64_t p = 0; p < k; ++p) acc += x.data[static_cast<std::size_t>(r * k + p)] * w.data[static_cast<std::size_t>(p * n + c)];
      out.data[static_cast<std::size_t>(r * n + c)] = acc;
    }
  }
  return out;
}

RefTensor ref_add(const RefTensor& a, const RefTensor& b) { return zip(a, b, [](double x, double y) { return x + y; }); }
RefTensor ref_sub(const RefTensor& a, const RefTensor& b) { return zip(a, b, [](double x, double y) { return x - y; }); }
RefTensor ref_mul(const RefTensor& a, const RefTensor& b) { return zip(a, b, [](double x, double y) { return x * y; }); }

RefTensor ref_scale(const RefTensor& a, double factor) {
  RefTensor out = a;
  for (double& v : out.data) v *= factor;
  return out;
}

RefTensor ref_relu(const RefTensor& x) {
  RefTensor out = x;
  for (double& v : out.data) v = std::max(v, 0.0);
  return out;
}

RefTensor ref_sigmoid(const RefTensor& x) {
  RefTensor out = x;
  for (double& v : out.data) v = sigmoid(v);
  return out;
}

RefTensor ref_softmax(const RefTensor& x, int axis) {
  const Split s = split(x.shape, axis_of(x.shape, axis));
  RefTensor out = x;
  for (std::int64_t o = 0; o < s.outer; ++o) {
    for (std::int64_t i = 0; i < s.inner; ++i) {
      auto at = [&](std::int64_t l) { return static_cast<std::size_t>((o * s.len + l) * s.inner + i); };
      double mx = -INFINITY;
      for (std::int64_t l = 0; l < s.len; ++l) mx = std::max(mx, x.data[at(l)]);
      double total = 0.0;
      for (std::int64_t l = 0; l < s.len; ++l) total += std::exp(x.data[at(l)] - mx);
      for (std::int64_t l = 0; l < s.len; ++l) out.data[at(l)] = std::exp(x.data[at(l)] - mx) / total;
    }
  }
  return out;
}

RefTensor ref_sum(const RefTensor& x) {
  double total = 0.0;
  for (double v : x.data) total += v;
  return RefTensor({}, {total});
}

RefTensor ref_mean(const RefTensor& x) { return ref_scale(ref_sum(x), 1.0 / static_cast<double>(x.numel())); }

RefTensor ref_sum_axis(const RefTensor& x, int axis) {
  const int a = axis_of(x.shape, axis);
  const Split s = split(x.shape, a);
  Shape os = x.shape;
  os.erase(os.begin() + a);
  RefTensor out(os, std::vector<double>(static_cast<std::size_t>(s.outer * s.inner), 0.0));
  for (std::int64_t o = 0; o < s.outer; ++o) {
    for (std::int64_t l = 0; l < s.len; ++l) {
      for (std::int64_t i = 0; i < s.inner; ++i) {
        out.data[static_cast<std::size_t>(o * s.inner + i)] += x.data[static_cast<std::size_t>((o * s.len + l) * s.inner + i)];
      }
    }
  }
  return out;
}

RefTensor ref_mean_axis(const RefTensor& x, int axis) {
  return ref_scale(ref_sum_axis(x, axis), 1.0 / static_cast<double>(x.shape[static_cast<std::size_t>(axis_of(x.shape, axis))]));
}

RefTensor ref_concat(const std::vector<RefTensor>& parts, int axis) {
  const int a = axis_of(parts[0].shape, axis);
  Shape os = parts[0].shape;
  os[static_cast<std::size_t>(a)] = 0;
  for (const auto& p : parts) os[static_cast<std::size_t>(a)] += p.shape[static_cast<std::size_t>(a)];
  const Split s = split(os, a);
  RefTensor out(os, std::vector<double>(static_cast<std::size_t>(shape_numel(os))));
  for (std::int64_t o = 0; o < s.outer; ++o) {
    std::int64_t offset = 0;
    for (const auto& p : parts) {
      const std::int64_t w = p.shape[static_cast<std::size_t>(a)] * s.inner;
      for (std::int64_t e = 0; e < w; ++e) {
        out.data[static_cast<std::size_t>(o * s.len * s.inner + offset + e)] = p.data[static_cast<std::size_t>(o * w + e)];
      }
      offset += w;
    }
  }
  return out;
}

RefTensor ref_slice(const RefTensor& x, int axis, std::int64_t start, std::int64_t length) {
  const int a = axis_of(x.shape, axis);
  const Split s = split(x.shape, a);
  Shape os = x.shape;
  os[static_cast<std::size_t>(a)] = length;
  RefTensor out(os, std::vector<double>(static_cast<std::size_t>(shape_numel(os))));
  for (std::int64_t o = 0; o < s.outer; ++o) {
    for (std::int64_t l = 0; l < length; ++l) {
      for (std::int64_t i = 0; i < s.inner; ++i) {
        out.data[static_cast<std::size_t>((o * length + l) * s.inner + i)] =
            x.data[static_cast<std::size_t>((o * s.len + start + l) * s.inner + i)];
      }
    }
  }
  return out;
}

RefTensor ref_reshape(const RefTensor& x, Shape shape) { return RefTensor(std::move(shape), x.data); }

RefTensor ref_repeat(const RefTensor& x, int axis, std::int64_t count) {
  const int a = axis < 0 ? axis + static_cast<int>(x.shape.size()) + 1 : axis;
  std::int64_t outer = 1;
  for (int i = 0; i < a; ++i) outer *= x.shape[static_cast<std::size_t>(i)];
  const std::int64_t inner = x.numel() / outer;
  Shape os = x.shape;
  os.insert(os.begin() + a, count);
  RefTensor out(os, std::vector<double>(static_cast<std::size_t>(outer * count * inner)));
  for (std::int64_t o = 0; o < outer; ++o) {
    for (std::int64_t c = 0; c < count; ++c) {
      for (std::int64_t i = 0; i < inner; ++i) {
        out.data[static_cast<std::size_t>((o * count + c) * inner + i)] = x.data[static_cast<std::size_t>(o * inner + i)];
      }
    }
  }
  return out;
}

RefTensor ref_inner(const RefTensor& a, const RefTensor& b) {
  const std::int64_t len = a.shape.back();
  Shape os = a.shape;
  os.pop_back();
  RefTensor out(os, std::vector<double>(static_cast<std::size_t>(a.numel() / len), 0.0));
  for (std::size_t r = 0; r < out.data.size(); ++r) {
    for (std::int64_t l = 0; l < len; ++l) out.data[r] += a.data[r * static_cast<std::size_t>(len) + static_cast<std::size_t>(l)] * b.data[r * static_cast<std::size_t>(len) + static_cast<std::size_t>(l)];
  }
  return out;
}

RefTensor ref_gather(const RefTensor& table, const std::vector<std::int32_t>& ids, Shape lead) {
  const std::int64_t d = table.shape[1];
  lead.push_back(d);
  RefTensor out(lead, std::vector<double>(ids.size() * static_cast<std::size_t>(d)));
  for (std::size_t r = 0; r < ids.size(); ++r) {
    for (std::int64_t c = 0; c < d; ++c) out.data[r * static_cast<std::size_t>(d) + static_cast<std::size_t>(c)] = table.data[static_cast<std::size_t>(ids[r] * d + c)];
  }
  return out;
}

RefTensor ref_attention(const RefTensor& qkv, int seq_axis, int heads) {
  const Shape& s = qkv.shape;
  const int a = axis_of(s, seq_axis);
  const std::int64_t channels = s.back(), width = channels / 3, hd = width / heads;
  std::int64_t outer = 1, inner = 1;
  for (int i = 0; i < a; ++i) outer *= s[static_cast<std::size_t>(i)];
  for (std::size_t i = static_cast<std::size_t>(a) + 1; i + 1 < s.size(); ++i) inner *= s[i];
  const std::int64_t len = s[static_cast<std::size_t>(a)];
  Shape os = s;
  os.back() = width;
  RefTensor out(os, std::vector<double>(static_cast<std::size_t>(shape_numel(os)), 0.0));
  auto row = [&](std::int64_t o, std::int64_t l, std::int64_t in) { return (o * len + l) * inner + in; };
  std::vector<double> w(static_cast<std::size_t>(len));
  for (std::int64_t o = 0; o < outer; ++o) {
    for (std::int64_t in = 0; in < inner; ++in) {
      for (std::int64_t h = 0; h < heads; ++h) {
        for (std::int64_t qi = 0; qi < len; ++qi) {
          double mx = -INFINITY;
          for (std::int64_t kj = 0; kj < len; ++kj) {
            double dotp = 0.0;
            for (std::int64_t c = 0; c < hd; ++c) {
              dotp += qkv.data[static_cast<std::size_t>(row(o, qi, in) * channels + h * hd + c)] *
                      qkv.data[static_cast<std::size_t>(row(o, kj, in) * channels + width + h * hd + c)];
            }
            w[static_cast<std::size_t>(kj)] = dotp;
            mx = std::max(mx, dotp);
          }
          double total = 0.0;
          for (double& v : w) total += (v = std::exp(v - mx));
          for (std::int64_t kj = 0; kj < len; ++kj) {
            for (std::int64_t c = 0; c < hd; ++c) {
              out.data[static_cast<std::size_t>(row(o, qi, in) * width + h * hd + c)] +=
                  w[static_cast<std::size_t>(kj)] / total *
                  qkv.data[static_cast<std::size_t>(row(o, kj, in) * channels + 2 * width + h * hd + c)];
            }
          }
        }
      }
    }
  }
  return out;
}

namespace {

using Vec = std::vector<double>;

// y = W^T x + b for W stored [in, out].
Vec affine(const Vec& x, const Tensor& w, const Tensor* b) {
  const std::int64_t k = w.dim(0), n = w.dim(1);
  Vec y(static_cast<std::size_t>(n));
  for (std::int64_t c = 0; c < n; ++c) {
    double acc = b ? static_cast<double>((*b)[c]) : 0.0;
    for (std::int64_t p = 0; p < k; ++p) acc += x[static_cast<std::size_t>(p)] * static_cast<double>(w[p * n + c]);
    y[static_cast<std::size_t>(c)] = acc;
  }
  return y;
}

Vec relu(Vec v) {
  for (double& x : v) x = std::max(x, 0.0);
  return v;
}

Vec cat(std::initializer_list<const Vec*> parts) {
  Vec out;
  for (const Vec* p : parts) out.insert(out.end(), p->begin(), p->end());
  return out;
}

// Attention + MLP over one token sequence.
std::vector<Vec> transformer_seq(const std::vector<Vec>& tokens, const net::NetConfig& c,
                                 const net::MechanismParams& p, const std::string& t) {
  const std::size_t len = tokens.size();
  const int d = c.model_dim, hd = c.head_dim();
  std::vector<Vec> qkv(len);
  for (std::size_t l = 0; l < len; ++l) qkv[l] = affine(tokens[l], p.get(t + "qkv"), nullptr);
  std::vector<Vec> out(len, Vec(static_cast<std::size_t>(d), 0.0));
  for (int h = 0; h < c.heads; ++h) {
    for (std::size_t qi = 0; qi < len; ++qi) {
      Vec score(len);
      for (std::size_t kj = 0; kj < len; ++kj) {
        double s = 0.0;
        for (int e = 0; e < hd; ++e) s += qkv[qi][static_cast<std::size_t>(h * hd + e)] * qkv[kj][static_cast<std::size_t>(d + h * hd + e)];
        score[kj] = s;
      }
      const double mx = *std::max_element(score.begin(), score.end());
      double total = 0.0;
      for (double& s : score) total += (s = std::exp(s - mx));
      for (std::size_t kj = 0; kj < len; ++kj) {
        for (int e = 0; e < hd; ++e) {
          out[qi][static_cast<std::size_t>(h * hd + e)] += score[kj] / total * qkv[kj][static_cast<std::size_t>(2 * d + h * hd + e)];
        }
      }
    }
  }
  for (auto& o : out) {
    const Tensor& b1 = p.get(t + "mlp1.b");
    const Tensor& b2 = p.get(t + "mlp2.b");
    o = affine(relu(affine(o, p.get(t + "mlp1.w"), &b1)), p.get(t + "mlp2.w"), &b2);
  }
  return out;
}

}  // namespace

RefOutcome reference_forward(const net::NetConfig& c, const net::MechanismParams& p, const std::vector<double>& bids,
                             const ContextBatch& ctx) {
  const int B = ctx.count, n = ctx.n, m = ctx.m;
  auto bid = [&](int k, int i, int j) { return bids[(static_cast<std::size_t>(k) * n + i) * m + j]; };
  RefOutcome out;
  out.allocation.resize(static_cast<std::size_t>(B) * n * m);
  out.payments.resize(static_cast<std::size_t>(B) * n);
  for (int k = 0; k < B; ++k) {
    auto feature = [&](bool is_bidder, int idx) {
      const auto raw = is_bidder ? ctx.bidder_context(k, idx) : ctx.item_context(k, idx);
      if (!c.discrete) return Vec(raw.begin(), raw.end());
      const Tensor& table = p.get(is_bidder ? "embed.bidder" : "embed.item");
      const auto row = static_cast<std::int64_t>(std::lround(raw[0])) - 1;
      Vec v(static_cast<std::size_t>(table.dim(1)));
      for (std::size_t e = 0; e < v.size(); ++e) v[e] = table[row * table.dim(1) + static_cast<std::int64_t>(e)];
      return v;
    };
    // grid[i][j] is the d-dimensional cell representation.
    std::vector<std::vector<Vec>> grid(static_cast<std::size_t>(n), std::vector<Vec>(static_cast<std::size_t>(m)));
    const Tensor& b1 = p.get("input.conv1.b");
    const Tensor& b2 = p.get("input.conv2.b");
    for (int i = 0; i < n; ++i) {
      const Vec ex = feature(true, i);
      for (int j = 0; j < m; ++j) {
        const Vec fy = feature(false, j);
        const Vec b{bid(k, i, j)};
        const Vec pair = cat({&b, &ex, &fy});
        const Vec e = affine(relu(affine(pair, p.get("input.conv1.w"), &b1)), p.get("input.conv2.w"), &b2);
        grid[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = cat({&b, &e});
      }
    }
    for (int l = 0; l < c.layers; ++l) {
      const std::string prefix = "layer" + std::to_string(l) + ".";
      std::vector<std::vector<Vec>> row_out(static_cast<std::size_t>(n)), col_out(static_cast<std::size_t>(n), std::vector<Vec>(static_cast<std::size_t>(m)));
      for (int i = 0; i < n; ++i) row_out[static_cast<std::size_t>(i)] = transformer_seq(grid[static_cast<std::size_t>(i)], c, p, prefix + "row.");
      for (int j = 0; j < m; ++j) {
        std::vector<Vec> column;
        for (int i = 0; i < n; ++i) column.push_back(grid[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
        const auto res = transformer_seq(column, c, p, prefix + "col.");
        for (int i = 0; i < n; ++i) col_out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = res[static_cast<std::size_t>(i)];
      }
      Vec global(grid[0][0].size(), 0.0);
      for (const auto& r : grid) {
        for (const auto& cell : r) {
          for (std::size_t e = 0; e < global.size(); ++e) global[e] += cell[e] / (static_cast<double>(n) * m);
        }
      }
      const Tensor& cb3 = p.get(prefix + "conv3.b");
      const Tensor& cb4 = p.get(prefix + "conv4.b");
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
          const Vec merged = cat({&row_out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                                  &col_out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], &global});
          grid[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
              affine(relu(affine(merged, p.get(prefix + "conv3.w"), &cb3)), p.get(prefix + "conv4.w"), &cb4);
        }
      }
    }
    for (int j = 0; j < m; ++j) {
      double mx = -INFINITY;
      for (int i = 0; i < n; ++i) mx = std::max(mx, grid[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][0]);
      double total = 0.0;
      for (int i = 0; i < n; ++i) total += std::exp(grid[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][0] - mx);
      for (int i = 0; i < n; ++i) {
        const Vec& f = grid[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        out.allocation[(static_cast<std::size_t>(k) * n + i) * m + j] = std::exp(f[0] - mx) / total * sigmoid(f[1]);
      }
    }
    for (int i = 0; i < n; ++i) {
      double fraction = 0.0, value = 0.0;
      for (int j = 0; j < m; ++j) {
        fraction += grid[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][2] / m;
        value += out.allocation[(static_cast<std::size_t>(k) * n + i) * m + j] * bid(k, i, j);
      }
      out.payments[static_cast<std::size_t>(k) * n + i] = sigmoid(fraction) * value;
    }
  }
  return out;
}

}  // namespace af::checks
