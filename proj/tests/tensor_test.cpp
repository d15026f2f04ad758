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

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "af/checks/reference.hpp"
#include "af/errors.hpp"
#include "af/tensor/adam.hpp"
#include "af/tensor/ops.hpp"

namespace {

using namespace af;

Tensor random_tensor(std::mt19937& rng, Shape shape, float lo = -1.0f, float hi = 1.0f, bool grad = false) {
  std::uniform_real_distribution<float> u(lo, hi);
  std::vector<float> v(static_cast<std::size_t>(shape_numel(shape)));
  for (auto& x : v) x = u(rng);
  return Tensor(std::move(shape), std::move(v), grad);
}

TEST(Ops, SoftmaxOfEqualInputsIsUniform) {
  Graph g;
  const Var x = g.constant(Tensor({3}, {0, 0, 0}));
  const Tensor y = g.value(ops::softmax(g, x, 0));
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(y[i], 1.0f / 3.0f, 1e-7);
}

TEST(Ops, SigmoidAndRelu) {
  Graph g;
  EXPECT_EQ(g.value(ops::sigmoid(g, g.constant(Tensor::scalar(0.0f)))).item(), 0.5f);
  const Tensor r = g.value(ops::relu(g, g.constant(Tensor({2}, {-1.5f, 2.0f}))));
  EXPECT_EQ(r[0], 0.0f);
  EXPECT_EQ(r[1], 2.0f);
  const Tensor s = g.value(ops::sigmoid(g, g.constant(Tensor({4}, {-30.0f, -2.0f, 3.0f, 12.0f}))));
  for (int i = 0; i < 4; ++i) {
    EXPECT_GT(s[i], 0.0f);
    EXPECT_LE(s[i], 1.0f);
  }
}

TEST(Ops, SoftmaxIsShiftInvariantProbabilityVector) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Tensor x = random_tensor(rng, {4, 5, 6}, -8.0f, 8.0f);
    for (int axis = 0; axis < 3; ++axis) {
      std::vector<float> shifted(x.data().begin(), x.data().end());
      for (auto& v : shifted) v += 3.25f;
      Graph g;
      const Tensor y = g.value(ops::softmax(g, g.constant(x), axis));
      const Tensor z = g.value(ops::softmax(g, g.constant(Tensor(x.shape(), shifted)), axis));
      for (std::int64_t i = 0; i < y.numel(); ++i) {
        ASSERT_GE(y[i], 0.0f);
        ASSERT_NEAR(y[i], z[i], 1e-6);
      }
      const Tensor sums = g.value(ops::sum_axis(g, g.constant(y), axis));
      for (std::int64_t i = 0; i < sums.numel(); ++i) ASSERT_NEAR(sums[i], 1.0f, 1e-6);
    }
  }
}

TEST(Ops, ShapeMismatchNamesOpAndShapes) {
  Graph g;
  const Var a = g.constant(Tensor::zeros({2, 3}));
  const Var b = g.constant(Tensor::zeros({4, 5}));
  try {
    ops::matmul(g, a, b);
    FAIL() << "expected ShapeError";
  } catch (const ShapeError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("matmul"), std::string::npos) << msg;
    EXPECT_NE(msg.find("[2,3]"), std::string::npos) << msg;
    EXPECT_NE(msg.find("[4,5]"), std::string::npos) << msg;
  }
  EXPECT_THROW(ops::add(g, a, b), ShapeError);
}

TEST(Ops, GatherRejectsOutOfRangeIds) {
  Graph g;
  const Var table = g.constant(Tensor::zeros({5, 16}));
  const std::vector<std::int32_t> ids{0, 5};
  try {
    ops::gather_rows(g, table, ids, {2});
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find('5'), std::string::npos) << msg;
  }
}

TEST(Backward, SigmoidSlopeAtZero) {
  Graph g;
  const Var x = g.leaf(Tensor::scalar(0.0f, true));
  const Gradients grads = backward(g, ops::sigmoid(g, x));
  EXPECT_FLOAT_EQ(grads.of(x).item(), 0.25f);
}

TEST(Backward, SumGivesOnes) {
  std::mt19937 rng(1);
  Graph g;
  const Var x = g.leaf(random_tensor(rng, {3, 4}, -1, 1, true));
  const Gradients grads = backward(g, ops::sum(g, x));
  const Tensor gx = grads.of(x);
  for (float v : gx.data()) EXPECT_EQ(v, 1.0f);
}

TEST(Backward, UnreachableLeafGetsZeros) {
  Graph g;
  const Var x = g.leaf(Tensor::full({2}, 1.0f, true));
  const Var y = g.leaf(Tensor::full({3, 2}, 1.0f, true));
  const Gradients grads = backward(g, ops::sum(g, x));
  EXPECT_FALSE(grads.reached(y));
  const Tensor gy = grads.of(y);
  EXPECT_EQ(gy.shape(), (Shape{3, 2}));
  for (float v : gy.data()) EXPECT_EQ(v, 0.0f);
}

TEST(Backward, NonScalarOutputThrows) {
  Graph g;
  const Var x = g.leaf(Tensor::full({2}, 1.0f, true));
  EXPECT_THROW(backward(g, ops::relu(g, x)), ShapeError);
}

TEST(Backward, FanOutAccumulates) {
  Graph g;
  const Var x = g.leaf(Tensor({2}, {1.5f, -2.0f}, true));
  const Var y = ops::add(g, ops::mul(g, x, x), x);
  const Gradients grads = backward(g, ops::sum(g, y));
  EXPECT_FLOAT_EQ(grads.of(x)[0], 2 * 1.5f + 1);
  EXPECT_FLOAT_EQ(grads.of(x)[1], 2 * -2.0f + 1);
}

// Three linear layers with ReLU, checked against central differences of an
// independent double-precision evaluation with step 1e-3.
TEST(Backward, ThreeLayerNetMatchesFiniteDifferences) {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Tensor> leaves{random_tensor(rng, {4, 6}),  random_tensor(rng, {6, 8}), random_tensor(rng, {8}),
                               random_tensor(rng, {8, 5}),  random_tensor(rng, {5}),    random_tensor(rng, {5, 3}),
                               random_tensor(rng, {3})};
    auto forward_ref = [](const std::vector<checks::RefTensor>& t) {
      auto h = checks::ref_relu(checks::ref_linear(t[0], t[1], &t[2]));
      h = checks::ref_relu(checks::ref_linear(h, t[3], &t[4]));
      return checks::ref_sum(checks::ref_sigmoid(checks::ref_linear(h, t[5], &t[6]))).data[0];
    };
    Graph g;
    std::vector<Var> vars;
    for (const auto& t : leaves) vars.push_back(g.leaf(t.with_requires_grad(true)));
    Var h = ops::relu(g, ops::linear(g, vars[0], vars[1], vars[2]));
    h = ops::relu(g, ops::linear(g, h, vars[3], vars[4]));
    const Var out = ops::sum(g, ops::sigmoid(g, ops::linear(g, h, vars[5], vars[6])));
    const Gradients grads = backward(g, out);

    std::vector<checks::RefTensor> ref;
    for (const auto& t : leaves) ref.push_back(checks::RefTensor::of(t));
    const double h_step = 1e-3;
    for (std::size_t k = 0; k < ref.size(); ++k) {
      const Tensor engine = grads.of(vars[k]);
      double diff = 0.0;
      double scale = 0.0;
      for (std::size_t e = 0; e < ref[k].data.size(); ++e) {
        const double saved = ref[k].data[e];
        ref[k].data[e] = saved + h_step;
        const double up = forward_ref(ref);
        ref[k].data[e] = saved - h_step;
        const double down = forward_ref(ref);
        ref[k].data[e] = saved;
        const double numeric = (up - down) / (2 * h_step);
        diff = std::max(diff, std::abs(numeric - engine[static_cast<std::int64_t>(e)]));
        scale = std::max(scale, std::abs(numeric));
      }
      if (scale < 1e-6) {
        EXPECT_LT(diff, 1e-6) << "leaf " << k;
      } else {
        EXPECT_LT(diff / scale, 1e-4) << "leaf " << k;
      }
    }
  }
}

TEST(Forward, Deterministic) {
  std::mt19937 rng(2);
  const Tensor a = random_tensor(rng, {50, 40});
  const Tensor b = random_tensor(rng, {40, 30});
  Graph g1;
  Graph g2;
  const Tensor y1 = g1.value(ops::softmax(g1, ops::matmul(g1, g1.constant(a), g1.constant(b)), 1));
  const Tensor y2 = g2.value(ops::softmax(g2, ops::matmul(g2, g2.constant(a), g2.constant(b)), 1));
  ASSERT_EQ(y1.numel(), y2.numel());
  EXPECT_EQ(0, std::memcmp(y1.raw(), y2.raw(), sizeof(float) * static_cast<std::size_t>(y1.numel())));
}

TEST(Adam, ZeroGradientLeavesParamsUnchanged) {
  AdamState state;
  const std::vector<Tensor> params{Tensor({3}, {0.5f, -1.0f, 2.0f})};
  const std::vector<Tensor> grads{Tensor::zeros({3})};
  const auto out = adam_step(params, grads, state);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(out[0][i], params[0][i]);
  EXPECT_EQ(state.step_count, 1);
  EXPECT_EQ(state.first_moment[0].shape(), params[0].shape());
}

TEST(Adam, UnitGradientFirstStep) {
  AdamState state;
  state.config.learning_rate = 1e-3f;
  const std::vector<Tensor> params{Tensor({2}, {0.0f, 1.0f})};
  const std::vector<Tensor> grads{Tensor::full({2}, 1.0f)};
  const auto out = adam_step(params, grads, state);
  EXPECT_NEAR(out[0][0], -1e-3, 1e-8);
  EXPECT_NEAR(out[0][1], 1.0 - 1e-3, 1e-7);
}

TEST(Adam, MatchesScriptedRecurrence) {
  const double lr = 0.01, b1 = 0.9, b2 = 0.999, eps = 1e-8;
  AdamState state;
  state.config.learning_rate = static_cast<float>(lr);
  std::vector<Tensor> params{Tensor({3}, {0.2f, -0.4f, 1.0f})};
  const std::vector<std::vector<float>> grads{{0.5f, -1.0f, 0.25f}, {-0.3f, 2.0f, 0.25f}};
  std::vector<double> theta{0.2, -0.4, 1.0};
  std::vector<double> m(3, 0.0);
  std::vector<double> v(3, 0.0);
  for (int t = 1; t <= 2; ++t) {
    params = adam_step(params, std::vector<Tensor>{Tensor({3}, grads[t - 1])}, state);
    for (int i = 0; i < 3; ++i) {
      const double gr = grads[t - 1][i];
      m[i] = b1 * m[i] + (1 - b1) * gr;
      v[i] = b2 * v[i] + (1 - b2) * gr * gr;
      const double mh = m[i] / (1 - std::pow(b1, t));
      const double vh = v[i] / (1 - std::pow(b2, t));
      theta[i] -= lr * mh / (std::sqrt(vh) + eps);
      EXPECT_NEAR(params[0][i], theta[i], 1e-6) << "step " << t << " coord " << i;
    }
    EXPECT_EQ(state.step_count, t);
  }
}

TEST(Adam, MisalignedShapesThrow) {
  AdamState state;
  const std::vector<Tensor> params{Tensor::zeros({3})};
  const std::vector<Tensor> grads{Tensor::zeros({4})};
  EXPECT_THROW(adam_step(params, grads, state), ShapeError);
}

}  // namespace
