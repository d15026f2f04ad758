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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <vector>

#include "af/env/dataset.hpp"
#include "af/env/random.hpp"
#include "af/env/sampler.hpp"
#include "af/env/value_law.hpp"
#include "af/errors.hpp"

namespace {

using namespace af;
using namespace af::env;

// Kolmogorov-Smirnov distance between a sample and a CDF.
double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double f = cdf(xs[k]);
    d = std::max({d, std::abs(static_cast<double>(k + 1) / n - f), std::abs(f - static_cast<double>(k) / n)});
  }
  return d;
}

// Composite Simpson on [lo, hi].
double integrate(const std::function<double(double)>& f, double lo, double hi, int panels = 20000) {
  const double h = (hi - lo) / panels;
  double s = f(lo) + f(hi);
  for (int k = 1; k < panels; ++k) s += f(lo + k * h) * (k % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

TEST(Settings, TableShapes) {
  EXPECT_EQ(setting_by_id('A').n, 3);
  EXPECT_EQ(setting_by_id('A').m, 1);
  EXPECT_EQ(setting_by_id('A').bidder_domain, 5);
  EXPECT_EQ(setting_by_id('A').item_domain, 1);
  EXPECT_EQ(setting_by_id('D').n, 2);
  EXPECT_EQ(setting_by_id('D').m, 5);
  EXPECT_EQ(setting_by_id('D').bidder_domain, 10);
  EXPECT_EQ(setting_by_id('G').context, ContextKind::kContinuous);
  EXPECT_EQ(setting_by_id('G').n, 2);
  EXPECT_EQ(setting_by_id('G').m, 5);
  EXPECT_EQ(setting_by_id('I').n, 5);
  EXPECT_EQ(setting_by_id('I').m, 10);
  EXPECT_EQ(setting_by_id('I').bidder_dim, 10);
  EXPECT_EQ(all_settings().size(), 9u);
  EXPECT_THROW(setting_by_id('Z'), ValidationError);
}

TEST(Settings, RescaleKeepsRuleOrRefuses) {
  const SettingSpec d = setting_by_id('D').rescaled(2, 7);
  EXPECT_EQ(d.m, 7);
  EXPECT_EQ(d.family, ValueFamily::kNormalModular);
  EXPECT_THROW(setting_by_id('B').rescaled(4, 1), ValidationError);
  EXPECT_NO_THROW(setting_by_id('B').rescaled(3, 4));
}

TEST(Sampler, SettingAContexts) {
  const SettingSpec a = setting_by_id('A');
  const ContextBatch c = sample_contexts(a, 100000 / 3 + 1, 42);
  double mean = 0.0;
  for (float x : c.bidder) {
    ASSERT_GE(x, 1.0f);
    ASSERT_LE(x, 5.0f);
    ASSERT_EQ(x, std::round(x));
    mean += x;
  }
  mean /= static_cast<double>(c.bidder.size());
  EXPECT_NEAR(mean, 3.0, 0.02);
  for (float y : c.item) EXPECT_EQ(y, 1.0f);
}

TEST(Sampler, ContinuousContextsInBox) {
  const ContextBatch c = sample_contexts(setting_by_id('C'), 2000, 1);
  EXPECT_EQ(c.bidder_dim, 10);
  for (float x : c.bidder) {
    ASSERT_GE(x, -1.0f);
    ASSERT_LE(x, 1.0f);
  }
}

TEST(Sampler, SupportContainmentAllSettings) {
  for (const SettingSpec& s : all_settings()) {
    const int count = 100000 / (s.n * s.m) + 1;
    const Dataset d = generate_dataset(s, count, 17);
    for (std::size_t k = 0; k < d.values.size(); ++k) {
      ASSERT_GE(d.values[k], 0.0f) << s.id;
      ASSERT_LE(d.values[k], d.caps[k]) << s.id;
      ASSERT_LE(d.caps[k], 1.0f) << s.id;
    }
  }
}

TEST(Sampler, ReproducibleAndShardable) {
  const SettingSpec s = setting_by_id('H');
  const Dataset a = generate_dataset(s, 300, 99);
  const Dataset b = generate_dataset(s, 300, 99);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.contexts.bidder, b.contexts.bidder);
  const ContextBatch part = sample_contexts(s, 100, 99, 200);
  EXPECT_TRUE(std::equal(part.bidder.begin(), part.bidder.end(),
                         a.contexts.bidder.begin() + 200 * s.n * s.bidder_dim));
  const Dataset other = generate_dataset(s, 300, 100);
  EXPECT_NE(a.values, other.values);
}

TEST(Sampler, SettingAMeanAtContextThree) {
  const SettingSpec a = setting_by_id('A');
  const Dataset d = generate_dataset(a, 150000, 5);
  std::vector<double> xs;
  for (int k = 0; k < d.count; ++k) {
    for (int i = 0; i < a.n; ++i) {
      if (d.contexts.bidder_context(k, i)[0] == 3.0f) xs.push_back(d.values[static_cast<std::size_t>(k * a.n + i)]);
    }
  }
  ASSERT_GT(xs.size(), 80000u);
  double mean = 0.0;
  for (double x : xs) mean += x;
  EXPECT_NEAR(mean / static_cast<double>(xs.size()), 0.5, 0.005);
  const ValueLaw law = ValueLaw::truncated_normal(0.5, 0.1);
  EXPECT_LT(ks_statistic(xs, [&](double t) { return law.cdf(t); }), 0.01);
}

// Per-pair KS checks: for every setting, pool draws whose conditional law is
// one fixed law (discrete), or map each draw through its own CDF and compare
// with U[0, 1] (continuous).
TEST(Sampler, EmpiricalCdfMatchesConditionalCdf) {
  for (const SettingSpec& s : all_settings()) {
    const int count = 100000 / (s.n * s.m) + 1;
    const Dataset d = generate_dataset(s, count, 23);
    std::vector<double> u;
    for (int k = 0; k < d.count; ++k) {
      for (int i = 0; i < s.n; ++i) {
        for (int j = 0; j < s.m; ++j) {
          const double v = d.values[(static_cast<std::size_t>(k) * s.n + i) * s.m + j];
          u.push_back(conditional_cdf(s, i, d.contexts.bidder_context(k, i), d.contexts.item_context(k, j), v));
        }
      }
    }
    EXPECT_LT(ks_statistic(u, [](double t) { return std::clamp(t, 0.0, 1.0); }), 0.01) << s.id;
  }
}

TEST(Laws, SettingDMeanFormula) {
  const SettingSpec d = setting_by_id('D');
  const float x[] = {9.0f};
  const float y[] = {2.0f};
  const ValueLaw law = conditional_law(d, 0, x, y);
  EXPECT_EQ(law.kind, LawKind::kTruncatedNormal);
  EXPECT_DOUBLE_EQ(law.mean, 2.0 / 11.0);
  EXPECT_DOUBLE_EQ(law.stddev, 0.05);
}

TEST(Laws, SettingBUsesBidderIndexForExponential) {
  const SettingSpec b = setting_by_id('B');
  const float x[] = {4.0f};
  const float y2[] = {2.0f};
  const float y1[] = {1.0f};
  for (int i = 0; i < 3; ++i) {
    const ValueLaw e = conditional_law(b, i, x, y2);
    EXPECT_EQ(e.kind, LawKind::kTruncatedExponential);
    EXPECT_DOUBLE_EQ(e.rate, (i + 1) / 6.0);
  }
  EXPECT_DOUBLE_EQ(conditional_law(b, 1, x, y1).mean, 4.0 / 6.0);
}

TEST(Laws, SettingCUniformCdf) {
  const SettingSpec c = setting_by_id('C');
  std::vector<float> x(10, 0.2f);
  std::vector<float> y(10, 0.3f);
  double dot = 0.0;
  for (int k = 0; k < 10; ++k) dot += static_cast<double>(x[k]) * y[k];
  const double s = 1.0 / (1.0 + std::exp(-dot));
  for (double t : {0.0, 0.1, 0.3, s, 0.9, 1.0}) {
    EXPECT_NEAR(conditional_cdf(c, 0, x, y, t), std::min(t / s, 1.0), 1e-12);
  }
  EXPECT_NEAR(value_cap(c, x, y), s, 1e-6);
}

TEST(Laws, SymmetricTruncatedNormalMedian) {
  const SettingSpec a = setting_by_id('A');
  const float x[] = {3.0f};
  const float y[] = {1.0f};
  EXPECT_NEAR(conditional_cdf(a, 0, x, y, 0.5), 0.5, 1e-12);
  const double by_quadrature = integrate([&](double t) { return conditional_pdf(a, 0, x, y, t); }, 0.0, 0.5);
  EXPECT_NEAR(by_quadrature, 0.5, 1e-6);
}

TEST(Laws, DensitiesIntegrateToOneAndCdfsAreMonotone) {
  std::vector<std::pair<SettingSpec, std::pair<std::vector<float>, std::vector<float>>>> cases;
  for (char id : {'A', 'B', 'D'}) {
    const SettingSpec s = setting_by_id(id);
    for (int x = 1; x <= s.bidder_domain; ++x) {
      for (int y = 1; y <= s.item_domain; ++y) cases.push_back({s, {{float(x)}, {float(y)}}});
    }
  }
  for (float shift : {-0.5f, 0.0f, 0.7f}) {
    cases.push_back({setting_by_id('C'), {std::vector<float>(10, shift), std::vector<float>(10, 0.4f)}});
  }
  for (const auto& [s, ctx] : cases) {
    for (int i = 0; i < s.n; ++i) {
      const auto& [x, y] = ctx;
      const double cap = conditional_law(s, i, x, y).hi;
      // The uniform law is piecewise, so integrate it over its support only.
      const double mass = integrate([&](double t) { return conditional_pdf(s, i, x, y, t); }, 0.0, cap);
      EXPECT_NEAR(mass, 1.0, 1e-6) << s.id << " x=" << x[0] << " y=" << y[0];
      EXPECT_EQ(conditional_cdf(s, i, x, y, 0.0), 0.0);
      EXPECT_NEAR(conditional_cdf(s, i, x, y, 1.0), 1.0, 1e-12);
      double prev = 0.0;
      for (int k = 0; k <= 200; ++k) {
        const double f = conditional_cdf(s, i, x, y, k / 200.0);
        ASSERT_GE(f, prev);
        prev = f;
      }
    }
  }
}

TEST(Laws, QuantileInvertsCdf) {
  const ValueLaw laws[] = {ValueLaw::truncated_normal(0.2, 0.05), ValueLaw::truncated_exponential(0.5),
                           ValueLaw::uniform(0.0, 0.6), ValueLaw::truncated_normal(0.9, 0.1)};
  for (const auto& law : laws) {
    for (double u : {1e-6, 0.01, 0.3, 0.5, 0.77, 0.999999}) EXPECT_NEAR(law.cdf(law.quantile(u)), u, 1e-9);
  }
  EXPECT_NEAR(normal_quantile(0.975), 1.959963984540054, 1e-9);
}

TEST(Dataset, FileRoundTripAndDeterminism) {
  const auto dir = std::filesystem::temp_directory_path() / "af_env_test";
  std::filesystem::create_directories(dir);
  for (char id : {'B', 'G'}) {
    const Dataset d = generate_dataset(setting_by_id(id), 257, 8);
    save_dataset(d, dir / "a.afds");
    save_dataset(generate_dataset(setting_by_id(id), 257, 8), dir / "b.afds");
    std::ifstream fa(dir / "a.afds", std::ios::binary);
    std::ifstream fb(dir / "b.afds", std::ios::binary);
    const std::string ba((std::istreambuf_iterator<char>(fa)), {});
    const std::string bb((std::istreambuf_iterator<char>(fb)), {});
    EXPECT_EQ(ba, bb);
    EXPECT_EQ(ba.substr(0, 4), "AFDS");
    const Dataset back = load_dataset(dir / "a.afds");
    EXPECT_EQ(back.spec.id, id);
    EXPECT_EQ(back.count, d.count);
    EXPECT_EQ(back.seed, d.seed);
    EXPECT_EQ(back.values, d.values);
    EXPECT_EQ(back.caps, d.caps);
    EXPECT_EQ(back.contexts.bidder, d.contexts.bidder);
    EXPECT_EQ(back.contexts.item, d.contexts.item);

    export_dataset_csv(d, dir / "a.csv");
    std::ifstream csv(dir / "a.csv");
    std::string header;
    std::getline(csv, header);
    EXPECT_EQ(header.rfind("sample,", 0), 0u);
    int rows = 0;
    for (std::string line; std::getline(csv, line);) ++rows;
    EXPECT_EQ(rows, d.count);
  }
  std::ofstream(dir / "bad.afds") << "nope";
  EXPECT_THROW(load_dataset(dir / "bad.afds"), ValidationError);
  std::filesystem::remove_all(dir);
}

TEST(Random, StreamsAreIndependentAndStable) {
  EXPECT_NE(derive_seed(1, "data/train"), derive_seed(1, "data/test"));
  EXPECT_NE(derive_seed(1, "init"), derive_seed(2, "init"));
  CounterRng a(7);
  CounterRng b(7);
  for (int k = 0; k < 10; ++k) EXPECT_EQ(a.next_bits(), b.next_bits());
  CounterRng r(3);
  for (int k = 0; k < 1000; ++k) {
    const double u = r.next_open_uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

}  // namespace
