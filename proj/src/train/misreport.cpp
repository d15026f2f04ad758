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

#include "af/train/misreport.hpp"

#include <algorithm>

#include "af/env/random.hpp"
#include "af/errors.hpp"

namespace af::train {

DeviationBatch deviation_batch(const AuctionBatch& t, std::span<const float> values,
                               std::span<const float> misreports) {
  const std::size_t L = static_cast<std::size_t>(t.count), n = static_cast<std::size_t>(t.n),
                    m = static_cast<std::size_t>(t.m);
  if (values.size() != L * n * m || misreports.size() != L * n * m) {
    throw ShapeError("deviation batch: values/misreports must be [L, n, m]");
  }
  DeviationBatch d;
  d.batch.count = static_cast<int>(L * n);
  d.batch.n = t.n;
  d.batch.m = t.m;
  d.batch.bids.resize(L * n * n * m);
  d.bidder.resize(L * n);
  d.value.resize(L * n * m);
  std::vector<int> source(L * n);
  for (std::size_t l = 0; l < L; ++l) {
    const float* bids = t.bids.data() + l * n * m;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t k = l * n + i;
      float* dst = d.batch.bids.data() + k * n * m;
      std::copy(bids, bids + n * m, dst);
      std::copy_n(misreports.data() + (l * n + i) * m, m, dst + i * m);
      std::copy_n(values.data() + (l * n + i) * m, m, d.value.data() + k * m);
      d.bidder[k] = static_cast<int>(i);
      source[k] = static_cast<int>(l);
    }
  }
  d.batch.contexts = t.contexts.select(source);
  return d;
}

MisreportCache::MisreportCache(const env::Dataset& data, std::uint64_t seed)
    : data_set_(&data),
      seed_(derive_seed(seed, "misreports")),
      n_(data.spec.n),
      m_(data.spec.m),
      data_(static_cast<std::size_t>(data.count) * n_ * m_, 0.0f),
      ready_(static_cast<std::size_t>(data.count), 0) {}

std::vector<float> MisreportCache::gather(std::span<const int> samples) {
  const std::size_t w = static_cast<std::size_t>(n_) * m_;
  std::vector<float> out(samples.size() * w);
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const auto k = static_cast<std::size_t>(samples[s]);
    if (!ready_[k]) {
      CounterRng rng = CounterRng(seed_).substream(static_cast<std::uint64_t>(k));
      for (std::size_t e = 0; e < w; ++e) {
        const float v = data_set_->values[k * w + e];
        const float cap = data_set_->caps[k * w + e];
        const float noisy = v + static_cast<float>(rng.next_uniform(-0.1, 0.1));
        data_[k * w + e] = std::clamp(noisy, 0.0f, cap);
      }
      ready_[k] = 1;
    }
    std::copy_n(data_.data() + k * w, w, out.data() + s * w);
  }
  return out;
}

void MisreportCache::scatter(std::span<const int> samples, std::span<const float> misreports) {
  const std::size_t w = static_cast<std::size_t>(n_) * m_;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const auto k = static_cast<std::size_t>(samples[s]);
    std::copy_n(misreports.data() + s * w, w, data_.data() + k * w);
    ready_[k] = 1;
  }
}

void project_to_box(std::span<float> x, std::span<const float> caps) {
  for (std::size_t e = 0; e < x.size(); ++e) x[e] = std::clamp(x[e], 0.0f, caps[e]);
}

void misreport_ascent(const Mechanism& mech, const AuctionBatch& truthful, std::span<const float> values,
                      std::span<const float> caps, std::span<float> misreports, int steps, float lr) {
  if (steps <= 0) return;
  const std::size_t n = static_cast<std::size_t>(truthful.n), m = static_cast<std::size_t>(truthful.m);
  DeviationBatch d = deviation_batch(truthful, values, misreports);
  for (int step = 0; step < steps; ++step) {
    const UtilityProbe probe = mech.probe(d.batch, d.bidder, d.value);
    for (std::size_t k = 0; k < d.bidder.size(); ++k) {
      float* row = misreports.data() + k * m;
      const float* cap = caps.data() + k * m;
      for (std::size_t j = 0; j < m; ++j) row[j] = std::clamp(row[j] + lr * probe.grad[k * m + j], 0.0f, cap[j]);
      // Keep the probe batch in sync: instance k carries bidder (k mod n)'s misreport.
      std::copy_n(row, m, d.batch.bids.data() + (k * n + k % n) * m);
    }
  }
}

RegretEstimate empirical_regret(const Mechanism& mech, const AuctionBatch& truthful, std::span<const float> values,
                                std::span<const float> misreports) {
  const std::size_t L = static_cast<std::size_t>(truthful.count), n = static_cast<std::size_t>(truthful.n);
  const DeviationBatch d = deviation_batch(truthful, values, misreports);
  const std::vector<float> deviated = bidder_utility(mech.run(d.batch), d.bidder, d.value);
  const std::vector<float> truth = all_utilities(mech.run(truthful), values);
  RegretEstimate r;
  r.per_sample.resize(L * n);
  r.per_bidder.assign(n, 0.0);
  for (std::size_t l = 0; l < L; ++l) {
    for (std::size_t i = 0; i < n; ++i) {
      const double gain = std::max(0.0, static_cast<double>(deviated[l * n + i]) - static_cast<double>(truth[l * n + i]));
      r.per_sample[l * n + i] = gain;
      r.per_bidder[i] += gain / static_cast<double>(L);
    }
  }
  for (double v : r.per_bidder) r.mean += v / static_cast<double>(n);
  return r;
}

}  // namespace af::train
