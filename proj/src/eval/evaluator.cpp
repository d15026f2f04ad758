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

#include "af/eval/evaluator.hpp"

#include <algorithm>
#include <limits>

#include "af/env/random.hpp"
#include "af/errors.hpp"
#include "af/simd/kernels.hpp"
#include "af/tensor/adam.hpp"

namespace af::eval {

void EvalConfig::validate() const {
  if (restarts < 1) throw ValidationError("eval.restarts: must be at least 1");
  if (steps < 0) throw ValidationError("eval.steps: must be nonnegative");
  if (!(lr > 0.0f)) throw ValidationError("eval.lr: must be positive");
  if (cells_per_batch < 1) throw ValidationError("eval.cells_per_batch: must be positive");
}

namespace {

struct TruthfulPass {
  double revenue = 0.0;
  std::vector<float> utility;  // [count, n]
};

TruthfulPass truthful_pass(const Mechanism& mech, const env::Dataset& test, int cells_per_batch) {
  const int n = test.spec.n, m = test.spec.m;
  const int chunk = std::max(1, cells_per_batch / (n * m));
  TruthfulPass out;
  out.utility.resize(static_cast<std::size_t>(test.count) * n);
  double paid = 0.0;
  std::vector<int> idx;
  for (int first = 0; first < test.count; first += chunk) {
    const int size = std::min(chunk, test.count - first);
    idx.resize(static_cast<std::size_t>(size));
    for (int s = 0; s < size; ++s) idx[static_cast<std::size_t>(s)] = first + s;
    const AuctionOutcome o = mech.run(test.truthful(idx));
    const std::size_t w = static_cast<std::size_t>(n) * m;
    const std::span<const float> values(test.values.data() + static_cast<std::size_t>(first) * w,
                                        static_cast<std::size_t>(size) * w);
    const std::vector<float> u = all_utilities(o, values);
    std::copy(u.begin(), u.end(), out.utility.begin() + static_cast<std::ptrdiff_t>(first) * n);
    for (float p : o.payments) paid += p;
  }
  out.revenue = paid / test.count;
  return out;
}

}  // namespace

double truthful_revenue(const Mechanism& mechanism, const env::Dataset& test, int cells_per_batch) {
  return truthful_pass(mechanism, test, cells_per_batch).revenue;
}

RegretReport evaluate(const Mechanism& mech, const env::Dataset& test, const EvalConfig& config) {
  const simd::FlushDenormals flush;
  config.validate();
  if (test.count < 1) throw ValidationError("evaluate: test set is empty");
  const int n = test.spec.n, m = test.spec.m, R = config.restarts;
  const std::size_t w = static_cast<std::size_t>(n) * m;
  const TruthfulPass truth = truthful_pass(mech, test, config.cells_per_batch);

  // Jobs enumerate (sample, bidder, restart), sample-major.
  const std::int64_t jobs = static_cast<std::int64_t>(test.count) * n * R;
  const std::int64_t group = std::max<std::int64_t>(1, config.cells_per_batch / (n * m));
  const CounterRng restart_root(derive_seed(config.seed, "eval-restarts"));
  std::vector<float> best(static_cast<std::size_t>(test.count) * n, -std::numeric_limits<float>::infinity());
  AdamConfig adam;
  adam.learning_rate = config.lr;
  const int steps = mech.differentiable() ? config.steps : 0;

  for (std::int64_t first = 0; first < jobs; first += group) {
    const auto size = static_cast<std::size_t>(std::min(group, jobs - first));
    std::vector<int> sample(size), bidder(size);
    std::vector<float> mis(size * m), caps(size * m), values(size * m);
    AuctionBatch batch;
    batch.count = static_cast<int>(size);
    batch.n = n;
    batch.m = m;
    batch.bids.resize(size * w);
    for (std::size_t k = 0; k < size; ++k) {
      const std::int64_t job = first + static_cast<std::int64_t>(k);
      const int s = static_cast<int>(job / (static_cast<std::int64_t>(n) * R));
      const int i = static_cast<int>((job / R) % n);
      const int r = static_cast<int>(job % R);
      sample[k] = s;
      bidder[k] = i;
      const std::size_t row = (static_cast<std::size_t>(s) * n + i) * m;
      std::copy_n(test.caps.data() + row, m, caps.data() + k * m);
      std::copy_n(test.values.data() + row, m, values.data() + k * m);
      CounterRng rng = restart_root.substream(static_cast<std::uint64_t>(s))
                           .substream(static_cast<std::uint64_t>(i))
                           .substream(static_cast<std::uint64_t>(r));
      for (int j = 0; j < m; ++j) mis[k * m + j] = static_cast<float>(rng.next_uniform() * caps[k * m + j]);
      std::copy_n(test.values.data() + static_cast<std::size_t>(s) * w, w, batch.bids.data() + k * w);
      std::copy_n(mis.data() + k * m, m, batch.bids.data() + k * w + static_cast<std::size_t>(i) * m);
    }
    batch.contexts = test.contexts.select(sample);

    std::vector<float> first_moment(mis.size(), 0.0f), second_moment(mis.size(), 0.0f), ascent(mis.size());
    for (int t = 0;; ++t) {
      const UtilityProbe probe = mech.probe(batch, bidder, values);
      for (std::size_t k = 0; k < size; ++k) {
        float& b = best[static_cast<std::size_t>(sample[k]) * n + bidder[k]];
        b = std::max(b, probe.utility[k]);
      }
      if (t >= steps) break;
      for (std::size_t e = 0; e < ascent.size(); ++e) ascent[e] = -probe.grad[e];
      adam_update(mis, ascent, first_moment, second_moment, t + 1, adam);
      for (std::size_t k = 0; k < size; ++k) {
        float* row = batch.bids.data() + k * w + static_cast<std::size_t>(bidder[k]) * m;
        for (int j = 0; j < m; ++j) {
          float& x = mis[k * m + j];
          x = std::clamp(x, 0.0f, caps[k * m + j]);
          row[j] = x;
        }
      }
    }
  }

  RegretReport report;
  report.setting = test.spec.label();
  report.mechanism = mech.name();
  report.n = n;
  report.m = m;
  report.samples = test.count;
  report.restarts = R;
  report.steps = config.steps;
  report.revenue = truth.revenue;
  report.seed = config.seed;
  report.per_bidder_regret.assign(static_cast<std::size_t>(n), 0.0);
  for (int s = 0; s < test.count; ++s) {
    for (int i = 0; i < n; ++i) {
      const std::size_t si = static_cast<std::size_t>(s) * n + i;
      const double gain = std::max(0.0, static_cast<double>(best[si]) - static_cast<double>(truth.utility[si]));
      report.per_bidder_regret[static_cast<std::size_t>(i)] += gain;
    }
  }
  for (double& r : report.per_bidder_regret) {
    r /= test.count;
    report.mean_regret += r / n;
  }
  return report;
}

RegretReport out_of_setting_eval(const Mechanism& mech, const env::SettingSpec& base, int n, int m, int count,
                                 std::uint64_t test_seed, const EvalConfig& config) {
  const env::SettingSpec spec = base.rescaled(n, m);
  const env::Dataset test = env::generate_dataset(spec, count, test_seed);
  return evaluate(mech, test, config);
}

}  // namespace af::eval
