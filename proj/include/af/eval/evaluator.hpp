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

#include "af/env/dataset.hpp"
#include "af/eval/report.hpp"
#include "af/mechanism.hpp"

namespace af::eval {

struct EvalConfig {
  int restarts = 100;
  int steps = 200;
  float lr = 0.01f;             // Adam on misreports
  std::uint64_t seed = 0;       // restart initializations
  int cells_per_batch = 12288;  // forward-pass size budget; does not change results

  void validate() const;
};

// Revenue at truthful bids and regret from a multi-restart projected Adam
// search over each bidder's misreport. Per (sample, bidder) the best utility
// over all restarts and all iterates is kept, so the estimate never falls
// when restarts or steps grow. Mechanisms without gradients are only probed
// at the restart points.
RegretReport evaluate(const Mechanism& mechanism, const env::Dataset& test, const EvalConfig& config);

// The same mechanism on a fresh test set of `count` samples with n bidders
// and m items drawn under the same per-pair rule. Throws ValidationError
// when the setting cannot be resized that way.
RegretReport out_of_setting_eval(const Mechanism& mechanism, const env::SettingSpec& base, int n, int m, int count,
                                 std::uint64_t test_seed, const EvalConfig& config);

// Mean over samples of sum_i p_i at truthful bids.
double truthful_revenue(const Mechanism& mechanism, const env::Dataset& test, int cells_per_batch = 12288);

}  // namespace af::eval
