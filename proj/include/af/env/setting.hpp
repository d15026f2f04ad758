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

#include <string>
#include <vector>

namespace af::env {

enum class ContextKind { kDiscrete, kContinuous };

// How v_ij depends on the contexts.
enum class ValueFamily {
  kNormalByBidder,     // N(x_i / 6, 0.1) truncated to [0, 1]
  kNormalOrExponential,// y_j = 1: as above; y_j = 2: density (i/6) e^{-(i/6) t} truncated to [0, 1]
  kUniformSigmoid,     // U[0, sigmoid(x_i . y_j)]
  kNormalModular,      // N(((x_i + y_j) mod 10 + 1) / 11, 0.05) truncated to [0, 1]
};

struct SettingSpec {
  char id = 'A';
  int n = 0;
  int m = 0;
  ContextKind context = ContextKind::kDiscrete;
  int bidder_domain = 0;  // |X| for discrete contexts, ids 1..|X|
  int item_domain = 0;    // |Y|
  int bidder_dim = 1;     // floats per stored bidder context
  int item_dim = 1;
  ValueFamily family = ValueFamily::kNormalByBidder;

  bool discrete() const { return context == ContextKind::kDiscrete; }
  // Value laws supported on [0, 1] (as opposed to a context-dependent cap).
  bool unit_box() const { return family != ValueFamily::kUniformSigmoid; }

  // Same contexts and per-pair value rule with a different auction size.
  // Throws ValidationError when the value rule is tied to specific bidders.
  SettingSpec rescaled(int bidders, int items) const;

  std::string label() const;
};

// Settings A through I; throws ValidationError for anything else.
SettingSpec setting_by_id(char id);
std::vector<SettingSpec> all_settings();

}  // namespace af::env
