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

#include "af/env/setting.hpp"

#include "af/errors.hpp"

namespace af::env {
namespace {

SettingSpec discrete(char id, int n, int m, int x_domain, int y_domain, ValueFamily family) {
  SettingSpec s;
  s.id = id;
  s.n = n;
  s.m = m;
  s.context = ContextKind::kDiscrete;
  s.bidder_domain = x_domain;
  s.item_domain = y_domain;
  s.bidder_dim = 1;
  s.item_dim = 1;
  s.family = family;
  return s;
}

SettingSpec continuous(char id, int n, int m) {
  SettingSpec s;
  s.id = id;
  s.n = n;
  s.m = m;
  s.context = ContextKind::kContinuous;
  s.bidder_dim = 10;
  s.item_dim = 10;
  s.family = ValueFamily::kUniformSigmoid;
  return s;
}

}  // namespace

SettingSpec setting_by_id(char id) {
  switch (id) {
    case 'A': return discrete('A', 3, 1, 5, 1, ValueFamily::kNormalByBidder);
    case 'B': return discrete('B', 3, 1, 5, 2, ValueFamily::kNormalOrExponential);
    case 'C': return continuous('C', 5, 1);
    case 'D': return discrete('D', 2, 5, 10, 10, ValueFamily::kNormalModular);
    case 'E': return discrete('E', 3, 10, 10, 10, ValueFamily::kNormalModular);
    case 'F': return discrete('F', 5, 10, 10, 10, ValueFamily::kNormalModular);
    case 'G': return continuous('G', 2, 5);
    case 'H': return continuous('H', 3, 10);
    case 'I': return continuous('I', 5, 10);
    default: break;
  }
  throw ValidationError(std::string("unknown setting '") + id + "' (expected A-I)");
}

std::vector<SettingSpec> all_settings() {
  std::vector<SettingSpec> out;
  for (char c = 'A'; c <= 'I'; ++c) out.push_back(setting_by_id(c));
  return out;
}

SettingSpec SettingSpec::rescaled(int bidders, int items) const {
  if (bidders < 1 || items < 1) throw ValidationError("auction size must be at least 1x1");
  if (family == ValueFamily::kNormalOrExponential && bidders != n) {
    throw ValidationError(std::string("setting ") + id +
                          " ties its value law to bidder positions and cannot change the bidder count");
  }
  SettingSpec s = *this;
  s.n = bidders;
  s.m = items;
  return s;
}

std::string SettingSpec::label() const { return std::string(1, id); }

}  // namespace af::env
