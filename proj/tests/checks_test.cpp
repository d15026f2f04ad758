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

#include <set>

#include "af/checks/gradient_check.hpp"
#include "af/checks/reference.hpp"
#include "af/env/dataset.hpp"
#include "af/net/mechanism_net.hpp"

namespace {

using namespace af;

TEST(GradientCheck, SmallSuitePassesAndCoversEveryOp) {
  checks::GradCheckConfig c;
  c.seed = 3;
  c.cases_per_op = 2;
  c.end_to_end_cases = 4;
  const auto s = checks::gradient_check(c);
  EXPECT_EQ(s.failures(), 0) << "worst " << s.worst();
  EXPECT_LT(s.worst(), 1e-3);
  std::set<std::string> kinds;
  int end_to_end = 0;
  for (const auto& k : s.cases) {
    if (k.name.rfind("end_to_end", 0) == 0) {
      ++end_to_end;
    } else {
      kinds.insert(k.name);
    }
  }
  EXPECT_EQ(kinds.size(), 20u);
  EXPECT_EQ(end_to_end, 4);
  EXPECT_EQ(s.cases.size(), 20u * 2 + 4);
}

// The double-precision reference network agrees with the float engine.
TEST(Reference, ForwardAgreesWithEngine) {
  for (char id : {'A', 'G'}) {
    const env::Dataset d = env::generate_dataset(env::setting_by_id(id), 4, 1);
    const net::NetConfig c = net::NetConfig::for_setting(d.spec);
    const net::MechanismNet net(c, 2);
    const AuctionOutcome o = net.run(d.truthful());
    const std::vector<double> bids(d.values.begin(), d.values.end());
    const checks::RefOutcome r = checks::reference_forward(c, net.params(), bids, d.contexts);
    for (std::size_t k = 0; k < o.allocation.size(); ++k) EXPECT_NEAR(o.allocation[k], r.allocation[k], 1e-5);
    for (std::size_t k = 0; k < o.payments.size(); ++k) EXPECT_NEAR(o.payments[k], r.payments[k], 1e-5);
  }
}

}  // namespace
