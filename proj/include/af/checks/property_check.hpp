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
#include <utility>
#include <vector>

namespace af::checks {

struct EquivarianceResult {
  int triples = 0;
  double max_deviation = 0.0;  // over g and p, absolute
};

// Random (parameters, input, bidder and item permutation) triples spread over
// the given (n, m) sizes: the outcome of the permuted input must be the
// permuted outcome.
EquivarianceResult check_equivariance(std::uint64_t seed, int triples,
                                      const std::vector<std::pair<int, int>>& sizes = {{2, 3}, {3, 1}, {5, 10}});

struct FeasibilityResult {
  std::int64_t passes = 0;              // auction instances evaluated
  std::int64_t allocation_violations = 0;  // items with sum_i g_ij outside (0, 1)
  std::int64_t payment_violations = 0;     // bidders with p_i outside [0, sum_j g_ij b_ij]
};

// Random networks on random instances of random size.
FeasibilityResult check_feasibility(std::uint64_t seed, std::int64_t passes);

}  // namespace af::checks
