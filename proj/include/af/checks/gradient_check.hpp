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
#include <string>
#include <vector>

namespace af::checks {

struct CheckCase {
  std::string name;
  double error = 0.0;  // worst relative error of the case
  bool passed = false;
};

struct CheckSummary {
  std::vector<CheckCase> cases;
  int failures() const;
  double worst() const;
};

struct GradCheckConfig {
  std::uint64_t seed = 0;
  int cases_per_op = 10;
  int end_to_end_cases = 40;
  double tolerance = 1e-3;
};

// Engine gradients against central differences of the double-precision
// reference. Error of a case: max-norm of (engine - numeric) over max-norm of
// numeric, together with the forward mismatch measured the same way.
// Covers every op kind, then dp_i/db through whole randomly sized networks.
CheckSummary gradient_check(const GradCheckConfig& config);

}  // namespace af::checks
