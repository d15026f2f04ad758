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

#include <vector>

#include "af/env/value_law.hpp"

namespace af::myerson {

// Ironed virtual value phi_bar(t) on a uniform grid over the law's support,
// linearly interpolated in between and clamped outside.
class VirtualValueTable {
 public:
  VirtualValueTable(double lo, double hi, std::vector<double> raw, std::vector<double> ironed);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  int grid_size() const { return static_cast<int>(ironed_.size()); }
  double grid_point(int k) const;
  const std::vector<double>& raw() const { return raw_; }
  const std::vector<double>& ironed() const { return ironed_; }

  double operator()(double t) const;

  // Smallest t in [lo, hi] with phi_bar(t) >= level, to within `tol`.
  // Returns hi when even phi_bar(hi) falls short.
  double threshold(double level, double tol = 1e-6) const;

 private:
  double lo_;
  double hi_;
  std::vector<double> raw_;
  std::vector<double> ironed_;
};

// phi(t) = t - (1 - F(t)) / f(t) on `grid` points, phi(hi) = hi, ironed
// through the upper concave hull of the revenue curve R(q) = t q with
// q = 1 - F(t). Throws ValidationError when the density vanishes inside
// the support.
VirtualValueTable build_virtual_values(const env::ValueLaw& law, int grid = 2048);

}  // namespace af::myerson
