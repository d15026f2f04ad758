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

#include <span>
#include <string>

#include "af/env/setting.hpp"

namespace af::env {

double normal_cdf(double z);
double normal_sf(double z);
double normal_pdf(double z);
// Inverse standard normal CDF; Acklam's rational approximation refined by
// one Halley step against erfc, relative error far below 1e-9.
double normal_quantile(double p);

enum class LawKind { kTruncatedNormal, kTruncatedExponential, kUniform };

// A one-dimensional atomless value distribution on [lo, hi].
struct ValueLaw {
  LawKind kind = LawKind::kUniform;
  double mean = 0.0;   // truncated normal location
  double stddev = 1.0; // truncated normal scale
  double rate = 1.0;   // truncated exponential rate
  double lo = 0.0;
  double hi = 1.0;

  static ValueLaw truncated_normal(double mean, double stddev, double lo = 0.0, double hi = 1.0);
  static ValueLaw truncated_exponential(double rate, double lo = 0.0, double hi = 1.0);
  static ValueLaw uniform(double lo, double hi);

  double cdf(double t) const;
  double survival(double t) const;
  double pdf(double t) const;
  // Inverse CDF for u in (0, 1).
  double quantile(double u) const;

  std::string describe() const;
  friend bool operator==(const ValueLaw&, const ValueLaw&) = default;
};

// Law of v_ij given the contexts; `bidder` is the 0-based bidder position.
ValueLaw conditional_law(const SettingSpec& spec, int bidder, std::span<const float> x_i,
                         std::span<const float> y_j);

double conditional_cdf(const SettingSpec& spec, int bidder, std::span<const float> x_i,
                       std::span<const float> y_j, double t);
double conditional_pdf(const SettingSpec& spec, int bidder, std::span<const float> x_i,
                       std::span<const float> y_j, double t);

// Upper end of the misreport box for the pair: 1, or sigmoid(x_i . y_j).
float value_cap(const SettingSpec& spec, std::span<const float> x_i, std::span<const float> y_j);

}  // namespace af::env
