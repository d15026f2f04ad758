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
#include <span>
#include <vector>

#include "af/env/dataset.hpp"
#include "af/mechanism.hpp"

namespace af::train {

// Instances for utility probes: for sample l and bidder i, a copy of sample l
// with bidder i's row replaced by misreports[l, i, :]. Instance l*n + i
// probes bidder i, who holds values[l, i, :].
struct DeviationBatch {
  AuctionBatch batch;
  std::vector<int> bidder;   // [L*n]
  std::vector<float> value;  // [L*n, m]
};
DeviationBatch deviation_batch(const AuctionBatch& truthful, std::span<const float> values,
                               std::span<const float> misreports);

// Per-sample, per-bidder misreports v'_i, kept across epochs. Fresh entries
// start at the true value plus U[-0.1, 0.1] noise, projected into [0, cap].
class MisreportCache {
 public:
  MisreportCache(const env::Dataset& data, std::uint64_t seed);

  int n() const { return n_; }
  int m() const { return m_; }
  bool ready(int sample) const { return ready_[static_cast<std::size_t>(sample)] != 0; }

  // [L, n, m] for the listed samples, initializing any not seen before.
  std::vector<float> gather(std::span<const int> samples);
  void scatter(std::span<const int> samples, std::span<const float> misreports);

  std::span<const float> raw() const { return data_; }

 private:
  const env::Dataset* data_set_;
  std::uint64_t seed_;
  int n_;
  int m_;
  std::vector<float> data_;
  std::vector<std::uint8_t> ready_;
};

// Clamps every coordinate into [0, cap].
void project_to_box(std::span<float> misreports, std::span<const float> caps);

// `steps` rounds of plain projected gradient ascent (step size `lr`) on each
// bidder's utility at its own misreport, others bidding truthfully.
// misreports is [L, n, m] and updated in place.
void misreport_ascent(const Mechanism& mechanism, const AuctionBatch& truthful, std::span<const float> values,
                      std::span<const float> caps, std::span<float> misreports, int steps, float lr);

struct RegretEstimate {
  std::vector<double> per_sample;  // [L, n], max(0, u(misreport) - u(truth))
  std::vector<double> per_bidder;  // [n], averaged over samples
  double mean = 0.0;               // averaged over bidders
};

RegretEstimate empirical_regret(const Mechanism& mechanism, const AuctionBatch& truthful,
                                std::span<const float> values, std::span<const float> misreports);

}  // namespace af::train
