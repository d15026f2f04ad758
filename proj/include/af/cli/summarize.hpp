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

#include <filesystem>
#include <vector>

namespace af::cli {

// Collects every report.json, baseline.json, oos.csv and history.jsonl under
// `root` and writes summary.csv (one row per report), summary_stats.csv (mean
// and sample standard deviation over seeds per setting, mechanism, n and m),
// plot_oos.csv and plot_training.csv. Returns the files written.
std::vector<std::filesystem::path> summarize(const std::filesystem::path& root);

}  // namespace af::cli
