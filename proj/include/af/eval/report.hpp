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
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace af::eval {

struct RegretReport {
  std::string setting;
  std::string mechanism;
  int n = 0;
  int m = 0;
  int samples = 0;
  int restarts = 0;
  int steps = 0;
  double revenue = 0.0;
  double mean_regret = 0.0;
  std::vector<double> per_bidder_regret;
  std::uint64_t seed = 0;
};

nlohmann::json to_json(const RegretReport& report);
RegretReport report_from_json(const nlohmann::json& j);

// setting,mechanism,n,m,samples,restarts,steps,revenue,mean_regret,per_bidder_regret,seed
// per_bidder_regret is ';'-joined inside one field.
std::string csv_header();
std::string csv_row(const RegretReport& report);
RegretReport parse_csv_row(const std::string& line);

void write_report(const RegretReport& report, const std::filesystem::path& json_path,
                  const std::filesystem::path& csv_path);

}  // namespace af::eval
