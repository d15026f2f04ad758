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

#include "af/env/setting.hpp"
#include "af/eval/evaluator.hpp"
#include "af/net/params.hpp"
#include "af/train/trainer.hpp"

namespace af::cli {

struct DataConfig {
  int train_size = 50000;
  int test_size = 5000;
};

struct OosConfig {
  std::string axis = "items";  // "items" or "bidders"
  std::vector<int> values{3, 4, 5, 6, 7};
  int test_size = 0;           // 0: same as data.test_size
};

struct ChecksConfig {
  int grad_cases_per_op = 10;
  int grad_end_to_end = 40;
  int equivariance_triples = 100;
  std::int64_t feasibility_passes = 100000;
};

struct ExperimentConfig {
  char setting = 'A';
  std::uint64_t seed = 0;
  int runs = 1;
  std::string label = "run";
  std::string output_dir;  // empty: runs/<label>
  DataConfig data;
  net::NetConfig model;    // context fields are filled from the setting
  train::TrainConfig train;
  eval::EvalConfig eval;
  std::string eval_checkpoint;  // empty: <out>/checkpoint.afck
  OosConfig oos;
  ChecksConfig checks;

  env::SettingSpec spec() const { return env::setting_by_id(setting); }
};

// Every key is optional; unknown keys and out-of-range values throw
// ValidationError naming the field path, e.g. "train.epochs".
ExperimentConfig parse_config(const nlohmann::json& j);

// Reads a config file, or the "config" object of a manifest written by a
// previous run.
ExperimentConfig load_config(const std::filesystem::path& path);

// Fully resolved config with every field present.
nlohmann::json to_json(const ExperimentConfig& config);

// Hex FNV-1a hash of the canonical resolved config.
std::string config_hash(const ExperimentConfig& config);

// Stream seeds derived from the master seed.
struct SeedSet {
  std::uint64_t master = 0;
  std::uint64_t train_data = 0;
  std::uint64_t test_data = 0;
  std::uint64_t init = 0;
  std::uint64_t train = 0;
  std::uint64_t eval = 0;
};
SeedSet derive_seeds(std::uint64_t master);
nlohmann::json to_json(const SeedSet& seeds);

}  // namespace af::cli
