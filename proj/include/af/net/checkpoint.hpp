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
#include <map>
#include <string>

#include "af/net/mechanism_net.hpp"

namespace af::net {

// Single-file container: a text manifest followed by a raw little-endian
// float32 blob.
//
//   AFCKPT 1
//   config <key> <value>          architecture, one line per field
//   meta <key> <value>            free-form string metadata
//   tensor <name> <offset> <rank> <dim>...
//   end <blob bytes>
//   <blob>
//
// Offsets are in bytes from the start of the blob. Round trips are bit-exact.
struct Checkpoint {
  NetConfig config;
  MechanismParams params;
  std::map<std::string, std::string> meta;
};

void save_checkpoint(const std::filesystem::path& path, const MechanismNet& net,
                     const std::map<std::string, std::string>& meta = {});
Checkpoint load_checkpoint(const std::filesystem::path& path);
MechanismNet load_mechanism(const std::filesystem::path& path);

}  // namespace af::net
