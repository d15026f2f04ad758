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
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace af::cli {

enum ExitCode : int { kOk = 0, kValidationError = 1, kNumericError = 2 };

struct CommandOptions {
  std::string command;
  std::filesystem::path config;
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
};

const std::vector<std::string>& command_names();

// Runs one subcommand and maps failures to exit codes: ValidationError,
// ShapeError and I/O problems give 1, NumericError (a NaN abort, a failed
// numeric check) gives 2. Progress and errors go to `log`.
int run_command(const CommandOptions& options, std::ostream& log);

}  // namespace af::cli
