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

#include <iostream>

#include "CLI11.hpp"
#include "af/cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"auction-forge: learn and evaluate multi-item auctions"};
  app.require_subcommand(1, 1);
  af::cli::CommandOptions options;
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  for (const auto& name : af::cli::command_names()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "experiment config (JSON) or a previous manifest.json")->required();
    sub->add_option("--out", out, "output directory");
    sub->add_option("--seed", seed, "master seed, overrides the config");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? af::cli::kOk : af::cli::kValidationError;
  }
  auto* sub = app.get_subcommands().front();
  options.command = sub->get_name();
  options.config = config;
  if (sub->count("--out") > 0) options.out = out;
  if (sub->count("--seed") > 0) options.seed = seed;
  return af::cli::run_command(options, std::cerr);
}
