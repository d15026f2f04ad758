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

#include "af/cli/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>

#include "af/env/random.hpp"
#include "af/errors.hpp"

namespace af::cli {

namespace {

using json = nlohmann::json;

// Walks one JSON object, handing each known key to its reader and rejecting
// anything else.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ValidationError(where("") + ": expected an object");
  }

  template <typename T>
  void read(const char* key, T& out) {
    seen_.push_back(key);
    if (!j_.contains(key)) return;
    const json& v = j_.at(key);
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ValidationError(where(key) + ": expected a boolean");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw ValidationError(where(key) + ": expected an integer");
        if constexpr (std::is_unsigned_v<T>) {
          if (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0) {
            throw ValidationError(where(key) + ": must be nonnegative");
          }
        } else if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<T>::max())) {
          throw ValidationError(where(key) + ": out of range");
        }
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw ValidationError(where(key) + ": expected a number");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw ValidationError(where(key) + ": expected a string");
      }
      out = v.get<T>();
    } catch (const json::exception& e) {
      throw ValidationError(where(key) + ": " + e.what());
    }
  }

  void section(const char* key, const std::function<void(Section&)>& fn) {
    seen_.push_back(key);
    if (!j_.contains(key)) return;
    Section s(j_.at(key), where(key));
    fn(s);
    s.finish();
  }

  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (std::find(seen_.begin(), seen_.end(), k) == seen_.end()) throw ValidationError(where(k) + ": unknown key");
    }
  }

  std::string where(const std::string& key) const {
    if (path_.empty()) return key.empty() ? "config" : key;
    return key.empty() ? path_ : path_ + "." + key;
  }

 private:
  const json& j_;
  std::string path_;
  std::vector<std::string> seen_;
};

void require(bool ok, const std::string& field, const std::string& why) {
  if (!ok) throw ValidationError(field + ": " + why);
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  ExperimentConfig c;
  Section root(j, "");
  std::string setting = std::string(1, c.setting);
  root.read("setting", setting);
  require(setting.size() == 1, "setting", "expected a single letter A-I");
  c.setting = setting[0];
  env::setting_by_id(c.setting);
  root.read("seed", c.seed);
  root.read("runs", c.runs);
  require(c.runs >= 1, "runs", "must be at least 1");
  root.read("label", c.label);
  require(!c.label.empty(), "label", "must not be empty");
  root.read("output_dir", c.output_dir);
  root.section("data", [&](Section& s) {
    s.read("train_size", c.data.train_size);
    s.read("test_size", c.data.test_size);
  });
  require(c.data.train_size >= 1, "data.train_size", "must be at least 1");
  require(c.data.test_size >= 1, "data.test_size", "must be at least 1");

  int d_h = -1;
  root.section("model", [&](Section& s) {
    s.read("layers", c.model.layers);
    s.read("d", c.model.model_dim);
    s.read("d_h", d_h);
    s.read("heads", c.model.heads);
    s.read("embed_dim", c.model.embed_dim);
    s.read("conv_hidden", c.model.conv_hidden);
    s.read("mlp_hidden", c.model.mlp_hidden);
  });
  require(d_h < 0 || d_h == c.model.model_dim, "model.d_h", "must equal model.d");
  const net::NetConfig context = net::NetConfig::for_setting(c.spec());
  c.model.discrete = context.discrete;
  c.model.bidder_vocab = context.bidder_vocab;
  c.model.item_vocab = context.item_vocab;
  c.model.bidder_dim = context.bidder_dim;
  c.model.item_dim = context.item_dim;
  c.model.validate();

  root.section("train", [&](Section& s) {
    s.read("batch_size", c.train.batch_size);
    s.read("epochs", c.train.epochs);
    s.read("misreport_steps", c.train.misreport_steps);
    s.read("misreport_lr", c.train.misreport_lr);
    s.read("model_lr", c.train.model_lr);
    s.read("rho_init", c.train.rho_init);
    s.read("rho_increment", c.train.rho_increment);
    s.read("rho_period", c.train.rho_period);
    s.read("lambda_init", c.train.lambda_init);
    s.read("lambda_period", c.train.lambda_period);
    std::string unit = "epochs";
    s.read("lambda_unit", unit);
    require(unit == "epochs" || unit == "iterations", "train.lambda_unit", "must be \"epochs\" or \"iterations\"");
    c.train.lambda_unit = unit == "epochs" ? train::PeriodUnit::kEpochs : train::PeriodUnit::kIterations;
    s.read("checkpoint_every", c.train.checkpoint_every);
  });
  c.train.validate();

  root.section("eval", [&](Section& s) {
    s.read("restarts", c.eval.restarts);
    s.read("steps", c.eval.steps);
    s.read("lr", c.eval.lr);
    s.read("checkpoint", c.eval_checkpoint);
  });
  c.eval.validate();

  root.section("oos", [&](Section& s) {
    s.read("axis", c.oos.axis);
    s.read("values", c.oos.values);
    s.read("test_size", c.oos.test_size);
  });
  require(c.oos.axis == "items" || c.oos.axis == "bidders", "oos.axis", "must be \"items\" or \"bidders\"");
  require(!c.oos.values.empty(), "oos.values", "must not be empty");
  for (int v : c.oos.values) require(v >= 1, "oos.values", "entries must be positive");
  require(c.oos.test_size >= 0, "oos.test_size", "must be nonnegative");

  root.section("checks", [&](Section& s) {
    s.read("grad_cases_per_op", c.checks.grad_cases_per_op);
    s.read("grad_end_to_end", c.checks.grad_end_to_end);
    s.read("equivariance_triples", c.checks.equivariance_triples);
    s.read("feasibility_passes", c.checks.feasibility_passes);
  });
  require(c.checks.grad_cases_per_op >= 0 && c.checks.grad_end_to_end >= 0, "checks", "case counts must be nonnegative");
  require(c.checks.equivariance_triples >= 0 && c.checks.feasibility_passes >= 0, "checks", "counts must be nonnegative");
  root.finish();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  if (j.is_object() && j.contains("config") && j.contains("config_hash")) return parse_config(j.at("config"));
  return parse_config(j);
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["setting"] = std::string(1, c.setting);
  j["seed"] = c.seed;
  j["runs"] = c.runs;
  j["label"] = c.label;
  j["output_dir"] = c.output_dir;
  j["data"] = {{"train_size", c.data.train_size}, {"test_size", c.data.test_size}};
  j["model"] = {{"layers", c.model.layers},         {"d", c.model.model_dim},
                {"d_h", c.model.model_dim},         {"heads", c.model.heads},
                {"embed_dim", c.model.embed_dim},   {"conv_hidden", c.model.conv_hidden},
                {"mlp_hidden", c.model.mlp_hidden}};
  const auto& t = c.train;
  j["train"] = {{"batch_size", t.batch_size},
                {"epochs", t.epochs},
                {"misreport_steps", t.misreport_steps},
                {"misreport_lr", t.misreport_lr},
                {"model_lr", t.model_lr},
                {"rho_init", t.rho_init},
                {"rho_increment", t.rho_increment},
                {"rho_period", t.rho_period},
                {"lambda_init", t.lambda_init},
                {"lambda_period", t.lambda_period},
                {"lambda_unit", t.lambda_unit == train::PeriodUnit::kEpochs ? "epochs" : "iterations"},
                {"checkpoint_every", t.checkpoint_every}};
  j["eval"] = {{"restarts", c.eval.restarts}, {"steps", c.eval.steps}, {"lr", c.eval.lr}, {"checkpoint", c.eval_checkpoint}};
  j["oos"] = {{"axis", c.oos.axis}, {"values", c.oos.values}, {"test_size", c.oos.test_size}};
  j["checks"] = {{"grad_cases_per_op", c.checks.grad_cases_per_op},
                 {"grad_end_to_end", c.checks.grad_end_to_end},
                 {"equivariance_triples", c.checks.equivariance_triples},
                 {"feasibility_passes", c.checks.feasibility_passes}};
  return j;
}

std::string config_hash(const ExperimentConfig& c) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash_label(to_json(c).dump())));
  return buf;
}

SeedSet derive_seeds(std::uint64_t master) {
  return {master,
          derive_seed(master, "data/train"),
          derive_seed(master, "data/test"),
          derive_seed(master, "init"),
          derive_seed(master, "train"),
          derive_seed(master, "eval")};
}

json to_json(const SeedSet& s) {
  return {{"master", s.master}, {"train_data", s.train_data}, {"test_data", s.test_data},
          {"init", s.init},     {"train", s.train},           {"eval", s.eval}};
}

}  // namespace af::cli
