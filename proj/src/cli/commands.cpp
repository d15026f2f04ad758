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

#include "af/cli/commands.hpp"

#include <chrono>
#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

#include "af/checks/gradient_check.hpp"
#include "af/checks/property_check.hpp"
#include "af/cli/config.hpp"
#include "af/cli/summarize.hpp"
#include "af/errors.hpp"
#include "af/eval/evaluator.hpp"
#include "af/myerson/item_wise_myerson.hpp"
#include "af/net/checkpoint.hpp"
#include "af/net/mechanism.hpp"
#include "af/train/trainer.hpp"

namespace af::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

// One seed's worth of work: resolved config, stream seeds, output directory.
struct Run {
  ExperimentConfig config;
  SeedSet seeds;
  fs::path dir;
  std::ostream& log;
  std::vector<fs::path> artifacts;

  fs::path file(const std::string& name) {
    const fs::path p = dir / name;
    if (std::find(artifacts.begin(), artifacts.end(), p) == artifacts.end()) artifacts.push_back(p);
    return p;
  }
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
  if (!out) throw ValidationError("write failed for " + path.string());
}

// manifest.json accumulates the artifacts of every command run against the
// same resolved config in one directory.
void write_manifest(const Run& run, const std::string& command) {
  const fs::path path = run.dir / "manifest.json";
  const std::string hash = config_hash(run.config);
  json commands = json::object();
  if (fs::exists(path)) {
    try {
      std::ifstream in(path);
      const json old = json::parse(in);
      if (old.value("config_hash", "") == hash && old.contains("commands")) commands = old.at("commands");
    } catch (const json::exception&) {
      // unreadable manifest: start over
    }
  }
  json files = json::array();
  for (const auto& p : run.artifacts) files.push_back(p.generic_string());
  commands[command] = {{"artifacts", files}};
  json manifest = {{"tool", "auction-forge"},
                   {"config_hash", hash},
                   {"config", to_json(run.config)},
                   {"seeds", to_json(run.seeds)},
                   {"commands", commands}};
  write_text(path, manifest.dump(2) + "\n");
}

env::Dataset load_or_generate(Run& run, const std::string& name, int count, std::uint64_t seed) {
  const env::SettingSpec spec = run.config.spec();
  const fs::path path = run.dir / name;
  if (fs::exists(path)) {
    env::Dataset d = env::load_dataset(path);
    if (d.spec.id == spec.id && d.seed == seed && d.count == count) {
      run.file(name);
      return d;
    }
  }
  return env::generate_dataset(spec, count, seed);
}

fs::path checkpoint_path(const Run& run) {
  if (!run.config.eval_checkpoint.empty()) return run.config.eval_checkpoint;
  return run.dir / "checkpoint.afck";
}

net::MechanismNet load_net(Run& run) {
  const fs::path path = checkpoint_path(run);
  if (!fs::exists(path)) throw ValidationError("eval.checkpoint: " + path.string() + " does not exist (run train first)");
  net::MechanismNet net = net::load_mechanism(path);
  const net::NetConfig expected = net::NetConfig::for_setting(run.config.spec());
  if (net.config().discrete != expected.discrete || net.config().bidder_vocab != expected.bidder_vocab ||
      net.config().item_vocab != expected.item_vocab || net.config().bidder_dim != expected.bidder_dim ||
      net.config().item_dim != expected.item_dim) {
    throw ValidationError("eval.checkpoint: " + path.string() + " was trained for different contexts than setting " +
                          std::string(1, run.config.setting));
  }
  return net;
}

eval::EvalConfig eval_config(const Run& run) {
  eval::EvalConfig c = run.config.eval;
  c.seed = run.seeds.eval;
  return c;
}

std::string report_line(const eval::RegretReport& r) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s %s n=%d m=%d revenue=%.6f regret=%.6f", r.setting.c_str(), r.mechanism.c_str(),
                r.n, r.m, r.revenue, r.mean_regret);
  return buf;
}

int gen_data(Run& run) {
  const auto& c = run.config;
  for (auto [name, count, seed] : {std::tuple{"train", c.data.train_size, run.seeds.train_data},
                                   std::tuple{"test", c.data.test_size, run.seeds.test_data}}) {
    const env::Dataset d = env::generate_dataset(c.spec(), count, seed);
    env::save_dataset(d, run.file(std::string(name) + ".afds"));
    env::export_dataset_csv(d, run.file(std::string(name) + ".csv"));
    run.log << "wrote " << count << " " << name << " samples for setting " << c.setting << "\n";
  }
  return kOk;
}

int train_cmd(Run& run) {
  const auto& c = run.config;
  const env::Dataset data = load_or_generate(run, "train.afds", c.data.train_size, run.seeds.train_data);
  net::MechanismNet net(c.model, run.seeds.init);
  train::TrainConfig tc = c.train;
  tc.seed = run.seeds.train;

  const std::map<std::string, std::string> meta{{"setting", std::string(1, c.setting)},
                                                {"seed", std::to_string(run.seeds.master)},
                                                {"config_hash", config_hash(c)}};
  std::ofstream history(run.file("history.jsonl"), std::ios::trunc);
  if (!history) throw ValidationError("cannot write history.jsonl in " + run.dir.string());
  train::TrainHooks hooks;
  hooks.on_epoch = [&](const train::EpochRecord& r) {
    history << train::history_json(r) << "\n";
    history.flush();
    double lambda = 0.0;
    for (double l : r.lambda) lambda += l / static_cast<double>(r.lambda.size());
    char buf[160];
    std::snprintf(buf, sizeof buf, "epoch %d revenue=%.5f regret=%.6f mean_lambda=%.4f rho=%.2f (%.0f ms)\n",
                  r.epoch, r.revenue, r.mean_regret, lambda, r.rho, r.wall_ms);
    run.log << buf << std::flush;
  };
  hooks.on_checkpoint = [&](int epoch, const net::MechanismNet& snapshot) {
    auto m = meta;
    m["epoch"] = std::to_string(epoch);
    net::save_checkpoint(run.file("checkpoint_epoch_" + std::to_string(epoch) + ".afck"), snapshot, m);
  };
  train::train(tc, data, net, hooks);
  auto m = meta;
  m["epoch"] = std::to_string(c.train.epochs);
  net::save_checkpoint(run.file("checkpoint.afck"), net, m);
  run.log << "wrote " << (run.dir / "checkpoint.afck").string() << "\n";
  return kOk;
}

int eval_cmd(Run& run) {
  const auto& c = run.config;
  const net::MechanismNet net = load_net(run);
  const env::Dataset test = load_or_generate(run, "test.afds", c.data.test_size, run.seeds.test_data);
  eval::RegretReport r = eval::evaluate(net::NetMechanism(net), test, eval_config(run));
  r.seed = run.seeds.master;
  eval::write_report(r, run.file("report.json"), run.file("report.csv"));
  run.log << report_line(r) << "\n";
  return kOk;
}

int baseline_cmd(Run& run) {
  const auto& c = run.config;
  const env::Dataset test = load_or_generate(run, "test.afds", c.data.test_size, run.seeds.test_data);
  const myerson::ItemWiseMyerson mech(c.spec());
  eval::RegretReport r = eval::evaluate(mech, test, eval_config(run));
  r.seed = run.seeds.master;
  eval::write_report(r, run.file("baseline.json"), run.file("baseline.csv"));
  run.log << report_line(r) << "\n";
  return kOk;
}

int sweep_oos(Run& run) {
  const auto& c = run.config;
  const net::MechanismNet net = load_net(run);
  const net::NetMechanism mech(net);
  const int count = c.oos.test_size > 0 ? c.oos.test_size : c.data.test_size;
  std::string csv = eval::csv_header() + "\n";
  json rows = json::array();
  for (int v : c.oos.values) {
    const int n = c.oos.axis == "bidders" ? v : c.spec().n;
    const int m = c.oos.axis == "items" ? v : c.spec().m;
    const env::SettingSpec spec = c.spec().rescaled(n, m);
    std::vector<eval::RegretReport> reports;
    reports.push_back(eval::out_of_setting_eval(mech, c.spec(), n, m, count, run.seeds.test_data, eval_config(run)));
    reports.push_back(eval::out_of_setting_eval(myerson::ItemWiseMyerson(spec), c.spec(), n, m, count,
                                                run.seeds.test_data, eval_config(run)));
    for (auto& r : reports) {
      r.seed = run.seeds.master;
      csv += eval::csv_row(r) + "\n";
      rows.push_back(eval::to_json(r));
      run.log << report_line(r) << "\n";
    }
  }
  write_text(run.file("oos.csv"), csv);
  write_text(run.file("oos.json"), rows.dump(2) + "\n");
  return kOk;
}

int grad_check(Run& run) {
  checks::GradCheckConfig gc;
  gc.seed = run.seeds.master;
  gc.cases_per_op = run.config.checks.grad_cases_per_op;
  gc.end_to_end_cases = run.config.checks.grad_end_to_end;
  const checks::CheckSummary s = checks::gradient_check(gc);
  std::string csv = "case,error,passed\n";
  for (const auto& k : s.cases) csv += k.name + "," + std::to_string(k.error) + "," + (k.passed ? "1" : "0") + "\n";
  write_text(run.file("grad_check.csv"), csv);
  run.log << "gradient check: " << s.cases.size() << " cases, " << s.failures() << " failures, worst error "
          << s.worst() << "\n";
  return s.failures() == 0 ? kOk : kNumericError;
}

int prop_check(Run& run) {
  const auto& k = run.config.checks;
  const checks::EquivarianceResult eq = checks::check_equivariance(run.seeds.master, k.equivariance_triples);
  const checks::FeasibilityResult fe = checks::check_feasibility(run.seeds.master, k.feasibility_passes);
  const bool eq_ok = eq.max_deviation <= 1e-5;
  const bool fe_ok = fe.allocation_violations == 0 && fe.payment_violations == 0;
  json out = {{"equivariance", {{"triples", eq.triples}, {"max_deviation", eq.max_deviation}, {"passed", eq_ok}}},
              {"feasibility",
               {{"passes", fe.passes},
                {"allocation_violations", fe.allocation_violations},
                {"payment_violations", fe.payment_violations},
                {"passed", fe_ok}}}};
  run.log << "equivariance: " << eq.triples << " triples, max deviation " << eq.max_deviation << "\n";
  run.log << "feasibility: " << fe.passes << " passes, " << fe.allocation_violations << " allocation and "
          << fe.payment_violations << " payment violations\n";
  bool ok = eq_ok && fe_ok;
  if (fs::exists(checkpoint_path(run))) {
    const net::MechanismNet net = load_net(run);
    const env::Dataset test = load_or_generate(run, "test.afds", run.config.data.test_size, run.seeds.test_data);
    const eval::RegretReport r = eval::evaluate(net::NetMechanism(net), test, eval_config(run));
    const bool rg_ok = r.mean_regret < 0.005;
    out["regret"] = {{"mean_regret", r.mean_regret}, {"threshold", 0.005}, {"passed", rg_ok}};
    run.log << "trained regret: " << r.mean_regret << "\n";
    ok = ok && rg_ok;
  }
  write_text(run.file("prop_check.json"), out.dump(2) + "\n");
  return ok ? kOk : kNumericError;
}

int dispatch(const std::string& command, Run& run) {
  if (command == "gen-data") return gen_data(run);
  if (command == "train") return train_cmd(run);
  if (command == "eval") return eval_cmd(run);
  if (command == "baseline") return baseline_cmd(run);
  if (command == "sweep-oos") return sweep_oos(run);
  if (command == "grad-check") return grad_check(run);
  if (command == "prop-check") return prop_check(run);
  throw ValidationError("unknown command " + command);
}

int execute(const CommandOptions& options, std::ostream& log) {
  const auto& names = command_names();
  if (std::find(names.begin(), names.end(), options.command) == names.end()) {
    throw ValidationError("unknown command " + options.command);
  }
  ExperimentConfig config = load_config(options.config);
  if (options.seed) config.seed = *options.seed;
  fs::path root = options.out ? *options.out
                  : !config.output_dir.empty() ? fs::path(config.output_dir)
                                               : fs::path("runs") / config.label;

  if (options.command == "summarize") {
    for (const auto& p : summarize(root)) log << "wrote " << p.string() << "\n";
    return kOk;
  }

  // runs > 1 repeats the command over consecutive master seeds, one
  // subdirectory each; nothing else in the config changes.
  int status = kOk;
  for (int r = 0; r < config.runs; ++r) {
    ExperimentConfig c = config;
    c.seed = config.seed + static_cast<std::uint64_t>(r);
    const fs::path dir = config.runs == 1 ? root : root / ("seed_" + std::to_string(c.seed));
    fs::create_directories(dir);
    Run run{c, derive_seeds(c.seed), dir, log, {}};
    const int code = dispatch(options.command, run);
    write_manifest(run, options.command);
    status = std::max(status, code);
  }
  return status;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"gen-data", "train",      "eval",       "baseline",
                                              "sweep-oos", "grad-check", "prop-check", "summarize"};
  return names;
}

int run_command(const CommandOptions& options, std::ostream& log) {
  try {
    return execute(options, log);
  } catch (const NumericError& e) {
    log << "numeric error: " << e.what() << "\n";
    return kNumericError;
  } catch (const ValidationError& e) {
    log << "validation error: " << e.what() << "\n";
    return kValidationError;
  } catch (const ShapeError& e) {
    log << "validation error: " << e.what() << "\n";
    return kValidationError;
  } catch (const fs::filesystem_error& e) {
    log << "validation error: " << e.what() << "\n";
    return kValidationError;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kValidationError;
  }
}

}  // namespace af::cli
