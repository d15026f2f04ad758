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

// Acceptance run: prints one PASS/FAIL line per criterion and exits nonzero
// when any criterion fails.
//
//   acceptance --work <dir> [--full] [--only 1,3,...]
//
// Regret is measured with 10 restarts x 100 Adam steps per (sample, bidder)
// unless --full selects 100 x 200; see README for timings.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "af/checks/gradient_check.hpp"
#include "af/checks/property_check.hpp"
#include "af/env/dataset.hpp"
#include "af/env/random.hpp"
#include "af/eval/evaluator.hpp"
#include "af/myerson/item_wise_myerson.hpp"
#include "af/net/checkpoint.hpp"
#include "af/net/mechanism.hpp"
#include "af/train/trainer.hpp"

namespace {

namespace fs = std::filesystem;
using namespace af;
using Clock = std::chrono::steady_clock;

struct Options {
  fs::path work = "acceptance_work";
  bool full = false;
  std::set<int> only;
};

struct Outcome {
  bool pass = false;
  std::string detail;
};

constexpr std::uint64_t kSeed = 1;

eval::EvalConfig eval_protocol(const Options& o, std::uint64_t seed) {
  eval::EvalConfig c;
  c.restarts = o.full ? 100 : 10;
  c.steps = o.full ? 200 : 100;
  c.seed = derive_seed(seed, "eval");
  return c;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

void log(const std::string& s) {
  std::fprintf(stderr, "  %s\n", s.c_str());
  std::fflush(stderr);
}

train::TrainResult train_logged(const train::TrainConfig& cfg, const env::Dataset& data, net::MechanismNet& net,
                                const fs::path& history_path) {
  std::ofstream history(history_path, std::ios::trunc);
  train::TrainHooks hooks;
  hooks.on_epoch = [&](const train::EpochRecord& r) {
    history << train::history_json(r) << "\n" << std::flush;
    log(fmt("epoch %.0f revenue %.5f regret %.6f (%.0f ms)", r.epoch, r.revenue, r.mean_regret, r.wall_ms));
  };
  return train::train(cfg, data, net, hooks);
}

// 1. Setting A: learned revenue close to item-wise Myerson with low regret.
Outcome single_item_optimality(const Options& o) {
  const env::SettingSpec spec = env::setting_by_id('A');
  const env::Dataset train_set = env::generate_dataset(spec, 20000, derive_seed(kSeed, "data/train"));
  const env::Dataset test = env::generate_dataset(spec, 5000, derive_seed(kSeed, "data/test"));
  net::MechanismNet net(net::NetConfig::for_setting(spec), derive_seed(kSeed, "init"));
  train::TrainConfig cfg;
  cfg.epochs = 30;
  cfg.seed = derive_seed(kSeed, "train");
  const train::TrainResult tr = train_logged(cfg, train_set, net, o.work / "setting_a_history.jsonl");
  net::save_checkpoint(o.work / "setting_a.afck", net, {{"setting", "A"}});

  const auto learned = eval::evaluate(net::NetMechanism(net), test, eval_protocol(o, kSeed));
  const double myerson = myerson::baseline_revenue(myerson::ItemWiseMyerson(spec), test);
  eval::write_report(learned, o.work / "setting_a_report.json", o.work / "setting_a_report.csv");
  const double first = tr.history.front().mean_regret, last = tr.history.back().mean_regret;
  log(fmt("training regret epoch 1 %.6f, final %.6f (ratio %.1f)", first, last, last > 0 ? first / last : INFINITY));
  const bool pass = learned.revenue >= 0.97 * myerson && learned.mean_regret < 0.005;
  return {pass, fmt("revenue %.5f vs 0.97 x Myerson %.5f = %.5f; regret %.6f (< 0.005)", learned.revenue, myerson,
                    0.97 * myerson, learned.mean_regret)};
}

// 2. Myerson on uniform laws against closed forms.
Outcome myerson_oracle(const Options&) {
  const myerson::ItemWiseMyerson mech(
      [](const ContextBatch&, int, int, int) { return env::ValueLaw::uniform(0.0, 1.0); });
  auto revenue = [&](int n, std::uint64_t seed) {
    const int count = 100000;
    CounterRng rng(seed);
    AuctionBatch b;
    b.count = count;
    b.n = n;
    b.m = 1;
    b.bids.resize(static_cast<std::size_t>(count * n));
    for (auto& v : b.bids) v = static_cast<float>(rng.next_uniform());
    b.contexts.count = count;
    b.contexts.n = n;
    b.contexts.m = 1;
    b.contexts.bidder.assign(static_cast<std::size_t>(count * n), 1.0f);
    b.contexts.item.assign(static_cast<std::size_t>(count), 1.0f);
    const AuctionOutcome out = mech.run(b);
    double total = 0.0;
    for (float p : out.payments) total += p;
    return total / count;
  };
  const double two = revenue(2, 11);
  const double one = revenue(1, 12);
  const double reserve = mech.table(env::ValueLaw::uniform(0.0, 1.0))->threshold(0.0);
  const bool pass = std::abs(two - 5.0 / 12.0) <= 0.01 && std::abs(reserve - 0.5) <= 1e-3 && std::abs(one - 0.25) <= 0.005;
  return {pass, fmt("two bidders %.5f (5/12 +- 0.01); reserve %.6f (0.5 +- 1e-3); one bidder %.5f (0.25 +- 0.005)", two,
                    reserve, one)};
}

// 3. The evaluator finds no profitable misreport against item-wise Myerson.
Outcome baseline_dsic(const Options& o) {
  const env::SettingSpec spec = env::setting_by_id('A');
  const env::Dataset test = env::generate_dataset(spec, 5000, derive_seed(kSeed, "data/test"));
  eval::EvalConfig c = eval_protocol(o, kSeed);
  c.restarts = 100;
  const auto r = eval::evaluate(myerson::ItemWiseMyerson(spec), test, c);
  return {r.mean_regret < 1e-3, fmt("mean regret %.3g over %.0f restarts (< 1e-3)", r.mean_regret, r.restarts)};
}

// 4. Permutation equivariance.
Outcome equivariance(const Options&) {
  const auto r = checks::check_equivariance(kSeed, 100);
  return {r.triples == 100 && r.max_deviation < 1e-4,
          fmt("%.0f triples, max deviation %.3g (< 1e-4)", r.triples, r.max_deviation)};
}

// 5. Feasibility and individual rationality.
Outcome feasibility(const Options&) {
  const auto r = checks::check_feasibility(kSeed, 100000);
  const bool pass = r.passes >= 100000 && r.allocation_violations == 0 && r.payment_violations == 0;
  return {pass, fmt("%.0f forward passes, %.0f allocation and %.0f payment violations", static_cast<double>(r.passes),
                    static_cast<double>(r.allocation_violations), static_cast<double>(r.payment_violations))};
}

// 6. Finite-difference gradient suite.
Outcome gradient_integrity(const Options&) {
  checks::GradCheckConfig c;
  c.seed = kSeed;
  const auto s = checks::gradient_check(c);
  const bool pass = s.cases.size() >= 200 && s.failures() == 0;
  return {pass, fmt("%.0f cases, %.0f failures, worst relative error %.3g (< 1e-3)", static_cast<double>(s.cases.size()),
                    s.failures(), s.worst())};
}

// 7. Setting D trained at (2, 5), evaluated at m' = 3..7.
Outcome out_of_setting(const Options& o) {
  const env::SettingSpec spec = env::setting_by_id('D');
  const std::uint64_t seed = kSeed;
  const env::Dataset train_set = env::generate_dataset(spec, 10000, derive_seed(seed, "data/train"));
  net::MechanismNet net(net::NetConfig::for_setting(spec), derive_seed(seed, "init"));
  train::TrainConfig cfg;
  cfg.epochs = 20;
  cfg.seed = derive_seed(seed, "train");
  train_logged(cfg, train_set, net, o.work / "setting_d_history.jsonl");
  net::save_checkpoint(o.work / "setting_d.afck", net, {{"setting", "D"}});
  const std::int64_t params_before = net.params().parameter_count();

  const int test_count = 1000;
  const std::uint64_t test_seed = derive_seed(seed, "data/test");
  const net::NetMechanism mech(net);
  const eval::EvalConfig protocol = eval_protocol(o, seed);
  const auto in_setting = eval::evaluate(mech, env::generate_dataset(spec, test_count, test_seed), protocol);
  bool pass = true;
  double worst = 0.0;
  std::string rows;
  std::ofstream csv(o.work / "setting_d_oos.csv");
  csv << eval::csv_header() << "\n";
  for (int m = 3; m <= 7; ++m) {
    const auto r = eval::out_of_setting_eval(mech, spec, 2, m, test_count, test_seed, protocol);
    csv << eval::csv_row(r) << "\n";
    log(fmt("m'=%.0f revenue %.5f regret %.6f", m, r.revenue, r.mean_regret));
    worst = std::max(worst, r.mean_regret);
    pass = pass && r.mean_regret < 0.01;
    if (m == 5) {
      const bool same = std::memcmp(&r.revenue, &in_setting.revenue, sizeof(double)) == 0;
      pass = pass && same;
      rows += same ? "m'=5 revenue bit-exact" : "m'=5 revenue differs from in-setting";
    }
  }
  pass = pass && net.params().parameter_count() == params_before;
  return {pass, fmt("worst regret over m'=3..7 %.6f (< 0.01); ", worst) + rows};
}

// 8. Parameter count does not depend on the auction size.
Outcome scale_freeness(const Options&) {
  const env::SettingSpec small = env::setting_by_id('D').rescaled(2, 5);
  const env::SettingSpec large = env::setting_by_id('D').rescaled(7, 10);
  const net::MechanismNet a(net::NetConfig::for_setting(small), 1);
  const net::MechanismNet b(net::NetConfig::for_setting(large), 2);
  const auto ca = a.params().parameter_count();
  const auto cb = b.params().parameter_count();
  // Both instantiations must actually run at their sizes.
  const auto oa = a.run(env::generate_dataset(small, 2, 1).truthful());
  const auto ob = b.run(env::generate_dataset(large, 2, 1).truthful());
  const bool ran = oa.allocation.size() == 2u * 2 * 5 && ob.allocation.size() == 2u * 7 * 10;
  return {ca == cb && ran, fmt("(2,5): %.0f parameters, (7,10): %.0f parameters", static_cast<double>(ca),
                               static_cast<double>(cb))};
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  for (int k = 1; k < argc; ++k) {
    const std::string a = argv[k];
    if (a == "--work" && k + 1 < argc) {
      o.work = argv[++k];
    } else if (a == "--full") {
      o.full = true;
    } else if (a == "--only" && k + 1 < argc) {
      std::string list = argv[++k];
      for (std::size_t p = 0; p < list.size();) {
        const std::size_t q = list.find(',', p);
        o.only.insert(std::stoi(list.substr(p, q - p)));
        p = q == std::string::npos ? list.size() : q + 1;
      }
    } else {
      std::fprintf(stderr, "usage: acceptance [--work DIR] [--full] [--only 1,2,...]\n");
      return 1;
    }
  }
  fs::create_directories(o.work);

  const std::vector<std::pair<const char*, std::function<Outcome(const Options&)>>> criteria{
      {"single-item optimality (Setting A)", single_item_optimality},
      {"Myerson oracle", myerson_oracle},
      {"baseline DSIC", baseline_dsic},
      {"permutation equivariance", equivariance},
      {"feasibility and IR", feasibility},
      {"gradient integrity", gradient_integrity},
      {"out-of-setting generalization (Setting D)", out_of_setting},
      {"scale-free parameter count", scale_freeness},
  };
  std::printf("regret protocol: %d restarts x %d steps\n", o.full ? 100 : 10, o.full ? 200 : 100);
  nlohmann::json summary = nlohmann::json::array();
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!o.only.empty() && !o.only.count(id)) continue;
    const auto start = Clock::now();
    Outcome out;
    try {
      out = criteria[k].second(o);
    } catch (const std::exception& e) {
      out = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    std::printf("criterion %d: %s  %s: %s [%.0fs]\n", id, out.pass ? "PASS" : "FAIL", criteria[k].first,
                out.detail.c_str(), secs);
    std::fflush(stdout);
    summary.push_back({{"criterion", id}, {"name", criteria[k].first}, {"pass", out.pass}, {"detail", out.detail}, {"seconds", secs}});
    failures += out.pass ? 0 : 1;
  }
  // Training-time property on the Setting A run from criterion 1.
  if (o.only.empty() || o.only.count(1)) {
    std::vector<double> regret;
    std::ifstream history(o.work / "setting_a_history.jsonl");
    for (std::string line; std::getline(history, line);) {
      if (!line.empty()) regret.push_back(nlohmann::json::parse(line).at("mean_regret").get<double>());
    }
    Outcome out;
    if (regret.size() < 2) {
      out = {false, "no Setting A training history"};
    } else {
      const double ratio = regret.back() > 0 ? regret.front() / regret.back() : INFINITY;
      out = {ratio >= 10.0, fmt("epoch 1 %.6f, final %.6f, ratio %.2f (>= 10)", regret.front(), regret.back(), ratio)};
    }
    std::printf("property: %s  training regret decrease (Setting A): %s\n", out.pass ? "PASS" : "FAIL", out.detail.c_str());
    std::fflush(stdout);
    summary.push_back({{"property", "training regret decrease"}, {"pass", out.pass}, {"detail", out.detail}});
    failures += out.pass ? 0 : 1;
  }
  std::ofstream(o.work / "acceptance.json") << summary.dump(2) << "\n";
  return failures == 0 ? 0 : 1;
}
