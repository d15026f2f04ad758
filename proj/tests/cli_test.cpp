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

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "af/cli/config.hpp"
#include "af/errors.hpp"
#include "af/eval/report.hpp"

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("af_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_config(const std::string& name, const json& j) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << j.dump(2);
    return p;
  }

  // Runs the tool; stderr lands in last_log_.
  int run(const std::string& command, const fs::path& config, const fs::path& out, const std::string& extra = "") {
    const fs::path log = dir_ / "log.txt";
    const std::string cmd = std::string(AF_CLI_PATH) + " " + command + " --config " + config.string() + " --out " +
                            out.string() + " " + extra + " 2> " + log.string();
    const int status = std::system(cmd.c_str());
    std::ifstream in(log);
    last_log_.assign(std::istreambuf_iterator<char>(in), {});
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
  }

  static json tiny(char setting) {
    return {{"setting", std::string(1, setting)},
            {"seed", 3},
            {"data", {{"train_size", 200}, {"test_size", 20}}},
            {"train", {{"epochs", 1}, {"batch_size", 100}, {"misreport_steps", 1}}},
            {"eval", {{"restarts", 1}, {"steps", 2}}},
            {"oos", {{"axis", "items"}, {"values", {3, 4, 5, 6, 7}}}}};
  }

  fs::path dir_;
  std::string last_log_;
};

TEST_F(Cli, UnknownKeyIsValidationErrorNamingThePath) {
  json j = tiny('A');
  j["train"]["epoch"] = 3;
  EXPECT_EQ(run("gen-data", write_config("c.json", j), dir_ / "o"), 1);
  EXPECT_NE(last_log_.find("train.epoch"), std::string::npos) << last_log_;
}

TEST_F(Cli, BadValuesAndFilesAreValidationErrors) {
  json j = tiny('A');
  j["train"]["batch_size"] = 0;
  EXPECT_EQ(run("gen-data", write_config("c.json", j), dir_ / "o"), 1);
  EXPECT_NE(last_log_.find("train.batch_size"), std::string::npos) << last_log_;
  j = tiny('Q');
  EXPECT_EQ(run("gen-data", write_config("c.json", j), dir_ / "o"), 1);
  std::ofstream(dir_ / "broken.json") << "{ not json";
  EXPECT_EQ(run("gen-data", dir_ / "broken.json", dir_ / "o"), 1);
  EXPECT_EQ(run("gen-data", dir_ / "missing.json", dir_ / "o"), 1);
  EXPECT_EQ(run("eval", write_config("ok.json", tiny('A')), dir_ / "empty"), 1);
  EXPECT_NE(last_log_.find("checkpoint"), std::string::npos) << last_log_;
}

TEST_F(Cli, GenDataIsDeterministic) {
  const fs::path cfg = write_config("c.json", tiny('G'));
  ASSERT_EQ(run("gen-data", cfg, dir_ / "a"), 0) << last_log_;
  ASSERT_EQ(run("gen-data", cfg, dir_ / "b"), 0) << last_log_;
  ASSERT_EQ(run("gen-data", cfg, dir_ / "c", "--seed 4"), 0) << last_log_;
  for (const char* f : {"train.afds", "test.afds", "train.csv", "test.csv"}) {
    EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
    EXPECT_NE(slurp(dir_ / "a" / f), slurp(dir_ / "c" / f)) << f;
  }
  const json m = json::parse(slurp(dir_ / "a" / "manifest.json"));
  EXPECT_EQ(m["seeds"]["master"], 3);
  EXPECT_EQ(m["config"]["setting"], "G");
  EXPECT_EQ(m["config_hash"].get<std::string>().size(), 16u);
  EXPECT_EQ(m["commands"]["gen-data"]["artifacts"].size(), 4u);
  EXPECT_EQ(json::parse(slurp(dir_ / "c" / "manifest.json"))["seeds"]["master"], 4);

  // A manifest reproduces its run.
  ASSERT_EQ(run("gen-data", dir_ / "a" / "manifest.json", dir_ / "d"), 0) << last_log_;
  EXPECT_EQ(slurp(dir_ / "a" / "test.afds"), slurp(dir_ / "d" / "test.afds"));
  EXPECT_EQ(json::parse(slurp(dir_ / "d" / "manifest.json"))["config_hash"], m["config_hash"]);
}

TEST_F(Cli, TrainEvalBaselineSweepPipeline) {
  const fs::path cfg = write_config("c.json", tiny('D'));
  const fs::path out = dir_ / "run";
  ASSERT_EQ(run("train", cfg, out), 0) << last_log_;
  EXPECT_TRUE(fs::exists(out / "checkpoint.afck"));
  std::istringstream history(slurp(out / "history.jsonl"));
  int lines = 0;
  for (std::string line; std::getline(history, line);) {
    const json h = json::parse(line);
    for (const char* key : {"epoch", "revenue", "mean_regret", "per_bidder_regret", "lambda", "rho", "wall_ms"}) {
      EXPECT_TRUE(h.contains(key)) << key;
    }
    ++lines;
  }
  EXPECT_EQ(lines, 1);

  ASSERT_EQ(run("eval", cfg, out), 0) << last_log_;
  const auto report = af::eval::report_from_json(json::parse(slurp(out / "report.json")));
  EXPECT_EQ(report.mechanism, "citransnet");
  std::istringstream csv(slurp(out / "report.csv"));
  std::string header, row;
  std::getline(csv, header);
  std::getline(csv, row);
  EXPECT_EQ(header, af::eval::csv_header());
  EXPECT_EQ(af::eval::parse_csv_row(row).revenue, report.revenue);

  ASSERT_EQ(run("baseline", cfg, out), 0) << last_log_;
  EXPECT_NE(slurp(out / "baseline.csv").find(",item_wise_myerson,"), std::string::npos);

  ASSERT_EQ(run("sweep-oos", cfg, out), 0) << last_log_;
  std::istringstream oos(slurp(out / "oos.csv"));
  std::getline(oos, header);
  int net_rows = 0;
  for (std::string line; std::getline(oos, line);) {
    const auto r = af::eval::parse_csv_row(line);
    if (r.mechanism != "citransnet") continue;
    EXPECT_EQ(r.m, 3 + net_rows);
    EXPECT_EQ(r.n, 2);
    if (r.m == 5) EXPECT_EQ(r.revenue, report.revenue);
    ++net_rows;
  }
  EXPECT_EQ(net_rows, 5);

  const json m = json::parse(slurp(out / "manifest.json"));
  for (const char* c : {"train", "eval", "baseline", "sweep-oos"}) EXPECT_TRUE(m["commands"].contains(c)) << c;
}

TEST_F(Cli, NumericBlowUpExitsWithTwo) {
  json j = tiny('A');
  j["train"]["model_lr"] = 1e30;
  j["train"]["epochs"] = 2;
  EXPECT_EQ(run("train", write_config("c.json", j), dir_ / "o"), 2) << last_log_;
  EXPECT_NE(last_log_.find("non-finite loss at epoch"), std::string::npos) << last_log_;
}

TEST_F(Cli, ChecksRunFromTheCommandLine) {
  json j = tiny('A');
  j["checks"] = {{"grad_cases_per_op", 1}, {"grad_end_to_end", 2}, {"equivariance_triples", 3}, {"feasibility_passes", 500}};
  const fs::path cfg = write_config("c.json", j);
  EXPECT_EQ(run("grad-check", cfg, dir_ / "o"), 0) << last_log_;
  EXPECT_TRUE(fs::exists(dir_ / "o" / "grad_check.csv"));
  EXPECT_EQ(run("prop-check", cfg, dir_ / "o"), 0) << last_log_;
  const json p = json::parse(slurp(dir_ / "o" / "prop_check.json"));
  EXPECT_TRUE(p["equivariance"]["passed"].get<bool>());
  EXPECT_TRUE(p["feasibility"]["passed"].get<bool>());
}

TEST_F(Cli, SeedSweepAndSummaryStatistics) {
  json j = tiny('A');
  j["runs"] = 3;
  const fs::path cfg = write_config("c.json", j);
  ASSERT_EQ(run("baseline", cfg, dir_ / "sweep"), 0) << last_log_;
  std::vector<double> revenue;
  for (int s = 3; s < 6; ++s) {
    const fs::path p = dir_ / "sweep" / ("seed_" + std::to_string(s)) / "baseline.json";
    ASSERT_TRUE(fs::exists(p)) << p;
    revenue.push_back(af::eval::report_from_json(json::parse(slurp(p))).revenue);
  }
  ASSERT_EQ(run("summarize", cfg, dir_ / "sweep"), 0) << last_log_;
  std::istringstream stats(slurp(dir_ / "sweep" / "summary_stats.csv"));
  std::string header, row;
  std::getline(stats, header);
  std::getline(stats, row);
  EXPECT_EQ(header, "setting,mechanism,n,m,seeds,revenue_mean,revenue_sd,regret_mean,regret_sd");
  std::vector<std::string> fields;
  std::istringstream rs(row);
  for (std::string f; std::getline(rs, f, ',');) fields.push_back(f);
  ASSERT_EQ(fields.size(), 9u);
  EXPECT_EQ(fields[1], "item_wise_myerson");
  EXPECT_EQ(fields[4], "3");
  const double mean = (revenue[0] + revenue[1] + revenue[2]) / 3;
  double ss = 0.0;
  for (double r : revenue) ss += (r - mean) * (r - mean);
  EXPECT_NEAR(std::stod(fields[5]), mean, 1e-8);
  EXPECT_NEAR(std::stod(fields[6]), std::sqrt(ss / 2), 1e-8);

  std::istringstream summary(slurp(dir_ / "sweep" / "summary.csv"));
  int rows = -1;
  for (std::string line; std::getline(summary, line);) ++rows;
  EXPECT_EQ(rows, 3);
}

TEST(Config, DefaultsAndHash) {
  const auto c = af::cli::parse_config(json::object());
  EXPECT_EQ(c.setting, 'A');
  EXPECT_EQ(c.data.train_size, 50000);
  EXPECT_EQ(c.data.test_size, 5000);
  EXPECT_EQ(c.train.batch_size, 500);
  EXPECT_EQ(c.eval.restarts, 100);
  EXPECT_EQ(c.eval.steps, 200);
  EXPECT_EQ(c.model.model_dim, 64);
  EXPECT_EQ(c.model.heads, 4);
  EXPECT_EQ(c.model.embed_dim, 16);
  EXPECT_EQ(af::cli::config_hash(c), af::cli::config_hash(af::cli::parse_config(af::cli::to_json(c))));
  auto d = c;
  d.train.epochs = 7;
  EXPECT_NE(af::cli::config_hash(c), af::cli::config_hash(d));
  EXPECT_THROW(af::cli::parse_config(json{{"model", {{"d", 64}, {"d_h", 32}}}}), af::ValidationError);
  EXPECT_THROW(af::cli::parse_config(json{{"oos", {{"axis", "diagonal"}}}}), af::ValidationError);
  EXPECT_THROW(af::cli::parse_config(json{{"seed", -1}}), af::ValidationError);
}

}  // namespace
