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

#include "af/cli/summarize.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <string>
#include <tuple>

#include <nlohmann/json.hpp>

#include "af/errors.hpp"
#include "af/eval/report.hpp"

namespace af::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

// A number or an array of numbers, ';'-joined.
std::string joined(const json& v) {
  if (!v.is_array()) return num(v.get<double>());
  std::string out;
  for (const auto& x : v) out += (out.empty() ? "" : ";") + num(x.get<double>());
  return out;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

struct Row {
  std::string source;
  eval::RegretReport report;
};

}  // namespace

std::vector<fs::path> summarize(const fs::path& root) {
  if (!fs::is_directory(root)) throw ValidationError("summarize: " + root.string() + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::vector<Row> reports;
  std::vector<Row> oos;
  std::string training = "source,epoch,revenue,mean_regret,lambda,rho,wall_ms\n";
  for (const auto& p : files) {
    const std::string name = p.filename().string();
    const std::string source = fs::relative(p.parent_path(), root).generic_string();
    if (name == "report.json" || name == "baseline.json") {
      reports.push_back({source, eval::report_from_json(read_json(p))});
    } else if (name == "oos.csv") {
      std::ifstream in(p);
      std::string line;
      std::getline(in, line);
      while (std::getline(in, line)) {
        if (!line.empty()) oos.push_back({source, eval::parse_csv_row(line)});
      }
    } else if (name == "history.jsonl") {
      std::ifstream in(p);
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j;
        try {
          j = json::parse(line);
        } catch (const json::exception& e) {
          throw ValidationError(p.string() + ": " + e.what());
        }
        training += csv_field(source) + "," + std::to_string(j.at("epoch").get<int>()) + "," +
                    num(j.at("revenue").get<double>()) + "," + num(j.at("mean_regret").get<double>()) + "," +
                    joined(j.at("lambda")) + "," + num(j.at("rho").get<double>()) + "," +
                    num(j.at("wall_ms").get<double>()) + "\n";
      }
    }
  }

  std::string summary = "source,setting,mechanism,n,m,revenue,mean_regret,seed\n";
  using Key = std::tuple<std::string, std::string, int, int>;
  std::map<Key, std::vector<const eval::RegretReport*>> groups;
  for (const auto& r : reports) {
    const auto& x = r.report;
    summary += csv_field(r.source) + "," + x.setting + "," + x.mechanism + "," + std::to_string(x.n) + "," +
               std::to_string(x.m) + "," + num(x.revenue) + "," + num(x.mean_regret) + "," + std::to_string(x.seed) +
               "\n";
    groups[{x.setting, x.mechanism, x.n, x.m}].push_back(&x);
  }

  // Sample standard deviation (divisor k - 1); 0 for a single seed.
  auto stats = [](const std::vector<double>& xs) {
    double mean = 0.0;
    for (double v : xs) mean += v;
    mean /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (double v : xs) ss += (v - mean) * (v - mean);
    const double sd = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
    return std::pair{mean, sd};
  };
  std::string table = "setting,mechanism,n,m,seeds,revenue_mean,revenue_sd,regret_mean,regret_sd\n";
  for (const auto& [key, members] : groups) {
    std::vector<double> rev;
    std::vector<double> rgt;
    for (const auto* x : members) {
      rev.push_back(x->revenue);
      rgt.push_back(x->mean_regret);
    }
    const auto [rm, rs] = stats(rev);
    const auto [gm, gs] = stats(rgt);
    table += std::get<0>(key) + "," + std::get<1>(key) + "," + std::to_string(std::get<2>(key)) + "," +
             std::to_string(std::get<3>(key)) + "," + std::to_string(members.size()) + "," + num(rm) + "," + num(rs) +
             "," + num(gm) + "," + num(gs) + "\n";
  }

  std::string plot = "source,setting,mechanism,n,m,revenue,mean_regret\n";
  for (const auto& r : oos) {
    const auto& x = r.report;
    plot += csv_field(r.source) + "," + x.setting + "," + x.mechanism + "," + std::to_string(x.n) + "," +
            std::to_string(x.m) + "," + num(x.revenue) + "," + num(x.mean_regret) + "\n";
  }

  std::vector<fs::path> written{root / "summary.csv", root / "summary_stats.csv", root / "plot_oos.csv",
                                root / "plot_training.csv"};
  write_file(written[0], summary);
  write_file(written[1], table);
  write_file(written[2], plot);
  write_file(written[3], training);
  return written;
}

}  // namespace af::cli
