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

#include "af/eval/report.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "af/errors.hpp"

namespace af::eval {

nlohmann::json to_json(const RegretReport& r) {
  return {{"setting", r.setting},   {"mechanism", r.mechanism},
          {"n", r.n},               {"m", r.m},
          {"samples", r.samples},   {"restarts", r.restarts},
          {"steps", r.steps},       {"revenue", r.revenue},
          {"mean_regret", r.mean_regret}, {"per_bidder_regret", r.per_bidder_regret},
          {"seed", r.seed}};
}

RegretReport report_from_json(const nlohmann::json& j) {
  RegretReport r;
  try {
    r.setting = j.at("setting").get<std::string>();
    r.mechanism = j.at("mechanism").get<std::string>();
    r.n = j.at("n").get<int>();
    r.m = j.at("m").get<int>();
    r.samples = j.at("samples").get<int>();
    r.restarts = j.at("restarts").get<int>();
    r.steps = j.at("steps").get<int>();
    r.revenue = j.at("revenue").get<double>();
    r.mean_regret = j.at("mean_regret").get<double>();
    r.per_bidder_regret = j.at("per_bidder_regret").get<std::vector<double>>();
    r.seed = j.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed report: ") + e.what());
  }
  return r;
}

namespace {

// Shortest text that parses back to the same double.
std::string exact(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string csv_header() {
  return "setting,mechanism,n,m,samples,restarts,steps,revenue,mean_regret,per_bidder_regret,seed";
}

std::string csv_row(const RegretReport& r) {
  std::ostringstream os;
  os << r.setting << ',' << r.mechanism << ',' << r.n << ',' << r.m << ',' << r.samples << ',' << r.restarts << ','
     << r.steps << ',' << exact(r.revenue) << ',' << exact(r.mean_regret) << ',';
  for (std::size_t i = 0; i < r.per_bidder_regret.size(); ++i) {
    if (i) os << ';';
    os << exact(r.per_bidder_regret[i]);
  }
  os << ',' << r.seed;
  return os.str();
}

RegretReport parse_csv_row(const std::string& line) {
  std::vector<std::string> f;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) f.push_back(cell);
  if (f.size() != 11) throw ValidationError("report row has " + std::to_string(f.size()) + " fields, expected 11");
  RegretReport r;
  try {
    r.setting = f[0];
    r.mechanism = f[1];
    r.n = std::stoi(f[2]);
    r.m = std::stoi(f[3]);
    r.samples = std::stoi(f[4]);
    r.restarts = std::stoi(f[5]);
    r.steps = std::stoi(f[6]);
    r.revenue = std::stod(f[7]);
    r.mean_regret = std::stod(f[8]);
    std::stringstream ps(f[9]);
    while (std::getline(ps, cell, ';')) {
      if (!cell.empty()) r.per_bidder_regret.push_back(std::stod(cell));
    }
    r.seed = std::stoull(f[10]);
  } catch (const std::logic_error&) {
    throw ValidationError("malformed report row: " + line);
  }
  return r;
}

void write_report(const RegretReport& r, const std::filesystem::path& json_path, const std::filesystem::path& csv_path) {
  std::ofstream js(json_path);
  if (!js) throw ValidationError("cannot write " + json_path.string());
  js << to_json(r).dump(2) << '\n';
  std::ofstream cs(csv_path);
  if (!cs) throw ValidationError("cannot write " + csv_path.string());
  cs << csv_header() << '\n' << csv_row(r) << '\n';
}

}  // namespace af::eval
