// Copyright 2026 The xbench Authors
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

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "xbench/report.hpp"

namespace xbench {
namespace {

Dataset fixture(const std::string& name) { return load_dataset(std::string(XBENCH_DATA_DIR) + "/" + name); }

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

TEST(ResultJson, TopLevelLayout) {
  const Dataset d = fixture("tiny.csv");
  const CrossBenchmarkResult res = cross_benchmark(d);
  const auto doc = result_json(d, res, {});
  EXPECT_EQ(doc["schema"], "xbench/1");
  std::vector<std::string> keys;
  for (const auto& [k, v] : doc.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"schema", "config", "dataset", "classification", "selection",
                                            "targets", "targets_note", "deviations", "status"}));
  EXPECT_EQ(doc["classification"]["extreme_efficient"], (std::vector<std::string>{"A", "B", "C"}));
  EXPECT_EQ(doc["selection"]["reference_sets"].size(), 2u);
  EXPECT_EQ(doc["selection"]["reference_sets"][1]["members"], (std::vector<std::string>{"B", "C"}));
  EXPECT_EQ(doc["targets"].size(), 12u);
  EXPECT_EQ(doc["deviations"].size(), 36u);
  EXPECT_EQ(doc["status"]["complete"], true);
  EXPECT_NEAR(doc["selection"]["objectives"][1].get<double>(), 1.3333333333333335, 1e-6);
  EXPECT_EQ(doc["config"]["complementarity"], "sos1");
}

TEST(ResultJson, RepeatedRunsAreByteIdentical) {
  const Dataset d = fixture("plants.csv");
  SelectionConfig cfg;
  const std::string a = result_json(d, cross_benchmark(d), cfg).dump(2);
  const std::string b = result_json(d, cross_benchmark(d), cfg).dump(2);
  EXPECT_EQ(a, b);
}

TEST(ResultJson, FullPrecisionRoundTrip) {
  const Dataset d = fixture("plants.csv");
  const CrossBenchmarkResult res = cross_benchmark(d);
  const auto back = nlohmann::ordered_json::parse(result_json(d, res, {}).dump());
  for (std::size_t a = 0; a < res.selection->objectives.size(); ++a) {
    EXPECT_EQ(back["selection"]["objectives"][a].get<double>(), res.selection->objectives[a]);
  }
}

TEST(ResultJson, PartialResultIsFlagged) {
  const Dataset d = fixture("plants.csv");
  CrossBenchmarkConfig cfg;
  cfg.selection.complementarity = milp::ComplementarityMode::kBigM;
  cfg.selection.weight_cap = 1.0;
  const auto doc = result_json(d, cross_benchmark(d, cfg), cfg.selection);
  EXPECT_EQ(doc["status"]["complete"], false);
  EXPECT_EQ(doc["status"]["failed_stage"], "selection");
  EXPECT_FALSE(doc.contains("selection"));
  EXPECT_TRUE(doc["targets"].empty());
}

TEST(DeviationCsv, LongFormat) {
  const Dataset d = fixture("tiny.csv");
  const CrossBenchmarkResult res = cross_benchmark(d);
  std::ostringstream os;
  write_deviation_csv(os, d, *res.deviations);
  const auto rows = lines(os.str());
  ASSERT_EQ(rows.size(), 1u + 6 * 2 * 3);
  EXPECT_EQ(rows[0], "dmu,face,factor,deviation");
  EXPECT_EQ(rows[1], "A,R1,a,0");
  EXPECT_EQ(rows[3], "A,R1,y,0");
}

TEST(Tables, SelectionTableMarksMembers) {
  const Dataset d = fixture("tiny.csv");
  const SelectionState st = run_selection(d);
  std::ostringstream os;
  write_selection_table(os, d, st);
  const auto rows = lines(os.str());
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0].substr(0, 3), "DMU");
  EXPECT_NE(rows[2].find('x'), std::string::npos);  // B is in both sets
  EXPECT_EQ(std::count(rows[2].begin(), rows[2].end(), 'x'), 2);
  EXPECT_NE(rows[4].find("2.683"), std::string::npos);
  EXPECT_NE(rows[4].find("1.333"), std::string::npos);
}

TEST(Tables, TargetTableRounding) {
  EXPECT_EQ(detail::fixed(21026.7499, 1), "21026.7");
  EXPECT_EQ(detail::percent(-0.72040), "-72%");
  EXPECT_EQ(detail::percent(-0.0001), "0%");
  EXPECT_EQ(detail::percent(1.9645), "196%");
  const Dataset d = fixture("tiny.csv");
  std::ostringstream os;
  write_target_table(os, d, cross_benchmark(d));
  const auto rows = lines(os.str());
  ASSERT_EQ(rows.size(), 1u + 6 * 3);
  EXPECT_NE(rows[2].find("1.0 (0%)"), std::string::npos) << rows[2];
}

}  // namespace
}  // namespace xbench
