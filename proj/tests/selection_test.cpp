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

#include <random>
#include <string>
#include <vector>

#include "support/generators.hpp"
#include "xbench/checks.hpp"
#include "xbench/efficiency.hpp"
#include "xbench/selection.hpp"

namespace xbench {
namespace {

using milp::ComplementarityMode;

Dataset fixture(const std::string& name) { return load_dataset(std::string(XBENCH_DATA_DIR) + "/" + name); }

std::vector<std::string> ids(const Dataset& d, const std::vector<std::size_t>& idx) {
  std::vector<std::string> out;
  for (std::size_t k : idx) out.push_back(d[k].id);
  return out;
}

SelectionConfig with_mode(ComplementarityMode mode) {
  SelectionConfig cfg;
  cfg.complementarity = mode;
  return cfg;
}

void expect_sequence(const std::vector<double>& got, const std::vector<double>& want, double tol = 1e-6) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t a = 0; a < want.size(); ++a) EXPECT_NEAR(got[a], want[a], tol) << "step " << a + 1;
}

class BothModes : public ::testing::TestWithParam<ComplementarityMode> {};

INSTANTIATE_TEST_SUITE_P(Encodings, BothModes,
                         ::testing::Values(ComplementarityMode::kSos1, ComplementarityMode::kBigM),
                         [](const auto& info) { return std::string(milp::to_string(info.param)); });

// Reference values below are frozen from tests/support/oracle.py.

TEST_P(BothModes, TwoFacetInstance) {
  const Dataset d = fixture("tiny.csv");
  const SelectionState st = run_selection(d, with_mode(GetParam()));
  EXPECT_TRUE(st.converged);
  expect_sequence(st.objectives, {2.6833333333333336, 1.3333333333333335});
  ASSERT_EQ(st.step(), 2u);
  EXPECT_EQ(ids(d, st.reference_sets[0].members), (std::vector<std::string>{"A", "B"}));
  EXPECT_EQ(ids(d, st.reference_sets[1].members), (std::vector<std::string>{"B", "C"}));
  const auto& c1 = st.reference_sets[0].certificate;
  EXPECT_NEAR(c1.input_weights[0], 2.0, 1e-7);
  EXPECT_NEAR(c1.input_weights[1], 1.0, 1e-7);
  EXPECT_NEAR(c1.output_weights[0], 6.0, 1e-7);
  EXPECT_NEAR(st.best_distance[3], 0.5, 1e-7);
  EXPECT_NEAR(st.best_distance[4], 1.0 / 3.0, 1e-7);
  EXPECT_NEAR(st.best_distance[5], 0.5, 1e-7);
  ASSERT_TRUE(st.stop_objective.has_value());
  EXPECT_NEAR(*st.stop_objective, 1.3333333333333335, 1e-6);
  EXPECT_NEAR(st.big_m, 3.75, 1e-12);
}

TEST_P(BothModes, SingleFaceStopsAtStepTwo) {
  const Dataset d = fixture("shops.csv");
  const SelectionState st = run_selection(d, with_mode(GetParam()));
  EXPECT_TRUE(st.converged);
  expect_sequence(st.objectives, {1.6612863327149043});
  EXPECT_EQ(ids(d, st.reference_sets[0].members), (std::vector<std::string>{"S1", "S2"}));
}

TEST_P(BothModes, ThreeStepInstance) {
  const SelectionState st = run_selection(fixture("plants.csv"), with_mode(GetParam()));
  expect_sequence(st.objectives, {1.8250070787037918, 1.213242372821438, 0.9691947537738186});
}

TEST_P(BothModes, AirlineSubset) {
  const Dataset d = fixture("airlines8.csv");
  const SelectionState st = run_selection(d, with_mode(GetParam()));
  expect_sequence(st.objectives, {5.928936007869955});
  EXPECT_EQ(ids(d, st.reference_sets[0].members), (std::vector<std::string>{"TWA", "SINGAPORE", "JAL"}));
}

TEST(Selection, SingleUnit) {
  const Dataset d = parse_dataset("dmu,in:a,out:y\nonly,4,2\n");
  const SelectionState st = run_selection(d);
  ASSERT_EQ(st.step(), 1u);
  EXPECT_EQ(st.reference_sets[0].members, (std::vector<std::size_t>{0}));
  EXPECT_NEAR(st.objectives[0], 0.0, 1e-12);
  EXPECT_TRUE(st.converged);
}

TEST(Selection, AllUnitsOnOneRay) {
  const Dataset d = parse_dataset("dmu,in:a,in:b,out:y\nA,1,2,3\nB,2,4,6\nC,0.5,1,1.5\n");
  const SelectionState st = run_selection(d);
  EXPECT_EQ(st.step(), 1u);
  EXPECT_NEAR(st.objectives[0], 0.0, 1e-9);
  EXPECT_TRUE(st.converged);
}

TEST(Selection, StepOneRecordsEveryProjection) {
  const Dataset d = fixture("tiny.csv");
  const auto e = extreme_efficient_set(d).extreme_set;
  const StepOutcome first = select_first(d, e);
  ASSERT_TRUE(first.reference_set.has_value());
  double total = 0.0;
  for (double v : first.record.distances) total += v;
  EXPECT_NEAR(total, first.objective, 1e-7);
  EXPECT_EQ(first.record.face, (std::vector<std::size_t>{0, 1}));
}

TEST(Selection, NextStopsWhenEveryUnitIsReferenced) {
  const Dataset d = parse_dataset("dmu,in:a,in:b,out:y\nA,1,4,1\nB,2,2,1\n");
  const auto e = extreme_efficient_set(d).extreme_set;
  const SelectionState st = start_state(d, e, select_first(d, e));
  const StepOutcome next = select_next(st, d);
  EXPECT_TRUE(next.stop);
}

TEST(Selection, MaxStepsFlagsPartialRun) {
  SelectionConfig cfg;
  cfg.max_steps = 1;
  const SelectionState st = run_selection(fixture("plants.csv"), cfg);
  EXPECT_EQ(st.step(), 1u);
  EXPECT_FALSE(st.converged);
  ASSERT_FALSE(st.notes.empty());
  cfg.max_steps = 0;
  EXPECT_THROW(run_selection(fixture("plants.csv"), cfg), DataError);
}

TEST(Selection, LargerBigMLeavesObjectivesUnchanged) {
  const Dataset d = fixture("plants.csv");
  SelectionConfig cfg;
  const SelectionState base = run_selection(d, cfg);
  cfg.big_m_multiplier = 10.0;
  const SelectionState wide = run_selection(d, cfg);
  expect_sequence(wide.objectives, base.objectives);
}

TEST(Selection, FullStepModelAgrees) {
  SelectionConfig cfg;
  cfg.verify_full_step_model = true;
  for (const char* name : {"tiny.csv", "plants.csv", "shops.csv"}) {
    const Dataset d = fixture(name);
    const SelectionState st = run_selection(d, cfg);
    EXPECT_TRUE(st.converged) << name;
    const double full = solve_full_step_model(st, d, cfg);
    EXPECT_NEAR(full, *st.stop_objective + 0.0, 1e-6) << name;
  }
}

TEST(Selection, UndersizedBigMCapIsFlagged) {
  SelectionConfig cfg;
  cfg.complementarity = ComplementarityMode::kBigM;
  cfg.slack_cap = 1e-4;
  EXPECT_THROW(run_selection(fixture("plants.csv"), cfg), ComplementarityError);
  cfg.slack_cap.reset();
  cfg.weight_cap = 1.0;
  EXPECT_THROW(run_selection(fixture("plants.csv"), cfg), ComplementarityError);
}

TEST(Certificates, RecomputedFromRawData) {
  const Dataset d = fixture("plants.csv");
  const SelectionState st = run_selection(d);
  for (const ReferenceSet& r : st.reference_sets) {
    EXPECT_TRUE(verify_certificate(d, st.extreme_set, r).empty()) << "R" << r.step;
    const double lo = std::min(*std::min_element(r.certificate.input_weights.begin(), r.certificate.input_weights.end()),
                               *std::min_element(r.certificate.output_weights.begin(), r.certificate.output_weights.end()));
    EXPECT_DOUBLE_EQ(lo, 1.0);
  }
  ReferenceSet bad = st.reference_sets[0];
  bad.certificate.output_weights[0] *= 3.0;
  EXPECT_FALSE(verify_certificate(d, st.extreme_set, bad).empty());
  bad = st.reference_sets[0];
  bad.members.push_back(0);  // P1 is not extreme
  EXPECT_FALSE(verify_certificate(d, st.extreme_set, bad).empty());
}

TEST(Certificates, WorkInRawUnitsOfWidelyScaledData) {
  const Dataset d = fixture("airlines8.csv");
  const SelectionState st = run_selection(d);
  EXPECT_TRUE(check_certificates(d, st).passed);
}

struct PropertyCase {
  Dataset data;
  SelectionState state;
};

std::vector<PropertyCase> random_cases(std::uint64_t seed, int count, ComplementarityMode mode) {
  std::mt19937_64 rng(seed);
  std::vector<PropertyCase> out;
  const SelectionConfig cfg = with_mode(mode);
  while (static_cast<int>(out.size()) < count) {
    Dataset d = testing::random_panel(rng, testing::random_small_shape(rng));
    const auto e = extreme_efficient_set(d).extreme_set;
    if (e.size() > 6) continue;
    SelectionState st = run_selection(d, e, cfg);
    out.push_back({std::move(d), std::move(st)});
  }
  return out;
}

TEST_P(BothModes, RunInvariantsOnRandomPanels) {
  for (const auto& c : random_cases(41, 12, GetParam())) {
    EXPECT_TRUE(check_running_minimum(c.state).passed);
    EXPECT_TRUE(check_monotone(c.state).passed);
    EXPECT_TRUE(check_certificates(c.data, c.state).passed) << check_certificates(c.data, c.state).detail;
    EXPECT_TRUE(check_complementarity_residuals(c.state).passed);
    const auto t = check_step_targets(c.data, c.state);
    EXPECT_TRUE(t.passed) << t.detail;
  }
}

TEST(SelectionProperties, ObjectivesInvariantUnderRescaling) {
  std::mt19937_64 rng(43);
  for (const auto& c : random_cases(42, 8, ComplementarityMode::kSos1)) {
    const Dataset r = rescale(c.data, testing::random_factors(rng, c.data.m() + c.data.s()));
    const SelectionState st = run_selection(r);
    expect_sequence(st.objectives, c.state.objectives);
  }
}

TEST(SelectionProperties, ModesAgree) {
  for (const auto& c : random_cases(44, 8, ComplementarityMode::kSos1)) {
    const SelectionState st = run_selection(c.data, with_mode(ComplementarityMode::kBigM));
    expect_sequence(st.objectives, c.state.objectives);
  }
}

}  // namespace
}  // namespace xbench
