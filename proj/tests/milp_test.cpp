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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

#include "xbench/errors.hpp"
#include "xbench/milp.hpp"

namespace xbench::milp {
namespace {

TEST(Solve, OneVariableLp) {
  ModelSpec m("lp");
  const VarId x = m.add_variable("x", -kInf);
  m.add_constraint(LinearExpr(x), Sense::kGreaterEqual, 3.0);
  m.set_objective(ObjectiveSense::kMinimize, LinearExpr(x));
  const Solution s = solve(m);
  ASSERT_TRUE(s.optimal());
  EXPECT_NEAR(s.objective, 3.0, 1e-12);
  EXPECT_NEAR(s.value(x), 3.0, 1e-12);
}

TEST(Solve, ObjectiveConstantAndMaximize) {
  ModelSpec m;
  const VarId x = m.add_variable("x", 0.0, 4.0);
  LinearExpr obj(x, 2.0);
  obj.add_constant(1.5);
  m.set_objective(ObjectiveSense::kMaximize, obj);
  const Solution s = solve(m);
  EXPECT_NEAR(s.objective, 9.5, 1e-12);
}

TEST(Solve, ReportsInfeasibleAndUnbounded) {
  ModelSpec inf;
  const VarId x = inf.add_variable("x");
  inf.add_constraint(LinearExpr(x), Sense::kLessEqual, -1.0);
  EXPECT_EQ(solve(inf).status, SolveStatus::kInfeasible);

  ModelSpec unb;
  const VarId y = unb.add_variable("y");
  unb.set_objective(ObjectiveSense::kMaximize, LinearExpr(y));
  EXPECT_EQ(solve(unb).status, SolveStatus::kUnbounded);
}

TEST(Solve, SmallKnapsack) {
  ModelSpec m;
  const double w[] = {5, 4, 3, 2};
  const double v[] = {10, 7, 5, 3};
  LinearExpr weight, value;
  for (int i = 0; i < 4; ++i) {
    const VarId b = m.add_binary("b" + std::to_string(i));
    weight.add(b, w[i]);
    value.add(b, v[i]);
  }
  m.add_constraint(weight, Sense::kLessEqual, 9.0);
  m.set_objective(ObjectiveSense::kMaximize, value);
  const Solution s = solve(m);
  ASSERT_TRUE(s.optimal());
  EXPECT_NEAR(s.objective, 17.0, 1e-9);
}

TEST(Solve, MergesDuplicateTermsAndMovesConstant) {
  ModelSpec m;
  const VarId x = m.add_variable("x");
  LinearExpr e(x);
  e.add(x, 1.0).add_constant(2.0);  // 2x + 2 >= 8
  m.add_constraint(e, Sense::kGreaterEqual, 8.0);
  ASSERT_EQ(m.constraints()[0].terms.size(), 1u);
  EXPECT_EQ(m.constraints()[0].rhs, 6.0);
  m.set_objective(ObjectiveSense::kMinimize, LinearExpr(x));
  EXPECT_NEAR(solve(m).objective, 3.0, 1e-12);
}

TEST(ModelSpec, RejectsMalformedInput) {
  ModelSpec m;
  const VarId x = m.add_variable("x");
  EXPECT_THROW(m.add_variable("bad", 2.0, 1.0), SolverError);
  EXPECT_THROW(m.add_constraint(LinearExpr(VarId{7}), Sense::kEqual, 0.0), SolverError);
  EXPECT_THROW(m.add_sos1({x}), SolverError);
  EXPECT_THROW(m.set_objective(ObjectiveSense::kMinimize, LinearExpr(VarId{9})), SolverError);
}

TEST(Sos1, BothForcedPositiveIsInfeasible) {
  ModelSpec m;
  const VarId a = m.add_variable("a");
  const VarId b = m.add_variable("b");
  m.add_constraint(LinearExpr(a), Sense::kGreaterEqual, 1.0);
  m.add_constraint(LinearExpr(b), Sense::kGreaterEqual, 1.0);
  m.add_sos1({a, b});
  EXPECT_EQ(solve(m).status, SolveStatus::kInfeasible);
}

TEST(Sos1, PicksBetterBranch) {
  ModelSpec m;
  const VarId x = m.add_variable("x", 0.0, 6.0);
  const VarId y = m.add_variable("y", 0.0, 7.0);
  LinearExpr sum(x);
  sum.add(y);
  m.add_constraint(sum, Sense::kLessEqual, 10.0);
  m.add_sos1({x, y});
  m.set_objective(ObjectiveSense::kMaximize, sum);
  const Solution s = solve(m);
  ASSERT_TRUE(s.optimal());
  EXPECT_NEAR(s.objective, 7.0, 1e-9);
  EXPECT_NEAR(s.value(x), 0.0, 1e-9);
  EXPECT_GE(s.stats.sos_nodes, 1);
}

TEST(Sos1, GroupOfThree) {
  ModelSpec m;
  std::vector<VarId> v;
  LinearExpr sum;
  const double ub[] = {3, 5, 4};
  const double w[] = {2, 1, 2};
  LinearExpr obj;
  for (int i = 0; i < 3; ++i) {
    v.push_back(m.add_variable("v" + std::to_string(i), 0.0, ub[i]));
    obj.add(v.back(), w[i]);
  }
  m.add_sos1(v);
  m.set_objective(ObjectiveSense::kMaximize, obj);
  EXPECT_NEAR(solve(m).objective, 8.0, 1e-9);
}

TEST(AbsDeviation, ContributesWeightedAbsoluteValue) {
  for (double target : {5.0, -5.0, 0.0}) {
    ModelSpec m;
    const VarId x = m.add_variable("x", -kInf);
    m.add_constraint(LinearExpr(x), Sense::kEqual, target);
    const AbsDeviation dev = add_abs_deviation(m, LinearExpr(x), 0.1);
    m.set_objective(ObjectiveSense::kMinimize, dev.term());
    const Solution s = solve(m);
    EXPECT_NEAR(s.objective, std::abs(target) * 0.1, 1e-12);
    // vertex optimum: at most one side positive
    EXPECT_LE(std::min(s.value(dev.pos), s.value(dev.neg)), 1e-12);
  }
}

TEST(AbsDeviation, RelativeGapOfLabourTarget) {
  ModelSpec m;
  LinearExpr gap(12222.0 - 21026.7);
  const AbsDeviation dev = add_abs_deviation(m, gap, 1.0 / 12222.0);
  m.set_objective(ObjectiveSense::kMinimize, dev.term());
  EXPECT_NEAR(solve(m).objective, 8804.7 / 12222.0, 1e-12);
  EXPECT_NEAR(solve(m).objective, 0.7204, 5e-5);
}

TEST(AbsDeviation, RejectsNonPositiveWeight) {
  ModelSpec m;
  EXPECT_THROW(add_abs_deviation(m, LinearExpr(1.0), 0.0), SolverError);
  EXPECT_THROW(add_abs_deviation(m, LinearExpr(1.0), -2.0), SolverError);
  EXPECT_THROW(add_abs_deviation(m, LinearExpr(1.0), std::numeric_limits<double>::quiet_NaN()),
               SolverError);
}

// lambda wants 0.4 and b is pushed up by the objective unless lambda is zero.
Solution complementarity_toy(ComplementarityMode mode, double cap) {
  ModelSpec m;
  const VarId lambda = m.add_variable("lambda", 0.0, 1.0);
  const VarId b = m.add_variable("b", 0.0, 2.0);
  m.add_constraint(LinearExpr(lambda), Sense::kGreaterEqual, 0.4);
  LinearExpr obj(lambda);
  obj.add(b, -1.0);
  m.set_objective(ObjectiveSense::kMinimize, obj);
  const ComplementarityPair pr{lambda, b, cap, cap};
  encode_complementarity(m, std::span(&pr, 1), mode);
  Solution s = solve(m);
  check_complementarity(s, std::span(&pr, 1));
  return s;
}

TEST(Complementarity, PositiveLambdaForcesZeroSlack) {
  for (auto mode : {ComplementarityMode::kSos1, ComplementarityMode::kBigM}) {
    const Solution s = complementarity_toy(mode, 10.0);
    ASSERT_TRUE(s.optimal()) << to_string(mode);
    EXPECT_NEAR(s.objective, 0.4, 1e-9);
    EXPECT_NEAR(s.value(VarId{1}), 0.0, 1e-9);
  }
}

TEST(Complementarity, BigMNeedsFiniteCaps) {
  ModelSpec m;
  const VarId a = m.add_variable("a");
  const VarId b = m.add_variable("b");
  const ComplementarityPair pr{a, b};
  EXPECT_THROW(encode_complementarity(m, std::span(&pr, 1), ComplementarityMode::kBigM), SolverError);
  EXPECT_NO_THROW(encode_complementarity(m, std::span(&pr, 1), ComplementarityMode::kSos1));
}

TEST(Complementarity, CheckFlagsViolation) {
  ModelSpec m;
  const VarId a = m.add_variable("a");
  const VarId b = m.add_variable("b");
  Solution s;
  s.status = SolveStatus::kOptimal;
  s.values = {0.5, 0.5};
  const ComplementarityPair pr{a, b, 1.0, 1.0};
  EXPECT_THROW(check_complementarity(s, std::span(&pr, 1)), ComplementarityError);
  s.values = {0.5, 1e-7};
  EXPECT_NO_THROW(check_complementarity(s, std::span(&pr, 1)));
  s.values = {1.0, 0.0};
  EXPECT_THROW(check_caps(s, std::span(&pr, 1)), ComplementarityError);
}

// Random problems: min c'x over a box with a few linear rows and
// complementarity pairs. The SOS1 branch-and-bound, the big-M encoding and
// explicit enumeration of which side of every pair is zero must agree.
TEST(ComplementarityProperties, EncodingsAgreeWithEnumeration) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_real_distribution<double> pos(0.5, 3.0);
  int compared = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int pairs = 2 + trial % 3;
    const int nv = 2 * pairs;
    std::vector<double> cost(nv), ub(nv);
    for (auto& c : cost) c = coef(rng);
    for (auto& u : ub) u = pos(rng);
    std::vector<std::vector<double>> rows(2, std::vector<double>(nv));
    std::vector<double> rhs(2);
    for (auto& r : rows) {
      for (auto& v : r) v = coef(rng);
    }
    for (auto& r : rhs) r = pos(rng);

    auto build = [&](std::vector<char> zero) {
      ModelSpec m;
      std::vector<VarId> v;
      LinearExpr obj;
      for (int i = 0; i < nv; ++i) {
        v.push_back(m.add_variable("v" + std::to_string(i), 0.0, zero.empty() || !zero[i] ? ub[i] : 0.0));
        obj.add(v.back(), cost[i]);
      }
      for (int r = 0; r < 2; ++r) {
        LinearExpr e;
        for (int i = 0; i < nv; ++i) e.add(v[i], rows[r][i]);
        m.add_constraint(e, Sense::kLessEqual, rhs[r]);
      }
      m.set_objective(ObjectiveSense::kMinimize, obj);
      std::vector<ComplementarityPair> prs;
      for (int p = 0; p < pairs; ++p) prs.push_back({v[2 * p], v[2 * p + 1], ub[2 * p], ub[2 * p + 1]});
      return std::pair{m, prs};
    };

    double best = std::numeric_limits<double>::infinity();
    for (int mask = 0; mask < (1 << pairs); ++mask) {
      std::vector<char> zero(nv, 0);
      for (int p = 0; p < pairs; ++p) zero[2 * p + ((mask >> p) & 1)] = 1;
      auto [m, prs] = build(zero);
      const Solution s = solve(m);
      if (s.optimal()) best = std::min(best, s.objective);
    }
    for (auto mode : {ComplementarityMode::kSos1, ComplementarityMode::kBigM}) {
      auto [m, prs] = build({});
      encode_complementarity(m, prs, mode);
      const Solution s = solve(m);
      if (!std::isfinite(best)) {
        EXPECT_EQ(s.status, SolveStatus::kInfeasible);
        continue;
      }
      ASSERT_TRUE(s.optimal());
      EXPECT_NEAR(s.objective, best, 1e-7) << "trial " << trial << " mode " << to_string(mode);
      check_complementarity(s, prs);
      EXPECT_TRUE(check_feasibility(m, s.values, 1e-6).empty());
      ++compared;
    }
  }
  EXPECT_GT(compared, 60);
}

TEST(Feasibility, RecheckFindsViolations) {
  ModelSpec m;
  const VarId x = m.add_variable("x", 0.0, 1.0);
  const VarId b = m.add_binary("b");
  LinearExpr e(x);
  e.add(b);
  m.add_constraint(e, Sense::kLessEqual, 1.0);
  EXPECT_TRUE(check_feasibility(m, std::vector<double>{0.5, 0.0}, 1e-6).empty());
  EXPECT_FALSE(check_feasibility(m, std::vector<double>{0.5, 1.0}, 1e-6).empty());  // row
  EXPECT_FALSE(check_feasibility(m, std::vector<double>{1.5, 0.0}, 1e-6).empty());  // bound
  EXPECT_FALSE(check_feasibility(m, std::vector<double>{0.0, 0.5}, 1e-6).empty());  // integrality
}

TEST(Solve, DeterministicAcrossRuns) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> c(-1.0, 1.0);
  ModelSpec m;
  LinearExpr obj, row;
  std::vector<VarId> v;
  for (int i = 0; i < 12; ++i) {
    v.push_back(i % 2 ? m.add_binary("b" + std::to_string(i)) : m.add_variable("x" + std::to_string(i), 0, 3));
    obj.add(v.back(), c(rng));
    row.add(v.back(), std::abs(c(rng)));
  }
  m.add_constraint(row, Sense::kLessEqual, 2.5);
  m.add_sos1({v[0], v[2], v[4]});
  m.set_objective(ObjectiveSense::kMinimize, obj);
  const Solution a = solve(m);
  const Solution b = solve(m);
  EXPECT_EQ(a.objective, b.objective);
  EXPECT_EQ(a.values, b.values);
}

TEST(LpFormat, WritesAllSections) {
  ModelSpec m("toy model");
  const VarId x = m.add_variable("x y", 0.0, 4.0);
  const VarId z = m.add_binary("z");
  const VarId w = m.add_variable("w", -kInf);
  LinearExpr e(x);
  e.add(z, -2.0).add(w);
  m.add_constraint(e, Sense::kGreaterEqual, 1.0, "row one");
  m.add_sos1({x, w});
  m.set_objective(ObjectiveSense::kMaximize, LinearExpr(x));
  const std::string lp = to_lp_format(m);
  for (const char* section : {"Maximize", "Subject To", "Bounds", "Binaries", "SOS", "End"}) {
    EXPECT_NE(lp.find(section), std::string::npos) << section << "\n" << lp;
  }
  EXPECT_EQ(lp.find("x y"), std::string::npos);
}

TEST(LpFormat, DumpDirectoryReceivesModel) {
  const auto dir = std::filesystem::temp_directory_path() / "xbench_lp_dump_test";
  std::filesystem::remove_all(dir);
  ModelSpec m("dumped");
  const VarId x = m.add_variable("x");
  m.add_constraint(LinearExpr(x), Sense::kGreaterEqual, 1.0);
  m.set_objective(ObjectiveSense::kMinimize, LinearExpr(x));
  SolverConfig cfg;
  cfg.dump_lp_dir = dir;
  solve(m, cfg);
  std::ifstream in(dir / "dumped.lp");
  std::stringstream text;
  text << in.rdbuf();
  EXPECT_NE(text.str().find("Subject To"), std::string::npos);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace xbench::milp
