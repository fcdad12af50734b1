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

// Constant-returns-to-scale efficiency classification.
//
// A DMU is Pareto efficient when no nonnegative combination of the observed
// units uses no more of every input and yields no less of every output with at
// least one strict improvement. It is extreme efficient when, in addition, it
// cannot be reproduced by a combination of the other efficient units, i.e. it
// spans an extreme ray of the frontier. The set E of extreme efficient units
// indexes every selection model.

#ifndef XBENCH_EFFICIENCY_HPP_
#define XBENCH_EFFICIENCY_HPP_

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "xbench/dataset.hpp"
#include "xbench/errors.hpp"
#include "xbench/milp.hpp"

namespace xbench {

struct EfficiencyConfig {
  /// Additive-model optimum (and super-efficiency excess) treated as zero.
  double tolerance = 1e-7;
  milp::SolverConfig solver;
};

struct EfficiencyClassification {
  std::vector<bool> pareto_efficient;
  std::vector<bool> extreme_efficient;
  std::vector<std::size_t> extreme_set;  // E, ascending dataset order
};

/// Slack-maximizing additive model for DMU j, with each slack expressed as a
/// fraction of j's own value (so the test does not depend on units). Returns
/// the optimal total relative slack.
inline double additive_slack(const Dataset& d, std::size_t j, const milp::SolverConfig& solver = {}) {
  using namespace milp;
  ModelSpec model("additive_" + std::to_string(j));
  std::vector<VarId> lambda;
  for (std::size_t k = 0; k < d.n(); ++k) lambda.push_back(model.add_variable("lambda_" + std::to_string(k)));
  LinearExpr total;
  for (std::size_t i = 0; i < d.m(); ++i) {
    const VarId slack = model.add_variable("s_in_" + std::to_string(i), 0.0, 1.0);
    LinearExpr row(slack);
    for (std::size_t k = 0; k < d.n(); ++k) row.add(lambda[k], d.x(k, i) / d.x(j, i));
    model.add_constraint(row, Sense::kEqual, 1.0);
    total.add(slack);
  }
  for (std::size_t r = 0; r < d.s(); ++r) {
    const VarId slack = model.add_variable("s_out_" + std::to_string(r));
    LinearExpr row(slack, -1.0);
    for (std::size_t k = 0; k < d.n(); ++k) row.add(lambda[k], d.y(k, r) / d.y(j, r));
    model.add_constraint(row, Sense::kEqual, 1.0);
    total.add(slack);
  }
  model.set_objective(ObjectiveSense::kMaximize, total);
  const Solution sol = solve(model, solver);
  if (!sol.optimal()) {
    throw SolverError(std::string("additive model for DMU '") + d[j].id + "' ended " +
                      to_string(sol.status));
  }
  return sol.objective;
}

inline bool pareto_efficient(const Dataset& d, std::size_t j, const EfficiencyConfig& cfg = {}) {
  if (j >= d.n()) throw DataError("DMU index out of range");
  return additive_slack(d, j, cfg.solver) <= cfg.tolerance;
}

namespace detail {

inline bool same_ray(const Dataset& d, std::size_t a, std::size_t b, double tol) {
  const double ratio = d.factor(a, 0) / d.factor(b, 0);
  for (std::size_t f = 1; f < d.m() + d.s(); ++f) {
    const double rf = d.factor(a, f) / d.factor(b, f);
    if (std::abs(rf - ratio) > tol * ratio) return false;
  }
  return true;
}

}  // namespace detail

/// Smallest uniform input contraction theta such that a combination of
/// `generators` uses at most theta * X_k and yields at least Y_k. Returns
/// +inf when no generator is given.
inline double reproduction_ratio(const Dataset& d, std::size_t k,
                                 const std::vector<std::size_t>& generators,
                                 const milp::SolverConfig& solver = {}) {
  using namespace milp;
  if (generators.empty()) return kInf;
  ModelSpec model("reproduce_" + std::to_string(k));
  const VarId theta = model.add_variable("theta");
  std::vector<VarId> lambda;
  for (std::size_t g : generators) lambda.push_back(model.add_variable("lambda_" + std::to_string(g)));
  for (std::size_t i = 0; i < d.m(); ++i) {
    LinearExpr row(theta, -1.0);
    for (std::size_t t = 0; t < generators.size(); ++t) row.add(lambda[t], d.x(generators[t], i) / d.x(k, i));
    model.add_constraint(row, Sense::kLessEqual, 0.0);
  }
  for (std::size_t r = 0; r < d.s(); ++r) {
    LinearExpr row;
    for (std::size_t t = 0; t < generators.size(); ++t) row.add(lambda[t], d.y(generators[t], r) / d.y(k, r));
    model.add_constraint(row, Sense::kGreaterEqual, 1.0);
  }
  model.set_objective(ObjectiveSense::kMinimize, LinearExpr(theta));
  const Solution sol = solve(model, solver);
  if (sol.status == SolveStatus::kInfeasible) return kInf;
  if (!sol.optimal()) {
    throw SolverError(std::string("reproduction model for DMU '") + d[k].id + "' ended " +
                      to_string(sol.status));
  }
  return sol.objective;
}

/// Classifies every DMU. A Pareto-efficient k is extreme unless the other
/// Pareto-efficient units reproduce it; of several units on one ray only the
/// first in dataset order is kept.
inline EfficiencyClassification extreme_efficient_set(const Dataset& d,
                                                      const EfficiencyConfig& cfg = {}) {
  EfficiencyClassification out;
  out.pareto_efficient.resize(d.n());
  out.extreme_efficient.assign(d.n(), false);
  for (std::size_t j = 0; j < d.n(); ++j) out.pareto_efficient[j] = pareto_efficient(d, j, cfg);

  for (std::size_t k = 0; k < d.n(); ++k) {
    if (!out.pareto_efficient[k]) continue;
    std::vector<std::size_t> generators;
    for (std::size_t j = 0; j < d.n(); ++j) {
      if (j == k || !out.pareto_efficient[j]) continue;
      if (j > k && detail::same_ray(d, j, k, cfg.tolerance)) continue;
      generators.push_back(j);
    }
    const double theta = reproduction_ratio(d, k, generators, cfg.solver);
    if (theta > 1.0 + cfg.tolerance) {
      out.extreme_efficient[k] = true;
      out.extreme_set.push_back(k);
    }
  }
  if (out.extreme_set.empty()) {
    throw SolverError("classification produced an empty extreme-efficient set");
  }
  return out;
}

}  // namespace xbench

#endif  // XBENCH_EFFICIENCY_HPP_
