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

// Closest point of a finitely generated cone under the weighted L1 distance.

#ifndef XBENCH_PROJECTION_HPP_
#define XBENCH_PROJECTION_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "xbench/dataset.hpp"
#include "xbench/distance.hpp"
#include "xbench/errors.hpp"
#include "xbench/milp.hpp"
#include "xbench/panel.hpp"

namespace xbench {

struct ConeProjection {
  std::vector<double> intensities;  // aligned with the generators
  std::vector<double> target_inputs;
  std::vector<double> target_outputs;
  double distance = 0.0;  // recomputed from the raw target
};

namespace detail {

// Raw target from intensities over `generators`.
inline void fill_target(const Dataset& d, std::span<const std::size_t> generators,
                        ConeProjection& p) {
  p.target_inputs.assign(d.m(), 0.0);
  p.target_outputs.assign(d.s(), 0.0);
  for (std::size_t t = 0; t < generators.size(); ++t) {
    const double l = p.intensities[t];
    if (l == 0.0) continue;
    for (std::size_t i = 0; i < d.m(); ++i) p.target_inputs[i] += l * d.x(generators[t], i);
    for (std::size_t r = 0; r < d.s(); ++r) p.target_outputs[r] += l * d.y(generators[t], r);
  }
}

// Adds the projection of DMU j onto cone(generators) to `model`; returns the
// intensity variables and appends the distance expression to `distance`.
inline std::vector<milp::VarId> add_projection(milp::ModelSpec& model, const NormalizedPanel& panel,
                                               std::size_t j,
                                               std::span<const std::size_t> generators,
                                               milp::LinearExpr& distance) {
  using namespace milp;
  std::vector<VarId> lambda;
  for (std::size_t k : generators) {
    lambda.push_back(model.add_variable("l_" + std::to_string(k) + "_" + std::to_string(j)));
  }
  for (std::size_t f = 0; f < panel.factors(); ++f) {
    LinearExpr gap(panel.factor(j, f));
    for (std::size_t t = 0; t < generators.size(); ++t) gap.add(lambda[t], -panel.factor(generators[t], f));
    const auto dev = add_abs_deviation(model, gap, 1.0 / panel.factor(j, f),
                                       "dev_" + std::to_string(j) + "_" + std::to_string(f));
    distance.add(dev.term());
  }
  return lambda;
}

}  // namespace detail

/// Closest point to DMU j in the cone spanned by `generators`.
inline ConeProjection project_onto_cone(const Dataset& d, const NormalizedPanel& panel,
                                        std::size_t j, std::span<const std::size_t> generators,
                                        const milp::SolverConfig& solver = {}) {
  using namespace milp;
  ConeProjection p;
  if (generators.empty()) {
    detail::fill_target(d, generators, p);
    p.distance = weighted_l1_distance(d[j], p.target_inputs, p.target_outputs);
    return p;
  }
  ModelSpec model("project_" + std::to_string(j));
  LinearExpr distance;
  const auto lambda = detail::add_projection(model, panel, j, generators, distance);
  model.set_objective(ObjectiveSense::kMinimize, distance);
  const Solution sol = solve(model, solver);
  if (!sol.optimal()) {
    throw SolverError("cone projection of DMU '" + d[j].id + "' ended " + to_string(sol.status));
  }
  for (VarId v : lambda) p.intensities.push_back(sol.value(v));
  detail::fill_target(d, generators, p);
  p.distance = weighted_l1_distance(d[j], p.target_inputs, p.target_outputs);
  return p;
}

inline ConeProjection project_onto_cone(const Dataset& d, std::size_t j,
                                        std::span<const std::size_t> generators,
                                        const milp::SolverConfig& solver = {}) {
  return project_onto_cone(d, NormalizedPanel(d), j, generators, solver);
}

}  // namespace xbench

#endif  // XBENCH_PROJECTION_HPP_
