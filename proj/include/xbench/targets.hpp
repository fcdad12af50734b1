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

// Closest targets of every DMU against every selected reference set, and the
// percent deviations between actual data and those targets.

#ifndef XBENCH_TARGETS_HPP_
#define XBENCH_TARGETS_HPP_

#include <cstddef>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "xbench/dataset.hpp"
#include "xbench/distance.hpp"
#include "xbench/efficiency.hpp"
#include "xbench/errors.hpp"
#include "xbench/milp.hpp"
#include "xbench/panel.hpp"
#include "xbench/projection.hpp"
#include "xbench/selection.hpp"

namespace xbench {

struct TargetBundle {
  std::size_t dmu = 0;
  std::size_t face = 0;  // step index of the reference set, 1-based
  std::vector<double> target_inputs;
  std::vector<double> target_outputs;
  std::vector<double> intensities;  // aligned with the reference set's members
  double distance = 0.0;
};

/// Closest targets of all DMUs against one reference set. Each DMU is an
/// independent LP; with `joint` set, one LP holds every DMU instead.
inline std::vector<TargetBundle> closest_targets_for_face(const Dataset& d, const ReferenceSet& face,
                                                          const milp::SolverConfig& solver = {},
                                                          bool joint = false) {
  using namespace milp;
  for (std::size_t k : face.members) {
    if (k >= d.n()) throw DataError("reference set member out of range");
  }
  const NormalizedPanel panel(d);
  std::vector<TargetBundle> out(d.n());
  auto finish = [&](std::size_t j, ConeProjection p) {
    TargetBundle& b = out[j];
    b.dmu = j;
    b.face = face.step;
    b.intensities = std::move(p.intensities);
    b.target_inputs = std::move(p.target_inputs);
    b.target_outputs = std::move(p.target_outputs);
    b.distance = p.distance;
  };

  if (!joint || face.members.empty()) {
    for (std::size_t j = 0; j < d.n(); ++j) finish(j, project_onto_cone(d, panel, j, face.members, solver));
    return out;
  }

  ModelSpec model("targets_face" + std::to_string(face.step));
  std::vector<std::vector<VarId>> lambda;
  LinearExpr total;
  for (std::size_t j = 0; j < d.n(); ++j) {
    lambda.push_back(detail::add_projection(model, panel, j, face.members, total));
  }
  model.set_objective(ObjectiveSense::kMinimize, total);
  const Solution sol = solve(model, solver);
  if (!sol.optimal()) {
    throw SolverError("joint target model for face " + std::to_string(face.step) + " ended " +
                      to_string(sol.status));
  }
  for (std::size_t j = 0; j < d.n(); ++j) {
    ConeProjection p;
    for (VarId v : lambda[j]) p.intensities.push_back(sol.value(v));
    detail::fill_target(d, face.members, p);
    p.distance = weighted_l1_distance(d[j], p.target_inputs, p.target_outputs);
    finish(j, std::move(p));
  }
  return out;
}

/// Percent deviations indexed by (dmu, face, factor), stored as fractions.
/// Inputs: (x - target) / x. Outputs: (target - y) / y. Positive entries mark
/// factors on which the DMU does worse than its target.
class DeviationMatrix {
 public:
  DeviationMatrix() = default;
  DeviationMatrix(std::size_t n, std::size_t faces, std::size_t factors)
      : n_(n), faces_(faces), factors_(factors), v_(n * faces * factors, 0.0) {}

  std::size_t n() const { return n_; }
  std::size_t faces() const { return faces_; }
  std::size_t factors() const { return factors_; }

  double at(std::size_t j, std::size_t h, std::size_t f) const { return v_[index(j, h, f)]; }
  double& at(std::size_t j, std::size_t h, std::size_t f) { return v_[index(j, h, f)]; }

 private:
  std::size_t index(std::size_t j, std::size_t h, std::size_t f) const {
    return (j * faces_ + h) * factors_ + f;
  }
  std::size_t n_ = 0, faces_ = 0, factors_ = 0;
  std::vector<double> v_;
};

inline double input_deviation(double actual, double target) { return (actual - target) / actual; }
inline double output_deviation(double actual, double target) { return (target - actual) / actual; }

/// `bundles[h][j]` holds DMU j's target against the h-th reference set.
inline DeviationMatrix deviation_report(const Dataset& d,
                                        const std::vector<std::vector<TargetBundle>>& bundles) {
  DeviationMatrix dev(d.n(), bundles.size(), d.m() + d.s());
  for (std::size_t h = 0; h < bundles.size(); ++h) {
    if (bundles[h].size() != d.n()) throw DataError("target bundles do not cover every DMU");
    for (std::size_t j = 0; j < d.n(); ++j) {
      const TargetBundle& b = bundles[h][j];
      for (std::size_t i = 0; i < d.m(); ++i) dev.at(j, h, i) = input_deviation(d.x(j, i), b.target_inputs[i]);
      for (std::size_t r = 0; r < d.s(); ++r) {
        dev.at(j, h, d.m() + r) = output_deviation(d.y(j, r), b.target_outputs[r]);
      }
    }
  }
  return dev;
}

struct CrossBenchmarkConfig {
  SelectionConfig selection;
  /// Solve each face's target model jointly instead of per DMU.
  bool joint_targets = false;
};

struct CrossBenchmarkResult {
  std::optional<EfficiencyClassification> classification;
  std::optional<SelectionState> selection;
  std::vector<std::vector<TargetBundle>> bundles;  // [h][j]
  std::optional<DeviationMatrix> deviations;
  bool complete = false;
  std::string failed_stage;
  std::string error_message;
  std::exception_ptr error;
};

/// Classification, selection and per-face targets in one pass. A failing stage
/// leaves the earlier results in place and is recorded instead of thrown.
inline CrossBenchmarkResult cross_benchmark(const Dataset& d, const CrossBenchmarkConfig& cfg = {}) {
  CrossBenchmarkResult res;
  std::string stage = "classification";
  try {
    res.classification = extreme_efficient_set(d, cfg.selection.efficiency);
    stage = "selection";
    res.selection = run_selection(d, res.classification->extreme_set, cfg.selection);
    stage = "targets";
    for (const ReferenceSet& face : res.selection->reference_sets) {
      res.bundles.push_back(closest_targets_for_face(d, face, cfg.selection.solver, cfg.joint_targets));
    }
    stage = "deviations";
    res.deviations = deviation_report(d, res.bundles);
    res.complete = true;
  } catch (const std::exception& e) {
    res.failed_stage = stage;
    res.error_message = e.what();
    res.error = std::current_exception();
  }
  return res;
}

}  // namespace xbench

#endif  // XBENCH_TARGETS_HPP_
