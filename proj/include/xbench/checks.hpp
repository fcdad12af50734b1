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

// Post-hoc checks of a finished run, recomputed from raw data. Shared by the
// verify subcommand and the test suites.

#ifndef XBENCH_CHECKS_HPP_
#define XBENCH_CHECKS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "xbench/dataset.hpp"
#include "xbench/oracle.hpp"
#include "xbench/selection.hpp"
#include "xbench/targets.hpp"

namespace xbench {

struct CheckResult {
  std::string name;
  bool passed = true;
  std::string detail;  // first failure, if any
};

namespace detail {

inline void fail(CheckResult& c, const std::string& what) {
  if (c.passed) c.detail = what;
  c.passed = false;
}

}  // namespace detail

/// Best distances equal the running minimum of the per-step distances.
inline CheckResult check_running_minimum(const SelectionState& st, double tol = 1e-6) {
  CheckResult c{"running minimum of step distances", true, {}};
  for (std::size_t j = 0; j < st.best_distance.size(); ++j) {
    double lo = std::numeric_limits<double>::infinity();
    for (const StepRecord& rec : st.steps) lo = std::min(lo, rec.distances[j]);
    if (std::abs(lo - st.best_distance[j]) > tol) {
      detail::fail(c, "DMU " + std::to_string(j) + ": best " + std::to_string(st.best_distance[j]) +
                          " vs min " + std::to_string(lo));
    }
  }
  for (std::size_t a = 0; a < st.steps.size(); ++a) {
    if (std::abs(st.steps[a].total_distance - st.objectives[a]) > tol) {
      detail::fail(c, "step " + std::to_string(a + 1) + ": objective differs from summed best distances");
    }
  }
  return c;
}

/// Objectives strictly decrease by more than eps_stop, and the run stopped.
inline CheckResult check_monotone(const SelectionState& st, double eps_stop = 1e-6) {
  CheckResult c{"objective sequence decreasing and terminated", true, {}};
  for (std::size_t a = 1; a < st.objectives.size(); ++a) {
    if (!(st.objectives[a] < st.objectives[a - 1] - eps_stop)) {
      detail::fail(c, "step " + std::to_string(a + 1) + " does not improve on step " + std::to_string(a));
    }
  }
  if (!st.converged) detail::fail(c, "run did not converge");
  return c;
}

inline CheckResult check_certificates(const Dataset& d, const SelectionState& st, double tol = 1e-6) {
  CheckResult c{"hyperplane certificates", true, {}};
  for (const ReferenceSet& r : st.reference_sets) {
    for (const std::string& problem : verify_certificate(d, st.extreme_set, r, tol)) {
      detail::fail(c, "R" + std::to_string(r.step) + ": " + problem);
    }
  }
  return c;
}

inline CheckResult check_complementarity_residuals(const SelectionState& st, double tol = 1e-6) {
  CheckResult c{"complementarity residual", true, {}};
  for (const StepRecord& rec : st.steps) {
    if (rec.complementarity_residual > tol) {
      detail::fail(c, "step " + std::to_string(rec.step) + ": residual " +
                          std::to_string(rec.complementarity_residual));
    }
  }
  return c;
}

/// Stored targets equal the combination of extreme units given by the stored
/// intensities, and stored distances match the targets.
inline CheckResult check_step_targets(const Dataset& d, const SelectionState& st, double tol = 1e-9) {
  CheckResult c{"step targets reproduce from intensities", true, {}};
  for (const StepRecord& rec : st.steps) {
    for (std::size_t j = 0; j < d.n(); ++j) {
      for (std::size_t f = 0; f < d.m() + d.s(); ++f) {
        double v = 0.0;
        for (std::size_t e = 0; e < st.extreme_set.size(); ++e) {
          v += rec.intensities[j][e] * d.factor(st.extreme_set[e], f);
        }
        const double stored = f < d.m() ? rec.target_inputs[j][f] : rec.target_outputs[j][f - d.m()];
        if (std::abs(v - stored) > tol * std::max(1.0, std::abs(v))) {
          detail::fail(c, "step " + std::to_string(rec.step) + ", DMU " + d[j].id);
        }
      }
      const double dist = weighted_l1_distance(d[j], rec.target_inputs[j], rec.target_outputs[j]);
      if (std::abs(dist - rec.distances[j]) > tol) {
        detail::fail(c, "step " + std::to_string(rec.step) + ", DMU " + d[j].id + ": distance");
      }
    }
  }
  return c;
}

/// Members of each reference set are their own targets at distance 0.
inline CheckResult check_member_fixed_point(const Dataset& d, const CrossBenchmarkResult& res,
                                            double tol = 1e-9) {
  CheckResult c{"members are their own targets", true, {}};
  for (std::size_t h = 0; h < res.bundles.size(); ++h) {
    for (std::size_t k : res.selection->reference_sets[h].members) {
      const TargetBundle& b = res.bundles[h][k];
      if (b.distance > tol) {
        detail::fail(c, d[k].id + " in R" + std::to_string(h + 1) + " has distance " +
                            std::to_string(b.distance));
      }
    }
  }
  return c;
}

/// Targets lie on the hyperplane of their reference set.
inline CheckResult check_targets_on_face(const Dataset& d, const CrossBenchmarkResult& res,
                                         double tol = 1e-6) {
  CheckResult c{"targets lie on their face", true, {}};
  for (std::size_t h = 0; h < res.bundles.size(); ++h) {
    const HyperplaneCertificate& cert = res.selection->reference_sets[h].certificate;
    for (const TargetBundle& b : res.bundles[h]) {
      double vx = 0.0, uy = 0.0;
      for (std::size_t i = 0; i < d.m(); ++i) vx += cert.input_weights[i] * b.target_inputs[i];
      for (std::size_t r = 0; r < d.s(); ++r) uy += cert.output_weights[r] * b.target_outputs[r];
      double scale = 0.0;
      for (std::size_t i = 0; i < d.m(); ++i) scale += cert.input_weights[i] * d.x(b.dmu, i);
      if (std::abs(vx - uy) > tol * scale) {
        detail::fail(c, d[b.dmu].id + " under R" + std::to_string(h + 1));
      }
    }
  }
  return c;
}

/// Each face's best target distance is no worse than the selection's final
/// best distance.
inline CheckResult check_targets_bound_selection(const CrossBenchmarkResult& res, double tol = 1e-6) {
  CheckResult c{"face targets bound final distances", true, {}};
  const SelectionState& st = *res.selection;
  for (std::size_t j = 0; j < st.best_distance.size(); ++j) {
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& face : res.bundles) lo = std::min(lo, face[j].distance);
    if (lo > st.best_distance[j] + tol) detail::fail(c, "DMU " + std::to_string(j));
  }
  return c;
}

/// Objective sequences agree step by step.
inline CheckResult check_sequences_agree(const std::string& name, const std::vector<double>& a,
                                         const std::vector<double>& b, double tol = 1e-6) {
  CheckResult c{name, true, {}};
  if (a.size() != b.size()) {
    detail::fail(c, "lengths " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
  }
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (std::abs(a[i] - b[i]) > tol) {
      std::ostringstream os;
      os << std::setprecision(12) << "step " << i + 1 << ": " << a[i] << " vs " << b[i];
      detail::fail(c, os.str());
    }
  }
  return c;
}

/// Every check that needs only one finished run.
inline std::vector<CheckResult> check_run(const Dataset& d, const CrossBenchmarkResult& res,
                                          const SelectionConfig& cfg) {
  std::vector<CheckResult> out;
  const SelectionState& st = *res.selection;
  out.push_back(check_running_minimum(st));
  out.push_back(check_monotone(st, cfg.eps_stop));
  out.push_back(check_certificates(d, st));
  out.push_back(check_complementarity_residuals(st));
  out.push_back(check_step_targets(d, st));
  out.push_back(check_member_fixed_point(d, res));
  out.push_back(check_targets_on_face(d, res));
  out.push_back(check_targets_bound_selection(res));
  return out;
}

}  // namespace xbench

#endif  // XBENCH_CHECKS_HPP_
