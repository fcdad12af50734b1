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

// Exhaustive reference path for small instances: every subset of E is tested
// for a common supporting hyperplane, and the greedy selection is replayed by
// scanning all such faces at each step.

#ifndef XBENCH_ORACLE_HPP_
#define XBENCH_ORACLE_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xbench/dataset.hpp"
#include "xbench/errors.hpp"
#include "xbench/milp.hpp"
#include "xbench/panel.hpp"
#include "xbench/projection.hpp"
#include "xbench/selection.hpp"

namespace xbench {

struct EfficientFace {
  std::vector<std::size_t> members;  // dataset indices, ascending
  HyperplaneCertificate certificate;
  bool maximal = false;
};

struct OracleConfig {
  std::size_t max_extreme = 12;
  double eps_stop = 1e-6;
  milp::SolverConfig solver;
};

/// Hyperplane with V, U >= 1 through every unit of `subset` and supporting all
/// DMUs, or nothing when no such hyperplane exists.
inline std::optional<HyperplaneCertificate> supporting_hyperplane(
    const Dataset& d, const NormalizedPanel& panel, std::span<const std::size_t> extreme,
    std::span<const std::size_t> subset, const milp::SolverConfig& solver = {}) {
  using namespace milp;
  ModelSpec model("face");
  std::vector<VarId> w;
  LinearExpr total;
  for (std::size_t f = 0; f < panel.factors(); ++f) {
    w.push_back(model.add_variable("w_" + std::to_string(f), 1.0));
    total.add(w.back());
  }
  auto margin = [&](std::size_t j) {
    LinearExpr e;
    for (std::size_t i = 0; i < panel.m(); ++i) e.add(w[i], panel.x(j, i));
    for (std::size_t r = 0; r < panel.s(); ++r) e.add(w[panel.m() + r], -panel.y(j, r));
    return e;
  };
  for (std::size_t j = 0; j < d.n(); ++j) {
    const bool on = std::find(subset.begin(), subset.end(), j) != subset.end();
    model.add_constraint(margin(j), on ? Sense::kEqual : Sense::kGreaterEqual, 0.0);
  }
  model.set_objective(ObjectiveSense::kMinimize, total);
  const Solution sol = solve(model, solver);
  if (sol.status == SolveStatus::kInfeasible) return std::nullopt;
  if (!sol.optimal()) throw SolverError(std::string("face model ended ") + to_string(sol.status));

  std::vector<double> wv;
  for (VarId v : w) wv.push_back(sol.value(v));
  std::vector<double> raw = panel.to_raw_weights(wv);
  const double lo = *std::min_element(raw.begin(), raw.end());
  HyperplaneCertificate c;
  for (std::size_t i = 0; i < d.m(); ++i) c.input_weights.push_back(raw[i] / lo);
  for (std::size_t r = 0; r < d.s(); ++r) c.output_weights.push_back(raw[d.m() + r] / lo);
  for (std::size_t k : extreme) {
    double gap = 0.0;
    for (std::size_t i = 0; i < d.m(); ++i) gap += c.input_weights[i] * d.x(k, i);
    for (std::size_t r = 0; r < d.s(); ++r) gap -= c.output_weights[r] * d.y(k, r);
    const bool on = std::find(subset.begin(), subset.end(), k) != subset.end();
    c.slacks.push_back(on ? 0.0 : std::max(0.0, gap));
  }
  return c;
}

/// All non-empty subsets of E that lie on a common supporting hyperplane with
/// strictly positive weights. Faces with no enumerated strict superset are
/// flagged maximal.
inline std::vector<EfficientFace> enumerate_faces(const Dataset& d,
                                                  std::span<const std::size_t> extreme,
                                                  const OracleConfig& cfg = {}) {
  if (extreme.empty()) throw DataError("face enumeration needs a non-empty extreme-efficient set");
  if (extreme.size() > cfg.max_extreme) {
    throw DataError("face enumeration is capped at " + std::to_string(cfg.max_extreme) +
                    " extreme units, got " + std::to_string(extreme.size()));
  }
  const NormalizedPanel panel(d);
  const std::uint32_t count = std::uint32_t{1} << extreme.size();
  std::vector<EfficientFace> faces;
  std::vector<std::uint32_t> masks;
  for (std::uint32_t mask = 1; mask < count; ++mask) {
    std::vector<std::size_t> subset;
    for (std::size_t e = 0; e < extreme.size(); ++e) {
      if (mask & (std::uint32_t{1} << e)) subset.push_back(extreme[e]);
    }
    auto cert = supporting_hyperplane(d, panel, extreme, subset, cfg.solver);
    if (!cert) continue;
    faces.push_back({std::move(subset), std::move(*cert), false});
    masks.push_back(mask);
  }
  for (std::size_t a = 0; a < faces.size(); ++a) {
    faces[a].maximal = std::none_of(masks.begin(), masks.end(), [&](std::uint32_t other) {
      return other != masks[a] && (other & masks[a]) == masks[a];
    });
  }
  return faces;
}

struct OracleSelection {
  std::vector<double> objectives;         // D_1, D_2, ...
  std::vector<std::size_t> choices;       // index into the face list per step
  std::vector<std::vector<double>> face_distances;  // [face][j]
  std::vector<double> best_distance;
};

/// Greedy selection replayed exhaustively over `faces`.
inline OracleSelection brute_force_selection(const Dataset& d, std::span<const EfficientFace> faces,
                                             const OracleConfig& cfg = {}) {
  if (faces.empty()) throw DataError("brute-force selection needs at least one face");
  const NormalizedPanel panel(d);
  OracleSelection out;
  for (const EfficientFace& f : faces) {
    std::vector<double> row;
    for (std::size_t j = 0; j < d.n(); ++j) {
      row.push_back(project_onto_cone(d, panel, j, f.members, cfg.solver).distance);
    }
    out.face_distances.push_back(std::move(row));
  }
  out.best_distance.assign(d.n(), std::numeric_limits<double>::infinity());
  for (;;) {
    std::size_t best_face = faces.size();
    double best_total = std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < faces.size(); ++f) {
      double total = 0.0;
      for (std::size_t j = 0; j < d.n(); ++j) {
        total += std::min(out.best_distance[j], out.face_distances[f][j]);
      }
      if (total < best_total) {
        best_total = total;
        best_face = f;
      }
    }
    if (!out.objectives.empty() && best_total >= out.objectives.back() - cfg.eps_stop) break;
    out.objectives.push_back(best_total);
    out.choices.push_back(best_face);
    for (std::size_t j = 0; j < d.n(); ++j) {
      out.best_distance[j] = std::min(out.best_distance[j], out.face_distances[best_face][j]);
    }
  }
  return out;
}

}  // namespace xbench

#endif  // XBENCH_ORACLE_HPP_
