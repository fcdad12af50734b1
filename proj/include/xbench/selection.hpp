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

// Sequential selection of reference sets.
//
// Step 1 picks the face of the efficient frontier onto which all DMUs can be
// projected with the smallest total weighted L1 distance. Each later step
// picks one more face, now letting every DMU keep the closest of its previous
// targets or take one on the new face, and the loop stops once an extra face
// no longer lowers the total. A face is encoded by a supporting hyperplane
// -V'X + U'Y + b = 0 with V, U >= 1 over the extreme-efficient units E; unit k
// may serve as a referent only if it lies on the hyperplane (lambda_k * b_k = 0).
//
// Models are built on the column-normalized panel. Intensities and distances
// do not depend on that scaling; hyperplane weights are mapped back to raw
// units before they are reported.

#ifndef XBENCH_SELECTION_HPP_
#define XBENCH_SELECTION_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "xbench/dataset.hpp"
#include "xbench/distance.hpp"
#include "xbench/efficiency.hpp"
#include "xbench/errors.hpp"
#include "xbench/milp.hpp"
#include "xbench/panel.hpp"
#include "xbench/projection.hpp"

namespace xbench {

struct SelectionConfig {
  /// Intensity above which a unit counts as an active referent.
  double eps_lambda = 1e-6;
  /// Absolute distance decrease that counts as a strict improvement.
  double eps_improve = 1e-6;
  /// Absolute objective change below which the loop stops.
  double eps_stop = 1e-6;
  milp::ComplementarityMode complementarity = milp::ComplementarityMode::kSos1;
  /// Upper bound on the hyperplane weights (normalized units), big-M mode only.
  double weight_cap = 1e6;
  /// Upper bound on b_k in big-M mode; derived from weight_cap when unset.
  std::optional<double> slack_cap;
  /// Scales the big-M of the step models (1 = the sufficient value).
  double big_m_multiplier = 1.0;
  /// Maximum number of reference sets.
  std::size_t max_steps = 100;
  /// Also solve the unsimplified step model and require the same optimum.
  bool verify_full_step_model = false;
  EfficiencyConfig efficiency;
  milp::SolverConfig solver;
};

/// Supporting hyperplane V'X - U'Y = b_k >= 0 over E, raw units, scaled so the
/// smallest weight is exactly 1.
struct HyperplaneCertificate {
  std::vector<double> input_weights;
  std::vector<double> output_weights;
  std::vector<double> slacks;  // aligned with the extreme set
};

struct ReferenceSet {
  std::size_t step = 0;               // 1-based
  std::vector<std::size_t> members;   // dataset indices, ascending
  HyperplaneCertificate certificate;
};

/// Targets and distances of every DMU at one step.
struct StepRecord {
  std::size_t step = 0;
  double objective = 0.0;       // optimum of the step model
  double total_distance = 0.0;  // sum of best distances after the step
  std::vector<double> distances;
  std::vector<std::vector<double>> intensities;  // [j][e], e indexes the extreme set
  std::vector<std::vector<double>> target_inputs;
  std::vector<std::vector<double>> target_outputs;
  std::vector<bool> improved;
  std::vector<std::size_t> face;  // extreme units lying on the step's hyperplane
  double complementarity_residual = 0.0;  // max lambda_k * b_k in model units
  milp::SolverStats stats;
};

struct StepOutcome {
  bool stop = false;
  double objective = 0.0;
  std::optional<ReferenceSet> reference_set;
  StepRecord record;
  std::optional<double> full_model_objective;
  std::vector<std::string> notes;
};

struct SelectionState {
  std::vector<std::size_t> extreme_set;
  double big_m = 0.0;
  std::vector<ReferenceSet> reference_sets;
  std::vector<StepRecord> steps;
  std::vector<double> best_distance;  // running minimum over steps
  std::vector<double> objectives;     // D_1, D_2, ...
  std::vector<bool> in_reference_union;
  /// Optimum of the step that triggered the stop.
  std::optional<double> stop_objective;
  bool converged = false;
  std::vector<std::string> notes;

  std::size_t step() const { return reference_sets.size(); }
};

namespace detail {

struct FaceModel {
  milp::ModelSpec spec;
  std::vector<std::size_t> evaluated;
  std::vector<std::vector<milp::VarId>> lambda;  // [t][e]
  std::vector<milp::LinearExpr> distance;        // [t]
  std::vector<milp::VarId> weights;              // V then U
  std::vector<milp::VarId> slack;                // [e]
  std::vector<milp::VarId> usage;                // [e]
  std::vector<milp::ComplementarityPair> pairs;
  std::vector<milp::VarId> extra;  // step-specific variables
};

// Projections of every evaluated DMU onto a common face over E. `distance_bound`
// bounds the distance of some optimal projection of each DMU and caps the
// intensities.
inline FaceModel build_face_model(std::string name, const NormalizedPanel& panel,
                                  std::span<const std::size_t> extreme,
                                  std::vector<std::size_t> evaluated, double distance_bound,
                                  const SelectionConfig& cfg) {
  using namespace milp;
  FaceModel fm{ModelSpec(std::move(name)), std::move(evaluated), {}, {}, {}, {}, {}, {}, {}};
  const bool big_m = cfg.complementarity == ComplementarityMode::kBigM;
  const double w_hi = big_m ? cfg.weight_cap : kInf;
  const std::size_t ne = extreme.size();
  std::vector<double> usage_cap(ne, 0.0);

  for (std::size_t t = 0; t < fm.evaluated.size(); ++t) {
    const std::size_t j = fm.evaluated[t];
    std::vector<VarId> lam;
    for (std::size_t e = 0; e < ne; ++e) {
      const std::size_t k = extreme[e];
      double ratio = kInf;
      for (std::size_t f = 0; f < panel.factors(); ++f) {
        ratio = std::min(ratio, panel.factor(j, f) / panel.factor(k, f));
      }
      const double cap = (1.0 + distance_bound) * ratio;
      usage_cap[e] += cap;
      lam.push_back(fm.spec.add_variable("l_" + std::to_string(k) + "_" + std::to_string(j), 0.0, cap));
    }
    LinearExpr dist;
    for (std::size_t f = 0; f < panel.factors(); ++f) {
      LinearExpr gap(panel.factor(j, f));
      for (std::size_t e = 0; e < ne; ++e) gap.add(lam[e], -panel.factor(extreme[e], f));
      dist.add(add_abs_deviation(fm.spec, gap, 1.0 / panel.factor(j, f),
                                 "dev_" + std::to_string(j) + "_" + std::to_string(f))
                   .term());
    }
    fm.lambda.push_back(std::move(lam));
    fm.distance.push_back(std::move(dist));
  }

  for (std::size_t i = 0; i < panel.m(); ++i) {
    fm.weights.push_back(fm.spec.add_variable("v_" + std::to_string(i), 1.0, w_hi));
  }
  for (std::size_t r = 0; r < panel.s(); ++r) {
    fm.weights.push_back(fm.spec.add_variable("u_" + std::to_string(r), 1.0, w_hi));
  }
  for (std::size_t e = 0; e < ne; ++e) {
    const std::size_t k = extreme[e];
    const VarId b = fm.spec.add_variable("b_" + std::to_string(k));
    const VarId use = fm.spec.add_variable("use_" + std::to_string(k));
    LinearExpr plane(b);
    double input_mass = 0.0;
    for (std::size_t i = 0; i < panel.m(); ++i) {
      plane.add(fm.weights[i], -panel.x(k, i));
      input_mass += panel.x(k, i);
    }
    for (std::size_t r = 0; r < panel.s(); ++r) plane.add(fm.weights[panel.m() + r], panel.y(k, r));
    fm.spec.add_constraint(plane, Sense::kEqual, 0.0, "plane_" + std::to_string(k));
    LinearExpr link(use);
    for (std::size_t t = 0; t < fm.evaluated.size(); ++t) link.add(fm.lambda[t][e], -1.0);
    fm.spec.add_constraint(link, Sense::kEqual, 0.0, "use_" + std::to_string(k));
    fm.slack.push_back(b);
    fm.usage.push_back(use);
    const double b_cap = cfg.slack_cap.value_or(cfg.weight_cap * input_mass);
    fm.pairs.push_back({use, b, std::max(usage_cap[e], 1e-12), b_cap});
  }
  encode_complementarity(fm.spec, fm.pairs, cfg.complementarity);
  return fm;
}

inline bool caps_binding(const FaceModel& fm, const milp::Solution& sol, const SelectionConfig& cfg) {
  for (const auto& p : fm.pairs) {
    if (sol.value(p.first) >= p.first_cap * (1.0 - 1e-9)) return true;
    if (sol.value(p.second) >= p.second_cap * (1.0 - 1e-9)) return true;
  }
  for (auto w : fm.weights) {
    if (sol.value(w) >= cfg.weight_cap * (1.0 - 1e-9)) return true;
  }
  return false;
}

struct SolvedStep {
  FaceModel model;
  milp::Solution solution;
};

// Builds and solves a step model with status and complementarity checks.
// Under big-M an infeasible model means the caps are too small, since the
// uncapped model is always feasible. When a cap binds, the model is solved
// again with caps ten times larger and must reach the same optimum.
template <class Build>
SolvedStep solve_step_model(Build build, const SelectionConfig& cfg, const std::string& what) {
  using namespace milp;
  const bool big_m = cfg.complementarity == ComplementarityMode::kBigM;
  SolvedStep out{build(cfg), {}};
  out.solution = solve(out.model.spec, cfg.solver);
  const Solution& sol = out.solution;
  if (big_m && sol.status == SolveStatus::kInfeasible) {
    throw ComplementarityError(what + " is infeasible under big-M; increase the big-M caps");
  }
  if (sol.status == SolveStatus::kInfeasible) {
    throw SolverError(what + " reported infeasible; the model encoding is broken");
  }
  if (!sol.optimal()) throw SolverError(what + " ended " + to_string(sol.status));
  check_complementarity(sol, out.model.pairs);
  if (!big_m || !caps_binding(out.model, sol, cfg)) return out;

  SelectionConfig wide = cfg;
  wide.weight_cap *= 10.0;
  if (wide.slack_cap) *wide.slack_cap *= 10.0;
  const FaceModel probe = build(wide);
  const Solution again = solve(probe.spec, cfg.solver);
  if (!again.optimal() ||
      std::abs(again.objective - sol.objective) > 1e-6 * std::max(1.0, std::abs(sol.objective))) {
    std::ostringstream msg;
    msg << what << ": big-M caps cut off the optimum (" << sol.objective << " with the caps, "
        << again.objective << " with caps x10); increase the weight or slack cap";
    throw ComplementarityError(msg.str());
  }
  return out;
}

inline double complementarity_residual(const FaceModel& fm, const milp::Solution& sol) {
  double worst = 0.0;
  for (const auto& p : fm.pairs) {
    worst = std::max(worst, std::abs(sol.value(p.first) * sol.value(p.second)));
  }
  return worst;
}

inline HyperplaneCertificate extract_certificate(const FaceModel& fm, const NormalizedPanel& panel,
                                                 const milp::Solution& sol) {
  std::vector<double> w;
  for (auto v : fm.weights) w.push_back(sol.value(v));
  std::vector<double> raw = panel.to_raw_weights(w);
  const double lo = *std::min_element(raw.begin(), raw.end());
  HyperplaneCertificate c;
  for (std::size_t i = 0; i < panel.m(); ++i) c.input_weights.push_back(raw[i] / lo);
  for (std::size_t r = 0; r < panel.s(); ++r) c.output_weights.push_back(raw[panel.m() + r] / lo);
  // V'X on raw data equals the normalized product, so b only needs the common scale.
  for (auto b : fm.slack) c.slacks.push_back(std::max(0.0, sol.value(b)) / lo);
  return c;
}

// Extreme units whose hyperplane slack vanishes.
inline std::vector<std::size_t> hyperplane_face(const FaceModel& fm, const NormalizedPanel& panel,
                                                std::span<const std::size_t> extreme,
                                                const milp::Solution& sol) {
  std::vector<std::size_t> face;
  for (std::size_t e = 0; e < extreme.size(); ++e) {
    double vx = 0.0;
    for (std::size_t i = 0; i < panel.m(); ++i) vx += sol.value(fm.weights[i]) * panel.x(extreme[e], i);
    if (sol.value(fm.slack[e]) <= 1e-7 * vx) face.push_back(extreme[e]);
  }
  return face;
}

// Fills row j of `rec` from intensities over the extreme set.
inline void set_record_row(const Dataset& d, std::span<const std::size_t> extreme, std::size_t j,
                           std::vector<double> intensities, StepRecord& rec) {
  std::vector<double> xi(d.m(), 0.0);
  std::vector<double> yo(d.s(), 0.0);
  for (std::size_t e = 0; e < extreme.size(); ++e) {
    const double l = intensities[e];
    if (l == 0.0) continue;
    for (std::size_t i = 0; i < d.m(); ++i) xi[i] += l * d.x(extreme[e], i);
    for (std::size_t r = 0; r < d.s(); ++r) yo[r] += l * d.y(extreme[e], r);
  }
  rec.distances[j] = weighted_l1_distance(d[j], xi, yo);
  rec.intensities[j] = std::move(intensities);
  rec.target_inputs[j] = std::move(xi);
  rec.target_outputs[j] = std::move(yo);
}

inline StepRecord empty_record(const Dataset& d, std::size_t step) {
  StepRecord rec;
  rec.step = step;
  rec.distances.assign(d.n(), 0.0);
  rec.intensities.assign(d.n(), {});
  rec.target_inputs.assign(d.n(), {});
  rec.target_outputs.assign(d.n(), {});
  rec.improved.assign(d.n(), false);
  return rec;
}

inline std::string step_name(const char* prefix, std::size_t step) {
  return std::string(prefix) + "_step" + std::to_string(step);
}

inline double distance_bound(const Dataset& d, double big_m) {
  return 2.0 * std::max(big_m, static_cast<double>(d.m() + d.s()));
}

}  // namespace detail

/// Problems with a reference set's certificate when recomputed from raw data;
/// empty when it is valid.
inline std::vector<std::string> verify_certificate(const Dataset& d,
                                                   std::span<const std::size_t> extreme,
                                                   const ReferenceSet& set, double tol = 1e-6) {
  std::vector<std::string> out;
  const auto& c = set.certificate;
  if (c.input_weights.size() != d.m() || c.output_weights.size() != d.s() ||
      c.slacks.size() != extreme.size()) {
    out.push_back("certificate dimensions do not match the data");
    return out;
  }
  for (double v : c.input_weights) {
    if (v < 1.0 - 1e-12) out.push_back("input weight below 1");
  }
  for (double u : c.output_weights) {
    if (u < 1.0 - 1e-12) out.push_back("output weight below 1");
  }
  auto vx = [&](std::size_t j) {
    double s = 0.0;
    for (std::size_t i = 0; i < d.m(); ++i) s += c.input_weights[i] * d.x(j, i);
    return s;
  };
  auto uy = [&](std::size_t j) {
    double s = 0.0;
    for (std::size_t r = 0; r < d.s(); ++r) s += c.output_weights[r] * d.y(j, r);
    return s;
  };
  for (std::size_t e = 0; e < extreme.size(); ++e) {
    const std::size_t k = extreme[e];
    if (c.slacks[e] < 0.0) out.push_back("negative slack for " + d[k].id);
    if (std::abs(-vx(k) + uy(k) + c.slacks[e]) > tol * vx(k)) {
      out.push_back("hyperplane identity fails for " + d[k].id);
    }
  }
  for (std::size_t j = 0; j < d.n(); ++j) {
    if (vx(j) - uy(j) < -tol * vx(j)) out.push_back("hyperplane cuts off " + d[j].id);
  }
  if (set.members.empty()) out.push_back("reference set is empty");
  for (std::size_t k : set.members) {
    const auto it = std::find(extreme.begin(), extreme.end(), k);
    if (it == extreme.end()) {
      out.push_back(d[k].id + " is not extreme efficient");
      continue;
    }
    const auto e = static_cast<std::size_t>(it - extreme.begin());
    if (c.slacks[e] > tol * vx(k)) out.push_back(d[k].id + " is off the hyperplane");
  }
  return out;
}

/// Step 1: the common reference set with the smallest total distance.
inline StepOutcome select_first(const Dataset& d, std::span<const std::size_t> extreme,
                                const SelectionConfig& cfg = {}) {
  using namespace milp;
  if (extreme.empty()) throw DataError("selection needs a non-empty extreme-efficient set");
  const NormalizedPanel panel(d);
  const double big_m = compute_big_m(d, extreme) * cfg.big_m_multiplier;
  std::vector<std::size_t> all(d.n());
  std::iota(all.begin(), all.end(), std::size_t{0});
  const auto build = [&](const SelectionConfig& c) {
    detail::FaceModel fm = detail::build_face_model(detail::step_name("select", 1), panel, extreme,
                                                    all, detail::distance_bound(d, big_m), c);
    LinearExpr total;
    for (const auto& dist : fm.distance) total.add(dist);
    fm.spec.set_objective(ObjectiveSense::kMinimize, total);
    return fm;
  };
  const auto [fm, sol] = detail::solve_step_model(build, cfg, "step-1 model");

  StepOutcome out;
  out.objective = sol.objective;
  StepRecord rec = detail::empty_record(d, 1);
  rec.objective = sol.objective;
  rec.stats = sol.stats;
  rec.face = detail::hyperplane_face(fm, panel, extreme, sol);
  rec.complementarity_residual = detail::complementarity_residual(fm, sol);
  for (std::size_t j = 0; j < d.n(); ++j) {
    std::vector<double> lam;
    for (auto v : fm.lambda[j]) lam.push_back(std::max(0.0, sol.value(v)));
    detail::set_record_row(d, extreme, j, std::move(lam), rec);
    rec.improved[j] = true;
  }
  rec.total_distance = std::accumulate(rec.distances.begin(), rec.distances.end(), 0.0);

  ReferenceSet set;
  set.step = 1;
  for (std::size_t e = 0; e < extreme.size(); ++e) {
    if (sol.value(fm.usage[e]) > cfg.eps_lambda) set.members.push_back(extreme[e]);
  }
  set.certificate = detail::extract_certificate(fm, panel, sol);
  if (set.members.empty()) {
    // Possible only if projecting onto the origin is optimal for every DMU.
    out.notes.push_back("step 1 selected no active referent");
  }
  out.reference_set = std::move(set);
  out.record = std::move(rec);
  return out;
}

/// Initial state after step 1.
inline SelectionState start_state(const Dataset& d, std::span<const std::size_t> extreme,
                                  StepOutcome first, const SelectionConfig& cfg = {}) {
  SelectionState st;
  st.extreme_set.assign(extreme.begin(), extreme.end());
  st.big_m = compute_big_m(d, extreme) * cfg.big_m_multiplier;
  st.in_reference_union.assign(d.n(), false);
  st.best_distance = first.record.distances;
  for (std::size_t k : first.reference_set->members) st.in_reference_union[k] = true;
  st.objectives.push_back(first.objective);
  st.notes = std::move(first.notes);
  st.reference_sets.push_back(std::move(*first.reference_set));
  st.steps.push_back(std::move(first.record));
  return st;
}

/// Optimum of the unsimplified step model over all DMUs, with one binary per
/// DMU and per step. Used to confirm the simplified model on small instances.
inline double solve_full_step_model(const SelectionState& state, const Dataset& d,
                                    const SelectionConfig& cfg = {}) {
  using namespace milp;
  const NormalizedPanel panel(d);
  const std::size_t a = state.step() + 1;
  std::vector<std::size_t> all(d.n());
  std::iota(all.begin(), all.end(), std::size_t{0});
  const double big_m = state.big_m;
  const auto build = [&](const SelectionConfig& c) {
    detail::FaceModel fm =
        detail::build_face_model(detail::step_name("full", a), panel, state.extreme_set, all,
                                 detail::distance_bound(d, state.big_m), c);
    LinearExpr objective;
    for (std::size_t j = 0; j < d.n(); ++j) {
      const std::string tag = std::to_string(j);
      const VarId delta = fm.spec.add_variable("delta_" + tag);
      objective.add(delta);
      LinearExpr choices;
      for (std::size_t h = 1; h <= a; ++h) {
        const VarId skip = fm.spec.add_binary("skip_" + tag + "_" + std::to_string(h));
        choices.add(skip);
        if (h < a) {
          LinearExpr row(delta);
          row.add(skip, big_m);
          fm.spec.add_constraint(row, Sense::kGreaterEqual, state.steps[h - 1].distances[j]);
        } else {
          LinearExpr row = fm.distance[j];
          row.add(delta, -1.0).add(skip, -big_m);
          fm.spec.add_constraint(row, Sense::kLessEqual, 0.0);
        }
      }
      fm.spec.add_constraint(choices, Sense::kLessEqual, static_cast<double>(a - 1));
    }
    fm.spec.set_objective(ObjectiveSense::kMinimize, objective);
    return fm;
  };
  return detail::solve_step_model(build, cfg, "full step-" + std::to_string(a) + " model").solution.objective;
}

/// Step a >= 2: the face that most lowers the sum of best distances, or a stop
/// signal when no face lowers it by more than eps_stop.
inline StepOutcome select_next(const SelectionState& state, const Dataset& d,
                               const SelectionConfig& cfg = {}) {
  using namespace milp;
  const std::span<const std::size_t> extreme = state.extreme_set;
  const std::size_t a = state.step() + 1;
  const NormalizedPanel panel(d);
  std::vector<std::size_t> outside;
  double previous = 0.0;
  for (std::size_t j = 0; j < d.n(); ++j) {
    if (state.in_reference_union[j]) continue;
    outside.push_back(j);
    previous += state.best_distance[j];
  }
  StepOutcome out;
  if (outside.empty()) {
    out.stop = true;
    out.objective = 0.0;
    return out;
  }

  const double big_m = state.big_m;
  const auto build = [&](const SelectionConfig& c) {
    detail::FaceModel fm = detail::build_face_model(detail::step_name("select", a), panel, extreme,
                                                    outside, detail::distance_bound(d, big_m), c);
    LinearExpr objective;
    for (std::size_t t = 0; t < outside.size(); ++t) {
      const std::size_t j = outside[t];
      const std::string tag = std::to_string(j);
      const VarId dj = fm.spec.add_variable("delta_" + tag);
      const VarId take_new = fm.spec.add_binary("new_" + tag);
      // Either delta >= previous best (take_new = 0) or delta >= new distance.
      LinearExpr keep(dj);
      keep.add(take_new, big_m);
      fm.spec.add_constraint(keep, Sense::kGreaterEqual, state.best_distance[j], "keep_" + tag);
      LinearExpr fresh = fm.distance[t];
      fresh.add(dj, -1.0).add(take_new, big_m);
      fm.spec.add_constraint(fresh, Sense::kLessEqual, big_m, "fresh_" + tag);
      fm.extra.push_back(dj);
      objective.add(dj);
    }
    fm.spec.set_objective(ObjectiveSense::kMinimize, objective);
    return fm;
  };
  const auto [fm, sol] = detail::solve_step_model(build, cfg, "step-" + std::to_string(a) + " model");
  const std::vector<VarId>& delta = fm.extra;
  out.objective = sol.objective;

  if (cfg.verify_full_step_model) {
    const double full = solve_full_step_model(state, d, cfg);
    double inside = 0.0;
    for (std::size_t j = 0; j < d.n(); ++j) {
      if (state.in_reference_union[j]) inside += state.best_distance[j];
    }
    out.full_model_objective = full;
    // The full model lets members of earlier sets keep their (zero) distance.
    if (std::abs(full - (sol.objective + inside)) > 1e-6) {
      std::ostringstream msg;
      msg << "step " << a << ": full model optimum " << full << " differs from simplified "
          << sol.objective + inside;
      throw VerificationError(msg.str());
    }
  }

  if (sol.objective >= previous - cfg.eps_stop) {
    out.stop = true;
    if (sol.objective > previous + cfg.eps_stop) {
      out.notes.push_back("step " + std::to_string(a) + " optimum exceeds the previous total");
    }
    return out;
  }

  StepRecord rec = detail::empty_record(d, a);
  rec.objective = sol.objective;
  rec.stats = sol.stats;
  rec.face = detail::hyperplane_face(fm, panel, extreme, sol);
  rec.complementarity_residual = detail::complementarity_residual(fm, sol);

  ReferenceSet set;
  set.step = a;
  std::vector<bool> member(extreme.size(), false);
  for (std::size_t t = 0; t < outside.size(); ++t) {
    const std::size_t j = outside[t];
    const double dist = sol.value(fm.distance[t]);
    const double best = sol.value(delta[t]);
    if (state.best_distance[j] - dist > cfg.eps_improve && std::abs(best - dist) <= cfg.eps_improve) {
      rec.improved[j] = true;
      for (std::size_t e = 0; e < extreme.size(); ++e) {
        if (sol.value(fm.lambda[t][e]) > cfg.eps_lambda) member[e] = true;
      }
    }
  }
  for (std::size_t e = 0; e < extreme.size(); ++e) {
    if (member[e]) set.members.push_back(extreme[e]);
  }
  if (set.members.empty()) {
    std::ostringstream msg;
    msg << "step " << a << " lowered the objective from " << previous << " to " << sol.objective
        << " but no DMU improved by more than eps_improve; tolerances are inconsistent";
    throw SolverError(msg.str());
  }
  set.certificate = detail::extract_certificate(fm, panel, sol);

  // Members of earlier sets keep their own data. Improved DMUs take the step
  // optimum; the rest are projected onto the cone of the new set.
  const SolverConfig& solver = cfg.solver;
  for (std::size_t j = 0; j < d.n(); ++j) {
    std::vector<double> lam(extreme.size(), 0.0);
    if (state.in_reference_union[j]) {
      const auto it = std::find(extreme.begin(), extreme.end(), j);
      lam[static_cast<std::size_t>(it - extreme.begin())] = 1.0;
      detail::set_record_row(d, extreme, j, std::move(lam), rec);
      continue;
    }
    const std::size_t t =
        static_cast<std::size_t>(std::find(outside.begin(), outside.end(), j) - outside.begin());
    if (rec.improved[j]) {
      for (std::size_t e = 0; e < extreme.size(); ++e) lam[e] = std::max(0.0, sol.value(fm.lambda[t][e]));
      detail::set_record_row(d, extreme, j, std::move(lam), rec);
      continue;
    }
    const ConeProjection p = project_onto_cone(d, panel, j, set.members, solver);
    for (std::size_t q = 0; q < set.members.size(); ++q) {
      const auto it = std::find(extreme.begin(), extreme.end(), set.members[q]);
      lam[static_cast<std::size_t>(it - extreme.begin())] = p.intensities[q];
    }
    detail::set_record_row(d, extreme, j, std::move(lam), rec);
    if (rec.distances[j] < state.best_distance[j] - cfg.eps_improve) {
      std::ostringstream msg;
      msg << "step " << a << ": " << d[j].id << " is closer to the new set (" << rec.distances[j]
          << ") than the step optimum allowed (" << state.best_distance[j] << ")";
      out.notes.push_back(msg.str());
    }
  }
  out.reference_set = std::move(set);
  out.record = std::move(rec);
  return out;
}

/// State after accepting a non-stop outcome.
inline SelectionState advance(const SelectionState& state, StepOutcome outcome) {
  if (outcome.stop || !outcome.reference_set) throw DataError("cannot advance on a stop outcome");
  SelectionState st = state;
  ReferenceSet& set = *outcome.reference_set;
  for (std::size_t h = 0; h < st.reference_sets.size(); ++h) {
    if (st.reference_sets[h].members == set.members) {
      st.notes.push_back("R" + std::to_string(set.step) + " coincides with R" + std::to_string(h + 1));
    }
  }
  for (std::size_t j = 0; j < st.best_distance.size(); ++j) {
    st.best_distance[j] = std::min(st.best_distance[j], outcome.record.distances[j]);
  }
  outcome.record.total_distance =
      std::accumulate(st.best_distance.begin(), st.best_distance.end(), 0.0);
  for (std::size_t k : set.members) st.in_reference_union[k] = true;
  double inside = 0.0;
  for (std::size_t j = 0; j < state.best_distance.size(); ++j) {
    if (state.in_reference_union[j]) inside += st.best_distance[j];
  }
  st.objectives.push_back(outcome.objective + inside);
  for (auto& n : outcome.notes) st.notes.push_back(std::move(n));
  st.reference_sets.push_back(std::move(set));
  st.steps.push_back(std::move(outcome.record));
  return st;
}

/// Runs the whole selection loop for a given extreme-efficient set.
inline SelectionState run_selection(const Dataset& d, std::span<const std::size_t> extreme,
                                    const SelectionConfig& cfg = {}) {
  if (cfg.max_steps < 1) throw DataError("max_steps must be at least 1");
  SelectionState st = start_state(d, extreme, select_first(d, extreme, cfg), cfg);
  while (st.step() < cfg.max_steps) {
    StepOutcome next = select_next(st, d, cfg);
    if (next.stop) {
      st.stop_objective = next.objective;
      st.converged = true;
      for (auto& n : next.notes) st.notes.push_back(std::move(n));
      return st;
    }
    st = advance(st, std::move(next));
  }
  st.notes.push_back("stopped at max_steps before convergence");
  return st;
}

inline SelectionState run_selection(const Dataset& d, const SelectionConfig& cfg = {}) {
  const EfficiencyClassification cls = extreme_efficient_set(d, cfg.efficiency);
  return run_selection(d, cls.extreme_set, cfg);
}

}  // namespace xbench

#endif  // XBENCH_SELECTION_HPP_
