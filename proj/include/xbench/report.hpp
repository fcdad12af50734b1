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

// Serialization of cross-benchmark results: a versioned JSON document, the
// long-format deviation CSV behind per-DMU deviation plots, and plain-text
// tables for reading at a terminal.

#ifndef XBENCH_REPORT_HPP_
#define XBENCH_REPORT_HPP_

#include <cmath>
#include <cstddef>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "xbench/dataset.hpp"
#include "xbench/selection.hpp"
#include "xbench/targets.hpp"

namespace xbench {

inline constexpr const char* kSchemaVersion = "xbench/1";

namespace detail {

using Json = nlohmann::ordered_json;

inline Json ids(const Dataset& d, const std::vector<std::size_t>& idx) {
  Json a = Json::array();
  for (std::size_t k : idx) a.push_back(d[k].id);
  return a;
}

inline Json certificate_json(const Dataset& d, std::span<const std::size_t> extreme,
                             const HyperplaneCertificate& c) {
  Json v = Json::object(), u = Json::object(), b = Json::object();
  for (std::size_t i = 0; i < d.m(); ++i) v[d.input_names()[i]] = c.input_weights[i];
  for (std::size_t r = 0; r < d.s(); ++r) u[d.output_names()[r]] = c.output_weights[r];
  for (std::size_t e = 0; e < extreme.size(); ++e) b[d[extreme[e]].id] = c.slacks[e];
  return Json{{"input_weights", v}, {"output_weights", u}, {"slacks", b}};
}

}  // namespace detail

/// Settings echoed into the result document.
inline nlohmann::ordered_json config_json(const SelectionConfig& cfg) {
  return {{"eps_lambda", cfg.eps_lambda},
          {"eps_improve", cfg.eps_improve},
          {"eps_stop", cfg.eps_stop},
          {"complementarity", milp::to_string(cfg.complementarity)},
          {"weight_cap", cfg.weight_cap},
          {"big_m_multiplier", cfg.big_m_multiplier},
          {"max_steps", cfg.max_steps},
          {"mip_rel_gap", cfg.solver.mip_rel_gap},
          {"feasibility_tol", cfg.solver.feasibility_tol},
          {"seed", cfg.solver.seed}};
}

inline nlohmann::ordered_json selection_json(const Dataset& d, const SelectionState& st) {
  using detail::Json;
  Json sets = Json::array();
  for (const ReferenceSet& r : st.reference_sets) {
    sets.push_back({{"step", r.step},
                    {"members", detail::ids(d, r.members)},
                    {"certificate", detail::certificate_json(d, st.extreme_set, r.certificate)}});
  }
  Json steps = Json::array();
  for (const StepRecord& rec : st.steps) {
    std::vector<std::size_t> improved;
    Json dist = Json::object();
    for (std::size_t j = 0; j < d.n(); ++j) {
      if (rec.improved[j]) improved.push_back(j);
      dist[d[j].id] = rec.distances[j];
    }
    steps.push_back({{"step", rec.step},
                     {"objective", rec.objective},
                     {"total_distance", rec.total_distance},
                     {"hyperplane_face", detail::ids(d, rec.face)},
                     {"improved", detail::ids(d, improved)},
                     {"distances", dist}});
  }
  Json best = Json::object();
  for (std::size_t j = 0; j < d.n(); ++j) best[d[j].id] = st.best_distance[j];
  Json stop = st.stop_objective ? Json(*st.stop_objective) : Json(nullptr);
  return {{"extreme_set", detail::ids(d, st.extreme_set)},
          {"big_m", st.big_m},
          {"converged", st.converged},
          {"objectives", st.objectives},
          {"stop_objective", stop},
          {"reference_sets", sets},
          {"steps", steps},
          {"best_distance", best},
          {"notes", st.notes}};
}

/// Full result document. Contains no timings so equal inputs give equal bytes.
inline nlohmann::ordered_json result_json(const Dataset& d, const CrossBenchmarkResult& res,
                                          const SelectionConfig& cfg) {
  using detail::Json;
  Json doc;
  doc["schema"] = kSchemaVersion;
  doc["config"] = config_json(cfg);
  doc["dataset"] = {{"n", d.n()}, {"inputs", d.input_names()}, {"outputs", d.output_names()}};
  if (res.classification) {
    std::vector<std::size_t> pareto;
    for (std::size_t j = 0; j < d.n(); ++j) {
      if (res.classification->pareto_efficient[j]) pareto.push_back(j);
    }
    doc["classification"] = {{"pareto_efficient", detail::ids(d, pareto)},
                             {"extreme_efficient", detail::ids(d, res.classification->extreme_set)}};
  }
  if (res.selection) doc["selection"] = selection_json(d, *res.selection);

  Json bundles = Json::array();
  for (const auto& face : res.bundles) {
    for (const TargetBundle& b : face) {
      const auto& members = res.selection->reference_sets[b.face - 1].members;
      Json lam = Json::object();
      for (std::size_t q = 0; q < members.size(); ++q) lam[d[members[q]].id] = b.intensities[q];
      bundles.push_back({{"dmu", d[b.dmu].id},
                         {"face", b.face},
                         {"distance", b.distance},
                         {"target_inputs", b.target_inputs},
                         {"target_outputs", b.target_outputs},
                         {"intensities", lam}});
    }
  }
  doc["targets"] = bundles;
  doc["targets_note"] =
      "distances are optimal; target coordinates are one optimal projection and may differ under "
      "alternative optima";

  Json dev = Json::array();
  if (res.deviations) {
    const DeviationMatrix& m = *res.deviations;
    for (std::size_t j = 0; j < m.n(); ++j) {
      for (std::size_t h = 0; h < m.faces(); ++h) {
        for (std::size_t f = 0; f < m.factors(); ++f) {
          dev.push_back({{"dmu", d[j].id}, {"face", h + 1}, {"factor", d.factor_name(f)},
                         {"deviation", m.at(j, h, f)}});
        }
      }
    }
  }
  doc["deviations"] = dev;
  doc["status"] = {{"complete", res.complete},
                   {"failed_stage", res.failed_stage},
                   {"error", res.error_message}};
  return doc;
}

/// Long-format CSV: dmu,face,factor,deviation (deviation as a fraction).
inline void write_deviation_csv(std::ostream& os, const Dataset& d, const DeviationMatrix& m) {
  os << "dmu,face,factor,deviation\n";
  for (std::size_t j = 0; j < m.n(); ++j) {
    for (std::size_t h = 0; h < m.faces(); ++h) {
      for (std::size_t f = 0; f < m.factors(); ++f) {
        os << detail::quote_csv(d[j].id) << ",R" << h + 1 << "," << detail::quote_csv(d.factor_name(f))
           << "," << detail::format_double(m.at(j, h, f)) << "\n";
      }
    }
  }
}

namespace detail {

inline std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  std::string s = os.str();
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

inline std::string percent(double fraction) {
  return fixed(std::round(fraction * 100.0) + 0.0, 0) + "%";
}

}  // namespace detail

/// Membership of every extreme unit in every reference set, with the
/// objective of each step underneath.
inline void write_selection_table(std::ostream& os, const Dataset& d, const SelectionState& st) {
  std::size_t width = 8;
  for (std::size_t k : st.extreme_set) width = std::max(width, d[k].id.size() + 2);
  os << std::left << std::setw(static_cast<int>(width)) << "DMU";
  for (const ReferenceSet& r : st.reference_sets) os << std::setw(9) << ("R" + std::to_string(r.step));
  os << "\n";
  for (std::size_t k : st.extreme_set) {
    os << std::setw(static_cast<int>(width)) << d[k].id;
    for (const ReferenceSet& r : st.reference_sets) {
      const bool in = std::find(r.members.begin(), r.members.end(), k) != r.members.end();
      os << std::setw(9) << (in ? "x" : "");
    }
    os << "\n";
  }
  os << std::setw(static_cast<int>(width)) << "Optimal";
  for (double v : st.objectives) os << std::setw(9) << detail::fixed(v, 3);
  os << std::right << "\n";
}

/// Actual data of each DMU followed by its target against every face, targets
/// to one decimal and deviations in whole percents.
inline void write_target_table(std::ostream& os, const Dataset& d, const CrossBenchmarkResult& res) {
  if (!res.deviations) return;
  const DeviationMatrix& m = *res.deviations;
  std::size_t width = 10;
  for (const auto& r : d.records()) width = std::max(width, r.id.size() + 2);
  const int w = static_cast<int>(width);
  os << std::left << std::setw(w) << "DMU" << std::setw(6) << "Set";
  for (std::size_t f = 0; f < d.m() + d.s(); ++f) os << std::setw(18) << d.factor_name(f);
  os << "\n";
  for (std::size_t j = 0; j < d.n(); ++j) {
    os << std::setw(w) << d[j].id << std::setw(6) << "";
    for (std::size_t f = 0; f < d.m() + d.s(); ++f) os << std::setw(18) << detail::format_double(d.factor(j, f));
    os << "\n";
    for (std::size_t h = 0; h < m.faces(); ++h) {
      const TargetBundle& b = res.bundles[h][j];
      os << std::setw(w) << "" << std::setw(6) << ("R" + std::to_string(h + 1));
      for (std::size_t f = 0; f < d.m() + d.s(); ++f) {
        const double t = f < d.m() ? b.target_inputs[f] : b.target_outputs[f - d.m()];
        os << std::setw(18) << (detail::fixed(t, 1) + " (" + detail::percent(m.at(j, h, f)) + ")");
      }
      os << "\n";
    }
  }
  os << std::right;
}

}  // namespace xbench

#endif  // XBENCH_REPORT_HPP_
