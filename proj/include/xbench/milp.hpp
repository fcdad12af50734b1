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

// Solver-agnostic LP/MILP model description and its solution through HiGHS.
//
// A ModelSpec is plain data: bounded variables (continuous or binary), linear
// rows, SOS1 groups and a linear objective. solve() hands the model to HiGHS.
// HiGHS has no special ordered sets, so SOS1 groups are enforced here by
// best-first branching (each branch fixes one side of a group to zero) with
// HiGHS solving every node. Every optimal point is re-checked against the
// ModelSpec before it is returned.

#ifndef XBENCH_MILP_HPP_
#define XBENCH_MILP_HPP_

#include <Highs.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "xbench/errors.hpp"

namespace xbench::milp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Handle to a variable of one ModelSpec.
struct VarId {
  std::size_t index = 0;
  friend auto operator<=>(const VarId&, const VarId&) = default;
};

enum class VarType { kContinuous, kBinary };

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInf;
  VarType type = VarType::kContinuous;
};

struct Term {
  VarId var;
  double coef = 0.0;
};

/// sum(coef * var) + constant
class LinearExpr {
 public:
  LinearExpr() = default;
  explicit LinearExpr(double constant) : constant_(constant) {}
  LinearExpr(VarId v, double coef = 1.0) { add(v, coef); }  // NOLINT: implicit by design of call sites

  LinearExpr& add(VarId v, double coef = 1.0) {
    if (coef != 0.0) terms_.push_back({v, coef});
    return *this;
  }
  LinearExpr& add(const LinearExpr& other, double scale = 1.0) {
    for (const auto& t : other.terms_) add(t.var, scale * t.coef);
    constant_ += scale * other.constant_;
    return *this;
  }
  LinearExpr& add_constant(double c) {
    constant_ += c;
    return *this;
  }

  const std::vector<Term>& terms() const { return terms_; }
  double constant() const { return constant_; }

  double evaluate(std::span<const double> values) const {
    double v = constant_;
    for (const auto& t : terms_) v += t.coef * values[t.var.index];
    return v;
  }

 private:
  std::vector<Term> terms_;
  double constant_ = 0.0;
};

enum class Sense { kLessEqual, kEqual, kGreaterEqual };
enum class ObjectiveSense { kMinimize, kMaximize };

/// Row: sum(terms) <sense> rhs. Duplicate variables are merged on insertion.
struct Constraint {
  std::string name;
  std::vector<Term> terms;
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;
};

class ModelSpec {
 public:
  explicit ModelSpec(std::string name = "model") : name_(std::move(name)) {}

  VarId add_variable(std::string name, double lower = 0.0, double upper = kInf,
                     VarType type = VarType::kContinuous) {
    if (std::isnan(lower) || std::isnan(upper) || lower > upper) {
      throw SolverError("variable '" + name + "' has empty bounds");
    }
    if (type == VarType::kBinary) {
      lower = std::max(lower, 0.0);
      upper = std::min(upper, 1.0);
    }
    variables_.push_back({std::move(name), lower, upper, type});
    return VarId{variables_.size() - 1};
  }
  VarId add_binary(std::string name) {
    return add_variable(std::move(name), 0.0, 1.0, VarType::kBinary);
  }

  /// Adds lhs <sense> rhs; the constant of lhs moves to the right-hand side.
  void add_constraint(const LinearExpr& lhs, Sense sense, double rhs, std::string name = {}) {
    Constraint c;
    c.name = name.empty() ? "c" + std::to_string(constraints_.size()) : std::move(name);
    c.sense = sense;
    c.rhs = rhs - lhs.constant();
    std::unordered_map<std::size_t, std::size_t> slot;
    for (const auto& t : lhs.terms()) {
      check_var(t.var);
      auto [it, fresh] = slot.emplace(t.var.index, c.terms.size());
      if (fresh) {
        c.terms.push_back(t);
      } else {
        c.terms[it->second].coef += t.coef;
      }
    }
    std::erase_if(c.terms, [](const Term& t) { return t.coef == 0.0; });
    constraints_.push_back(std::move(c));
  }

  /// At most one of `vars` may be nonzero.
  void add_sos1(std::vector<VarId> vars) {
    if (vars.size() < 2) throw SolverError("an SOS1 group needs at least two variables");
    for (VarId v : vars) check_var(v);
    sos1_.push_back(std::move(vars));
  }

  void set_objective(ObjectiveSense sense, const LinearExpr& expr) {
    for (const auto& t : expr.terms()) check_var(t.var);
    objective_sense_ = sense;
    objective_ = expr;
  }

  void set_upper(VarId v, double upper) {
    check_var(v);
    variables_[v.index].upper = upper;
  }

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }
  const std::vector<Variable>& variables() const { return variables_; }
  const Variable& variable(VarId v) const { return variables_[v.index]; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const std::vector<std::vector<VarId>>& sos1_groups() const { return sos1_; }
  ObjectiveSense objective_sense() const { return objective_sense_; }
  const LinearExpr& objective() const { return objective_; }
  std::size_t num_variables() const { return variables_.size(); }

  bool has_binaries() const {
    return std::any_of(variables_.begin(), variables_.end(),
                       [](const Variable& v) { return v.type == VarType::kBinary; });
  }

 private:
  void check_var(VarId v) const {
    if (v.index >= variables_.size()) throw SolverError("constraint references an undeclared variable");
  }

  std::string name_;
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  std::vector<std::vector<VarId>> sos1_;
  ObjectiveSense objective_sense_ = ObjectiveSense::kMinimize;
  LinearExpr objective_;
};

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kLimitHit };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
    case SolveStatus::kLimitHit: return "limit-hit";
  }
  return "?";
}

struct SolverStats {
  std::int64_t backend_solves = 0;
  std::int64_t mip_nodes = 0;   // summed over backend MIP solves
  std::int64_t sos_nodes = 0;   // nodes of the SOS1 branching tree
  double wall_seconds = 0.0;
};

struct Solution {
  SolveStatus status = SolveStatus::kInfeasible;
  double objective = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> values;  // empty unless a point is available
  SolverStats stats;

  bool optimal() const { return status == SolveStatus::kOptimal; }
  double value(VarId v) const { return values.at(v.index); }
  double value(const LinearExpr& e) const { return e.evaluate(values); }
};

struct SolverConfig {
  double mip_rel_gap = 1e-9;
  double feasibility_tol = 1e-6;
  /// Values at or below this magnitude count as zero for SOS1 branching.
  double sos_zero_tol = 1e-9;
  double time_limit_seconds = kInf;
  std::int64_t sos_node_limit = 200000;
  int seed = 0;
  /// After a MIP solve, fix the integers and re-solve the LP so the reported
  /// point is a clean vertex of the fixed problem.
  bool polish_mip = true;
  /// When set, every solved model is also written as <dir>/<model name>.lp.
  std::optional<std::filesystem::path> dump_lp_dir;
};

// ---------------------------------------------------------------------------
// Independent checks.

/// Human-readable list of constraint, bound, integrality and SOS1 violations
/// larger than `tol`. Row violations are measured relative to
/// max(1, |rhs|, largest |coef * value| of the row).
inline std::vector<std::string> check_feasibility(const ModelSpec& model,
                                                  std::span<const double> values,
                                                  double tol) {
  std::vector<std::string> out;
  if (values.size() != model.num_variables()) {
    out.push_back("value vector has wrong size");
    return out;
  }
  for (std::size_t i = 0; i < model.num_variables(); ++i) {
    const Variable& v = model.variables()[i];
    const double x = values[i];
    if (!std::isfinite(x)) {
      out.push_back(v.name + " is not finite");
      continue;
    }
    if (x < v.lower - tol * std::max(1.0, std::abs(v.lower))) {
      out.push_back(v.name + " below lower bound");
    }
    if (x > v.upper + tol * std::max(1.0, std::abs(v.upper))) {
      out.push_back(v.name + " above upper bound");
    }
    if (v.type == VarType::kBinary && std::abs(x - std::round(x)) > tol) {
      out.push_back(v.name + " is fractional");
    }
  }
  for (const auto& c : model.constraints()) {
    double act = 0.0;
    double scale = std::max(1.0, std::abs(c.rhs));
    for (const auto& t : c.terms) {
      const double contrib = t.coef * values[t.var.index];
      act += contrib;
      scale = std::max(scale, std::abs(contrib));
    }
    double viol = 0.0;
    if (c.sense != Sense::kGreaterEqual) viol = std::max(viol, act - c.rhs);
    if (c.sense != Sense::kLessEqual) viol = std::max(viol, c.rhs - act);
    if (viol > tol * scale) {
      std::ostringstream msg;
      msg << c.name << " violated by " << viol;
      out.push_back(msg.str());
    }
  }
  for (std::size_t g = 0; g < model.sos1_groups().size(); ++g) {
    int nonzero = 0;
    for (VarId v : model.sos1_groups()[g]) nonzero += std::abs(values[v.index]) > tol ? 1 : 0;
    if (nonzero > 1) out.push_back("SOS1 group " + std::to_string(g) + " has several nonzeros");
  }
  return out;
}

// ---------------------------------------------------------------------------
// LP text format.

namespace backend {

inline std::string lp_name(const std::string& raw, std::size_t index,
                           std::unordered_set<std::string>& used) {
  std::string s;
  for (char c : raw) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '_' || c == '.' || c == '(' || c == ')' || c == '[' || c == ']';
    s.push_back(ok ? c : '_');
  }
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0])) || s[0] == '.' ||
      s[0] == 'e' || s[0] == 'E') {
    s = "v_" + s;
  }
  if (!used.insert(s).second) {
    s += "_" + std::to_string(index);
    used.insert(s);
  }
  return s;
}

inline void lp_terms(std::ostream& os, const std::vector<Term>& terms,
                     const std::vector<std::string>& names) {
  if (terms.empty()) {
    os << " 0 " << names.front();
    return;
  }
  for (const auto& t : terms) {
    os << (t.coef < 0 ? " - " : " + ") << std::abs(t.coef) << " " << names[t.var.index];
  }
}

}  // namespace backend

/// CPLEX LP text rendering of the model, including bounds, binaries and SOS1.
inline std::string to_lp_format(const ModelSpec& model) {
  std::ostringstream os;
  os.precision(17);
  std::unordered_set<std::string> used;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < model.num_variables(); ++i) {
    names.push_back(backend::lp_name(model.variables()[i].name, i, used));
  }
  if (names.empty()) names.push_back("dummy");
  os << "\\ " << model.name() << "\n";
  if (model.objective().constant() != 0.0) {
    os << "\\ objective constant " << model.objective().constant() << "\n";
  }
  os << (model.objective_sense() == ObjectiveSense::kMinimize ? "Minimize" : "Maximize") << "\n";
  os << " obj:";
  backend::lp_terms(os, model.objective().terms(), names);
  os << "\nSubject To\n";
  std::unordered_set<std::string> row_names;
  for (std::size_t r = 0; r < model.constraints().size(); ++r) {
    const auto& c = model.constraints()[r];
    os << " " << backend::lp_name(c.name, r, row_names) << ":";
    backend::lp_terms(os, c.terms, names);
    os << (c.sense == Sense::kLessEqual ? " <= " : c.sense == Sense::kEqual ? " = " : " >= ")
       << c.rhs << "\n";
  }
  os << "Bounds\n";
  for (std::size_t i = 0; i < model.num_variables(); ++i) {
    const auto& v = model.variables()[i];
    if (v.type == VarType::kBinary) continue;
    if (std::isinf(v.lower) && std::isinf(v.upper)) {
      os << " " << names[i] << " free\n";
    } else if (std::isinf(v.upper)) {
      if (v.lower != 0.0) os << " " << names[i] << " >= " << v.lower << "\n";
    } else {
      os << " ";
      if (std::isinf(v.lower)) {
        os << "-inf";
      } else {
        os << v.lower;
      }
      os << " <= " << names[i] << " <= " << v.upper << "\n";
    }
  }
  bool any_binary = false;
  for (std::size_t i = 0; i < model.num_variables(); ++i) {
    if (model.variables()[i].type != VarType::kBinary) continue;
    if (!any_binary) os << "Binaries\n";
    any_binary = true;
    os << " " << names[i] << "\n";
  }
  if (!model.sos1_groups().empty()) {
    os << "SOS\n";
    for (std::size_t g = 0; g < model.sos1_groups().size(); ++g) {
      os << " s" << g << ": S1::";
      const auto& grp = model.sos1_groups()[g];
      for (std::size_t k = 0; k < grp.size(); ++k) os << " " << names[grp[k].index] << ":" << (k + 1);
      os << "\n";
    }
  }
  os << "End\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Solving.

namespace backend {

struct BackendResult {
  SolveStatus status = SolveStatus::kInfeasible;
  double objective = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> values;
  std::int64_t mip_nodes = 0;
};

inline HighsLp to_highs(const ModelSpec& model, const std::vector<char>& fixed_zero,
                        const std::vector<double>* fix_values, bool* trivially_infeasible) {
  HighsLp lp;
  const auto nv = static_cast<HighsInt>(model.num_variables());
  lp.num_col_ = nv;
  lp.num_row_ = static_cast<HighsInt>(model.constraints().size());
  lp.col_cost_.assign(nv, 0.0);
  for (const auto& t : model.objective().terms()) lp.col_cost_[t.var.index] += t.coef;
  lp.offset_ = model.objective().constant();
  lp.sense_ = model.objective_sense() == ObjectiveSense::kMinimize ? ObjSense::kMinimize
                                                                   : ObjSense::kMaximize;
  bool any_int = false;
  lp.integrality_.assign(nv, HighsVarType::kContinuous);
  for (HighsInt i = 0; i < nv; ++i) {
    const auto& v = model.variables()[i];
    double lo = v.lower;
    double hi = v.upper;
    if (!fixed_zero.empty() && fixed_zero[i]) {
      if (lo > 0.0 || hi < 0.0) *trivially_infeasible = true;
      lo = 0.0;
      hi = 0.0;
    }
    if (v.type == VarType::kBinary) {
      if (fix_values != nullptr) {
        lo = hi = std::round((*fix_values)[i]);
      } else {
        lp.integrality_[i] = HighsVarType::kInteger;
        any_int = true;
      }
    }
    lp.col_lower_.push_back(std::isinf(lo) ? -kHighsInf : lo);
    lp.col_upper_.push_back(std::isinf(hi) ? kHighsInf : hi);
  }
  if (!any_int) lp.integrality_.clear();
  lp.a_matrix_.format_ = MatrixFormat::kRowwise;
  lp.a_matrix_.num_col_ = nv;
  lp.a_matrix_.num_row_ = lp.num_row_;
  lp.a_matrix_.start_.assign(1, 0);
  lp.a_matrix_.index_.clear();
  lp.a_matrix_.value_.clear();
  for (const auto& c : model.constraints()) {
    for (const auto& t : c.terms) {
      lp.a_matrix_.index_.push_back(static_cast<HighsInt>(t.var.index));
      lp.a_matrix_.value_.push_back(t.coef);
    }
    lp.a_matrix_.start_.push_back(static_cast<HighsInt>(lp.a_matrix_.index_.size()));
    lp.row_lower_.push_back(c.sense == Sense::kLessEqual ? -kHighsInf : c.rhs);
    lp.row_upper_.push_back(c.sense == Sense::kGreaterEqual ? kHighsInf : c.rhs);
  }
  return lp;
}

inline BackendResult run_highs(const ModelSpec& model, const SolverConfig& cfg,
                               const std::vector<char>& fixed_zero,
                               const std::vector<double>* fix_values, double time_left) {
  BackendResult res;
  bool trivially_infeasible = false;
  HighsLp lp = to_highs(model, fixed_zero, fix_values, &trivially_infeasible);
  if (trivially_infeasible) return res;
  const bool is_mip = !lp.integrality_.empty();

  Highs highs;
  highs.setOptionValue("output_flag", false);
  highs.setOptionValue("random_seed", cfg.seed);
  highs.setOptionValue("mip_rel_gap", cfg.mip_rel_gap);
  highs.setOptionValue("mip_abs_gap", 1e-10);
  highs.setOptionValue("primal_feasibility_tolerance", std::min(1e-7, cfg.feasibility_tol));
  highs.setOptionValue("dual_feasibility_tolerance", 1e-8);
  highs.setOptionValue("mip_feasibility_tolerance", std::min(1e-9, cfg.feasibility_tol));
  if (std::isfinite(time_left)) highs.setOptionValue("time_limit", std::max(time_left, 1e-3));
  if (highs.passModel(std::move(lp)) == HighsStatus::kError) {
    throw SolverError("HiGHS rejected model '" + model.name() + "'");
  }
  if (highs.run() == HighsStatus::kError) {
    throw SolverError("HiGHS failed on model '" + model.name() + "'");
  }
  HighsModelStatus st = highs.getModelStatus();
  if (st == HighsModelStatus::kUnboundedOrInfeasible) {
    // Presolve could not tell; rerun without it to get a definite answer.
    highs.setOptionValue("presolve", "off");
    highs.run();
    st = highs.getModelStatus();
  }
  res.mip_nodes = is_mip ? static_cast<std::int64_t>(highs.getInfo().mip_node_count) : 0;
  switch (st) {
    case HighsModelStatus::kOptimal:
      res.status = SolveStatus::kOptimal;
      break;
    case HighsModelStatus::kInfeasible:
      res.status = SolveStatus::kInfeasible;
      return res;
    case HighsModelStatus::kUnbounded:
    case HighsModelStatus::kUnboundedOrInfeasible:
      res.status = SolveStatus::kUnbounded;
      return res;
    case HighsModelStatus::kTimeLimit:
    case HighsModelStatus::kIterationLimit:
    case HighsModelStatus::kSolutionLimit:
    case HighsModelStatus::kInterrupt:
      res.status = SolveStatus::kLimitHit;
      if (highs.getSolution().value_valid) {
        res.values = highs.getSolution().col_value;
        res.objective = highs.getInfo().objective_function_value;
      }
      return res;
    default:
      throw SolverError("HiGHS returned status '" + highs.modelStatusToString(st) +
                        "' on model '" + model.name() + "'");
  }
  res.objective = highs.getInfo().objective_function_value;
  res.values = highs.getSolution().col_value;
  return res;
}

// MIP solve followed by an optional LP re-solve with the integers fixed.
inline BackendResult solve_node(const ModelSpec& model, const SolverConfig& cfg,
                                const std::vector<char>& fixed_zero, double time_left,
                                SolverStats& stats) {
  BackendResult r = run_highs(model, cfg, fixed_zero, nullptr, time_left);
  ++stats.backend_solves;
  stats.mip_nodes += r.mip_nodes;
  if (r.status == SolveStatus::kOptimal && cfg.polish_mip && model.has_binaries()) {
    BackendResult p = run_highs(model, cfg, fixed_zero, &r.values, kInf);
    ++stats.backend_solves;
    const double tol = 1e-7 * std::max(1.0, std::abs(r.objective));
    if (p.status == SolveStatus::kOptimal && std::abs(p.objective - r.objective) <= tol) {
      p.mip_nodes = r.mip_nodes;
      return p;
    }
  }
  return r;
}

// Index of the most violated SOS1 group, or npos when all are satisfied.
inline std::size_t most_violated_group(const ModelSpec& model, const std::vector<double>& x,
                                       double zero_tol) {
  std::size_t best = static_cast<std::size_t>(-1);
  double best_score = 0.0;
  for (std::size_t g = 0; g < model.sos1_groups().size(); ++g) {
    double first = 0.0;
    double second = 0.0;
    for (VarId v : model.sos1_groups()[g]) {
      const double a = std::abs(x[v.index]);
      if (a > first) {
        second = first;
        first = a;
      } else if (a > second) {
        second = a;
      }
    }
    if (second > zero_tol && second > best_score) {
      best_score = second;
      best = g;
    }
  }
  return best;
}

inline void dump_lp(const ModelSpec& model, const SolverConfig& cfg) {
  if (!cfg.dump_lp_dir) return;
  std::filesystem::create_directories(*cfg.dump_lp_dir);
  std::ofstream out(*cfg.dump_lp_dir / (model.name() + ".lp"));
  if (!out) throw DataError("cannot write LP dump for '" + model.name() + "'");
  out << to_lp_format(model);
}

}  // namespace backend

/// Solves `model` to proven optimality (within cfg.mip_rel_gap). Throws
/// SolverError on backend failure or when the returned point fails the
/// independent feasibility re-check.
inline Solution solve(const ModelSpec& model, const SolverConfig& cfg = {}) {
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  backend::dump_lp(model, cfg);

  Solution sol;
  const std::vector<char> no_fix;
  if (model.sos1_groups().empty()) {
    backend::BackendResult r =
        backend::solve_node(model, cfg, no_fix, cfg.time_limit_seconds, sol.stats);
    sol.status = r.status;
    sol.objective = r.objective;
    sol.values = std::move(r.values);
  } else {
    // Best-first SOS1 branching. Nodes are evaluated when created, so the first
    // popped node whose point satisfies every group is optimal.
    struct Node {
      double key;  // bound in minimization form
      std::int64_t id;
      std::vector<char> fixed_zero;
      backend::BackendResult result;
    };
    auto worse = [](const Node& a, const Node& b) {
      return a.key != b.key ? a.key > b.key : a.id > b.id;
    };
    std::priority_queue<Node, std::vector<Node>, decltype(worse)> open(worse);
    const double sign = model.objective_sense() == ObjectiveSense::kMinimize ? 1.0 : -1.0;
    std::int64_t next_id = 0;
    bool limit_hit = false;
    bool unbounded = false;

    auto evaluate = [&](std::vector<char> fixed) {
      const double left = cfg.time_limit_seconds - elapsed();
      if (left <= 0.0) {
        limit_hit = true;
        return;
      }
      ++sol.stats.sos_nodes;
      backend::BackendResult r = backend::solve_node(model, cfg, fixed, left, sol.stats);
      if (r.status == SolveStatus::kInfeasible) return;
      if (r.status == SolveStatus::kUnbounded) {
        unbounded = true;
        return;
      }
      if (r.status == SolveStatus::kLimitHit) {
        limit_hit = true;
        return;
      }
      open.push(Node{sign * r.objective, next_id++, std::move(fixed), std::move(r)});
    };

    evaluate(std::vector<char>(model.num_variables(), 0));
    bool found = false;
    while (!open.empty() && !unbounded) {
      Node node = open.top();
      open.pop();
      const std::size_t g = backend::most_violated_group(model, node.result.values, cfg.sos_zero_tol);
      if (g == static_cast<std::size_t>(-1)) {
        sol.status = SolveStatus::kOptimal;
        sol.objective = node.result.objective;
        sol.values = std::move(node.result.values);
        found = true;
        break;
      }
      if (sol.stats.sos_nodes >= cfg.sos_node_limit) {
        limit_hit = true;
        break;
      }
      const auto& group = model.sos1_groups()[g];
      std::vector<std::size_t> nonzero;
      for (std::size_t k = 0; k < group.size(); ++k) {
        if (std::abs(node.result.values[group[k].index]) > cfg.sos_zero_tol) nonzero.push_back(k);
      }
      // Split between nonzero members: left child zeroes [0, cut), right [cut, end).
      const std::size_t cut = nonzero[(nonzero.size() + 1) / 2 - 1] + 1;
      std::vector<char> left = node.fixed_zero;
      std::vector<char> right = node.fixed_zero;
      for (std::size_t k = 0; k < group.size(); ++k) (k < cut ? left : right)[group[k].index] = 1;
      evaluate(std::move(left));
      evaluate(std::move(right));
    }
    if (!found) {
      sol.status = unbounded ? SolveStatus::kUnbounded
                   : limit_hit ? SolveStatus::kLimitHit
                               : SolveStatus::kInfeasible;
    }
  }
  sol.stats.wall_seconds = elapsed();

  if (sol.optimal()) {
    const auto violations = check_feasibility(model, sol.values, cfg.feasibility_tol);
    if (!violations.empty()) {
      throw SolverError("backend optimum of '" + model.name() +
                        "' fails the feasibility re-check: " + violations.front());
    }
  }
  return sol;
}

// ---------------------------------------------------------------------------
// Linearization devices.

/// |expr| linearized as p + n with expr = p - n, p, n >= 0.
struct AbsDeviation {
  VarId pos;
  VarId neg;
  double weight = 1.0;

  /// weight * (p + n), the term to place in an objective or distance.
  LinearExpr term() const {
    LinearExpr e;
    e.add(pos, weight).add(neg, weight);
    return e;
  }
};

inline AbsDeviation add_abs_deviation(ModelSpec& model, const LinearExpr& expr, double weight,
                                      const std::string& name = "dev") {
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw SolverError("abs deviation '" + name + "' needs a positive weight");
  }
  AbsDeviation dev;
  dev.pos = model.add_variable(name + "_p");
  dev.neg = model.add_variable(name + "_n");
  dev.weight = weight;
  LinearExpr row = expr;
  row.add(dev.pos, -1.0).add(dev.neg, 1.0);
  model.add_constraint(row, Sense::kEqual, 0.0, name + "_split");
  return dev;
}

enum class ComplementarityMode { kSos1, kBigM };

inline const char* to_string(ComplementarityMode m) {
  return m == ComplementarityMode::kSos1 ? "sos1" : "bigm";
}

/// first * second = 0 for two nonnegative variables. Caps bound each side in
/// big-M mode and are ignored in SOS1 mode.
struct ComplementarityPair {
  VarId first;
  VarId second;
  double first_cap = kInf;
  double second_cap = kInf;
};

/// Registers each pair as an SOS1 group, or adds a binary z with
/// first <= cap_first * z and second <= cap_second * (1 - z).
inline void encode_complementarity(ModelSpec& model, std::span<const ComplementarityPair> pairs,
                                   ComplementarityMode mode) {
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto& pr = pairs[p];
    if (mode == ComplementarityMode::kSos1) {
      model.add_sos1({pr.first, pr.second});
      continue;
    }
    if (!std::isfinite(pr.first_cap) || !std::isfinite(pr.second_cap) || pr.first_cap <= 0.0 ||
        pr.second_cap <= 0.0) {
      throw SolverError("big-M complementarity needs finite positive caps for pair " +
                        std::to_string(p));
    }
    const std::string base = model.variable(pr.first).name;
    const VarId z = model.add_binary(base + "_on");
    LinearExpr a(pr.first);
    a.add(z, -pr.first_cap);
    model.add_constraint(a, Sense::kLessEqual, 0.0, base + "_cap");
    LinearExpr b(pr.second);
    b.add(z, pr.second_cap);
    model.add_constraint(b, Sense::kLessEqual, pr.second_cap, base + "_off");
  }
}

/// Throws ComplementarityError when first * second > tol for some pair.
inline void check_complementarity(const Solution& sol, std::span<const ComplementarityPair> pairs,
                                  double tol = 1e-6) {
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const double prod = sol.value(pairs[p].first) * sol.value(pairs[p].second);
    if (prod > tol) {
      std::ostringstream msg;
      msg << "complementarity pair " << p << " violated (product " << prod
          << "); increase the big-M caps";
      throw ComplementarityError(msg.str());
    }
  }
}

/// Throws ComplementarityError when a big-M side sits at its cap, where the
/// cap may be cutting off better solutions.
inline void check_caps(const Solution& sol, std::span<const ComplementarityPair> pairs,
                       double rel_tol = 1e-9) {
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto& pr = pairs[p];
    const bool first_at = sol.value(pr.first) >= pr.first_cap * (1.0 - rel_tol);
    const bool second_at = sol.value(pr.second) >= pr.second_cap * (1.0 - rel_tol);
    if (first_at || second_at) {
      throw ComplementarityError("complementarity pair " + std::to_string(p) +
                                 " reached its big-M cap; increase the caps");
    }
  }
}

}  // namespace xbench::milp

#endif  // XBENCH_MILP_HPP_
