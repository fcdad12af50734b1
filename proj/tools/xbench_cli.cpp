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

// xbench: cross-benchmarking from the command line.
//
//   xbench run      --data panel.csv --out results/
//   xbench classify --data panel.csv
//   xbench verify   --data small.csv
//
// Exit status: 0 success, 1 invalid input or options, 2 solver failure,
// 3 verification mismatch.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "xbench/xbench.hpp"

namespace {

namespace fs = std::filesystem;

struct RunConfig {
  std::string data;
  std::string out = "xbench-out";
  std::string dump_lp;
  std::string mode = "sos1";
  bool full_model = false;
  std::size_t max_extreme = 12;
  xbench::SelectionConfig selection;
};

class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, std::exception_ptr inner, const std::string& what)
      : std::runtime_error(what), stage_(std::move(stage)), inner_(std::move(inner)) {}
  const std::string& stage() const { return stage_; }
  const std::exception_ptr& inner() const { return inner_; }

 private:
  std::string stage_;
  std::exception_ptr inner_;
};

void add_common(CLI::App& cmd, RunConfig& rc) {
  auto& s = rc.selection;
  cmd.add_option("--data", rc.data, "input CSV (dmu, in:<name>..., out:<name>...)")->required();
  cmd.add_option("--eps-lambda", s.eps_lambda, "intensity threshold for active referents")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--eps-improve", s.eps_improve, "distance decrease counted as an improvement")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--eps-stop", s.eps_stop, "objective change that stops the selection")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--feasibility-tol", s.solver.feasibility_tol, "solver feasibility tolerance")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--mip-gap", s.solver.mip_rel_gap, "relative MIP optimality gap")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--complementarity", rc.mode, "encoding of lambda_k * b_k = 0")
      ->check(CLI::IsMember({"sos1", "bigm"}));
  cmd.add_option("--max-steps", s.max_steps, "maximum number of reference sets")
      ->check(CLI::Range(std::size_t{1}, std::size_t{100000}));
  cmd.add_option("--weight-cap", s.weight_cap, "bound on hyperplane weights under big-M")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--slack-cap", s.slack_cap, "bound on hyperplane slacks under big-M")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--seed", s.solver.seed, "solver random seed");
  cmd.add_option("--dump-lp", rc.dump_lp, "directory receiving every model in LP format");
}

void finalize(RunConfig& rc) {
  rc.selection.complementarity =
      rc.mode == "bigm" ? xbench::milp::ComplementarityMode::kBigM : xbench::milp::ComplementarityMode::kSos1;
  if (!rc.dump_lp.empty()) rc.selection.solver.dump_lp_dir = fs::path(rc.dump_lp);
  rc.selection.efficiency.solver = rc.selection.solver;
}

xbench::Dataset load(const RunConfig& rc) {
  try {
    return xbench::load_dataset(rc.data);
  } catch (const xbench::DataError& e) {
    throw StageError("ingest", std::current_exception(), e.what());
  }
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw xbench::DataError("cannot write " + path.string());
  out << content;
}

void print_sequence(std::ostream& os, const std::vector<double>& v) {
  for (std::size_t a = 0; a < v.size(); ++a) os << (a ? " " : "") << std::fixed << std::setprecision(3) << v[a];
  os << std::defaultfloat << "\n";
}

int cmd_run(RunConfig& rc) {
  finalize(rc);
  const xbench::Dataset d = load(rc);
  xbench::CrossBenchmarkConfig cfg;
  cfg.selection = rc.selection;
  const xbench::CrossBenchmarkResult res = xbench::cross_benchmark(d, cfg);

  const fs::path out(rc.out);
  fs::create_directories(out);
  write_file(out / "result.json", xbench::result_json(d, res, rc.selection).dump(2) + "\n");
  if (res.deviations) {
    std::ostringstream csv;
    xbench::write_deviation_csv(csv, d, *res.deviations);
    write_file(out / "deviations.csv", csv.str());
  }
  if (!res.complete) throw StageError(res.failed_stage, res.error, res.error_message);

  const xbench::SelectionState& st = *res.selection;
  std::ostringstream tables;
  xbench::write_selection_table(tables, d, st);
  tables << "\n";
  xbench::write_target_table(tables, d, res);
  write_file(out / "tables.txt", tables.str());

  std::cout << "extreme efficient: " << st.extreme_set.size() << " of " << d.n() << "\n";
  std::cout << "reference sets: A = " << st.step() << (st.converged ? "" : " (not converged)") << "\n";
  std::cout << "objectives: ";
  print_sequence(std::cout, st.objectives);
  std::cout << "\n";
  xbench::write_selection_table(std::cout, d, st);
  for (const auto& note : st.notes) std::cout << "note: " << note << "\n";
  std::cout << "\nwrote " << (out / "result.json").string() << ", " << (out / "deviations.csv").string()
            << ", " << (out / "tables.txt").string() << "\n";
  return 0;
}

int cmd_classify(RunConfig& rc) {
  finalize(rc);
  const xbench::Dataset d = load(rc);
  xbench::EfficiencyClassification cls;
  try {
    cls = xbench::extreme_efficient_set(d, rc.selection.efficiency);
  } catch (const std::exception& e) {
    throw StageError("classification", std::current_exception(), e.what());
  }
  for (std::size_t k : cls.extreme_set) std::cout << d[k].id << "\n";
  std::cerr << cls.extreme_set.size() << " extreme efficient of " << d.n() << " DMUs\n";
  return 0;
}

int cmd_verify(RunConfig& rc) {
  finalize(rc);
  const xbench::Dataset d = load(rc);
  xbench::CrossBenchmarkConfig cfg;
  cfg.selection = rc.selection;
  cfg.selection.verify_full_step_model = rc.full_model || d.n() <= 8;
  xbench::CrossBenchmarkResult res = xbench::cross_benchmark(d, cfg);
  if (!res.complete) {
    try {
      std::rethrow_exception(res.error);
    } catch (const xbench::VerificationError&) {
      std::cout << "FAIL full step model agrees with the simplified model: " << res.error_message << "\n";
      throw StageError(res.failed_stage, res.error, res.error_message);
    } catch (...) {
      throw StageError(res.failed_stage, res.error, res.error_message);
    }
  }
  std::vector<xbench::CheckResult> checks = xbench::check_run(d, res, cfg.selection);
  if (cfg.selection.verify_full_step_model) {
    checks.push_back({"full step model agrees with the simplified model", true, {}});
  }
  xbench::CheckResult joint{"joint and per-DMU target distances agree", true, {}};
  for (const auto& face : res.selection->reference_sets) {
    const auto a = xbench::closest_targets_for_face(d, face, cfg.selection.solver, false);
    const auto b = xbench::closest_targets_for_face(d, face, cfg.selection.solver, true);
    for (std::size_t j = 0; j < d.n(); ++j) {
      if (std::abs(a[j].distance - b[j].distance) > 1e-9) {
        xbench::detail::fail(joint, d[j].id + " under R" + std::to_string(face.step));
      }
    }
  }
  checks.push_back(joint);

  const auto& extreme = res.selection->extreme_set;
  bool oracle_ran = false;
  if (extreme.size() <= rc.max_extreme) {
    xbench::OracleConfig ocfg;
    ocfg.max_extreme = rc.max_extreme;
    ocfg.eps_stop = cfg.selection.eps_stop;
    ocfg.solver = cfg.selection.solver;
    const auto faces = xbench::enumerate_faces(d, extreme, ocfg);
    const auto oracle = xbench::brute_force_selection(d, faces, ocfg);
    checks.push_back(xbench::check_sequences_agree("oracle/MILP D sequences agree",
                                                   res.selection->objectives, oracle.objectives));
    oracle_ran = true;
    std::cout << "faces enumerated: " << faces.size() << "\n";
    std::cout << "oracle objectives: ";
    print_sequence(std::cout, oracle.objectives);
  }
  std::cout << "MILP objectives:   ";
  print_sequence(std::cout, res.selection->objectives);

  bool ok = true;
  for (const auto& c : checks) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name;
    if (!c.passed) std::cout << ": " << c.detail;
    std::cout << "\n";
    ok = ok && c.passed;
  }
  if (!oracle_ran) std::cout << "SKIP oracle: " << extreme.size() << " extreme units exceed the cap\n";
  if (!ok) throw xbench::VerificationError("one or more checks failed");
  return 0;
}

int exit_code_for(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const xbench::DataError&) {
    return 1;
  } catch (const xbench::VerificationError&) {
    return 3;
  } catch (const xbench::SolverError&) {
    return 2;
  } catch (...) {
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cross-benchmarking of decision making units against common reference sets"};
  app.require_subcommand(1);
  RunConfig rc;
  CLI::App* run = app.add_subcommand("run", "select reference sets and compute targets");
  add_common(*run, rc);
  run->add_option("--out", rc.out, "output directory");
  CLI::App* classify = app.add_subcommand("classify", "print the extreme-efficient units");
  add_common(*classify, rc);
  CLI::App* verify = app.add_subcommand("verify", "compare the MILP path with exhaustive checks");
  add_common(*verify, rc);
  verify->add_flag("--full-model", rc.full_model, "also solve the unsimplified step model");
  verify->add_option("--max-extreme", rc.max_extreme, "largest extreme set the oracle enumerates");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run) return cmd_run(rc);
    if (*classify) return cmd_classify(rc);
    return cmd_verify(rc);
  } catch (const StageError& e) {
    std::cerr << "xbench: " << e.stage() << ": " << e.what() << "\n";
    return exit_code_for(e.inner());
  } catch (const std::exception& e) {
    std::cerr << "xbench: " << e.what() << "\n";
    return exit_code_for(std::current_exception());
  }
}
