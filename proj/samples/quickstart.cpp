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

// Library walkthrough: classify, select reference sets, read targets.
//
//   quickstart [panel.csv]

#include <iomanip>
#include <iostream>
#include <string>

#include "xbench/xbench.hpp"

int main(int argc, char** argv) {
  const std::string path = argc > 1 ? argv[1] : std::string(XBENCH_DATA_DIR) + "/plants.csv";
  try {
    const xbench::Dataset d = xbench::load_dataset(path);

    xbench::CrossBenchmarkConfig cfg;
    cfg.selection.complementarity = xbench::milp::ComplementarityMode::kSos1;
    const xbench::CrossBenchmarkResult res = xbench::cross_benchmark(d, cfg);
    if (!res.complete) {
      std::cerr << res.failed_stage << " failed: " << res.error_message << "\n";
      return 1;
    }

    const xbench::SelectionState& st = *res.selection;
    std::cout << "extreme efficient:";
    for (std::size_t k : st.extreme_set) std::cout << " " << d[k].id;
    std::cout << "\n\n";
    xbench::write_selection_table(std::cout, d, st);

    // Per-DMU distance to each reference set, and the best one.
    std::cout << "\n" << std::left << std::setw(10) << "DMU";
    for (const auto& r : st.reference_sets) std::cout << std::setw(10) << ("R" + std::to_string(r.step));
    std::cout << "best\n" << std::fixed << std::setprecision(4);
    for (std::size_t j = 0; j < d.n(); ++j) {
      std::cout << std::setw(10) << d[j].id;
      for (const auto& face : res.bundles) std::cout << std::setw(10) << face[j].distance;
      std::cout << st.best_distance[j] << "\n";
    }

    for (const auto& check : xbench::check_run(d, res, cfg.selection)) {
      if (!check.passed) std::cout << "check failed: " << check.name << ": " << check.detail << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 0;
}
