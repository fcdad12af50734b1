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

#ifndef XBENCH_DISTANCE_HPP_
#define XBENCH_DISTANCE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>

#include "xbench/dataset.hpp"
#include "xbench/errors.hpp"

namespace xbench {

/// sum_i |x_i - xt_i| / x_i + sum_r |y_r - yt_r| / y_r
inline double weighted_l1_distance(const DmuRecord& actual, std::span<const double> target_inputs,
                                   std::span<const double> target_outputs) {
  if (target_inputs.size() != actual.inputs.size() ||
      target_outputs.size() != actual.outputs.size()) {
    throw DataError("target dimensions do not match DMU '" + actual.id + "'");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < target_inputs.size(); ++i) {
    d += std::abs(actual.inputs[i] - target_inputs[i]) / actual.inputs[i];
  }
  for (std::size_t r = 0; r < target_outputs.size(); ++r) {
    d += std::abs(actual.outputs[r] - target_outputs[r]) / actual.outputs[r];
  }
  return d;
}

inline double weighted_l1_distance(const DmuRecord& actual, const DmuRecord& target) {
  return weighted_l1_distance(actual, target.inputs, target.outputs);
}

/// Largest distance from any DMU to any unit of `extreme_set`. Large enough
/// for the selection step models: no closest target on a face spanned by
/// extreme units is farther than this.
inline double compute_big_m(const Dataset& d, std::span<const std::size_t> extreme_set) {
  if (extreme_set.empty()) throw DataError("big-M needs a non-empty extreme-efficient set");
  double m = 0.0;
  for (std::size_t k : extreme_set) {
    for (std::size_t j = 0; j < d.n(); ++j) m = std::max(m, weighted_l1_distance(d[j], d[k]));
  }
  return m;
}

}  // namespace xbench

#endif  // XBENCH_DISTANCE_HPP_
