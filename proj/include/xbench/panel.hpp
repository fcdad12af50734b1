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

#ifndef XBENCH_PANEL_HPP_
#define XBENCH_PANEL_HPP_

#include <cstddef>
#include <vector>

#include "xbench/dataset.hpp"

namespace xbench {

/// Dataset with every factor column divided by its mean. All optimization
/// models are built on this panel so coefficients stay near 1 whatever units
/// the raw data uses. Distances, intensities and face structure are unchanged
/// by the scaling; hyperplane weights are mapped back by to_raw_weights().
class NormalizedPanel {
 public:
  explicit NormalizedPanel(const Dataset& d)
      : n_(d.n()), m_(d.m()), s_(d.s()), scale_(d.m() + d.s(), 0.0), v_(d.n() * (d.m() + d.s())) {
    const std::size_t f_count = m_ + s_;
    for (std::size_t f = 0; f < f_count; ++f) {
      double sum = 0.0;
      for (std::size_t j = 0; j < n_; ++j) sum += d.factor(j, f);
      scale_[f] = sum / static_cast<double>(n_);
      for (std::size_t j = 0; j < n_; ++j) v_[j * f_count + f] = d.factor(j, f) / scale_[f];
    }
  }

  std::size_t n() const { return n_; }
  std::size_t m() const { return m_; }
  std::size_t s() const { return s_; }
  std::size_t factors() const { return m_ + s_; }

  double x(std::size_t j, std::size_t i) const { return v_[j * factors() + i]; }
  double y(std::size_t j, std::size_t r) const { return v_[j * factors() + m_ + r]; }
  double factor(std::size_t j, std::size_t f) const { return v_[j * factors() + f]; }
  double scale(std::size_t f) const { return scale_[f]; }

  /// Weights w on the normalized panel act on raw data as w[f] / scale[f].
  std::vector<double> to_raw_weights(const std::vector<double>& w) const {
    std::vector<double> out(w.size());
    for (std::size_t f = 0; f < w.size(); ++f) out[f] = w[f] / scale_[f];
    return out;
  }

 private:
  std::size_t n_, m_, s_;
  std::vector<double> scale_;
  std::vector<double> v_;
};

}  // namespace xbench

#endif  // XBENCH_PANEL_HPP_
