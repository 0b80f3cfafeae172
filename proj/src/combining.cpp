// Copyright 2026 The cbsim Authors
//
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

#include "cbsim/combining.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace cbsim {

double CombiningFunction::apply(std::span<const double> window) const {
  if (window.size() != static_cast<std::size_t>(memory + 1)) {
    throw std::invalid_argument("combining window size does not match memory");
  }
  switch (kind) {
    case CombinerKind::kMin:
      return *std::min_element(window.begin(), window.end());
    case CombinerKind::kMax:
      return *std::max_element(window.begin(), window.end());
    case CombinerKind::kLinear: {
      // a_m * window[0] + ... + a_0 * window[m], accumulated oldest-first.
      double sum = 0.0;
      for (int i = memory; i >= 0; --i) {
        sum += coeffs[static_cast<std::size_t>(i)] *
               window[static_cast<std::size_t>(memory - i)];
      }
      return sum;
    }
  }
  throw std::logic_error("unreachable combiner kind");
}

std::string CombiningFunction::describe() const {
  switch (kind) {
    case CombinerKind::kMin:
      return "min";
    case CombinerKind::kMax:
      return "max";
    case CombinerKind::kLinear: {
      std::string out = "linear";
      char buf[64];
      for (double a : coeffs) {
        std::snprintf(buf, sizeof(buf), ",%.17g", a);
        out += buf;
      }
      return out;
    }
  }
  return "?";
}

CombiningFunction min_combiner() {
  return CombiningFunction{CombinerKind::kMin, 1, {}};
}

CombiningFunction max_combiner() {
  return CombiningFunction{CombinerKind::kMax, 1, {}};
}

CombiningFunction make_linear_combiner(std::span<const double> raw_coeffs) {
  if (raw_coeffs.empty()) {
    throw std::invalid_argument("linear combiner needs at least one coefficient");
  }
  double sum = 0.0;
  for (double a : raw_coeffs) {
    if (a < 0.0) {
      throw std::invalid_argument("linear combiner coefficients must be nonnegative");
    }
    sum += a;
  }
  if (sum <= 0.0) {
    throw std::invalid_argument("linear combiner coefficients must not all be zero");
  }
  CombiningFunction g;
  g.kind = CombinerKind::kLinear;
  g.memory = static_cast<int>(raw_coeffs.size()) - 1;
  g.coeffs.reserve(raw_coeffs.size());
  for (double a : raw_coeffs) g.coeffs.push_back(a / sum);
  return g;
}

LossTable::LossTable(std::int64_t horizon, int arms, std::vector<double> values,
                     bool unit_range)
    : horizon_(horizon), arms_(arms), unit_range_(unit_range),
      values_(std::move(values)) {
  if (horizon_ < 1) throw std::invalid_argument("loss table horizon must be >= 1");
  if (arms_ < 2) throw std::invalid_argument("loss table needs at least 2 arms");
  if (values_.size() != static_cast<std::size_t>(horizon_) * arms_) {
    throw std::invalid_argument("loss table value count does not match T*k");
  }
  if (unit_range_) {
    for (double v : values_) {
      if (v < 0.0 || v > 1.0) {
        throw std::invalid_argument("loss table value outside [0,1]");
      }
    }
  }
}

double LossTable::value(std::int64_t t, int arm) const {
  if (t <= 0) return 0.0;
  if (t > horizon_) throw std::out_of_range("loss table round past horizon");
  if (arm < 0 || arm >= arms_) throw std::out_of_range("loss table arm out of range");
  return values_[static_cast<std::size_t>(t - 1) * arms_ + arm];
}

double eval_composite(const CombiningFunction& g, const LossTable& table,
                      std::span<const int> actions, std::int64_t t) {
  if (t < 1 || t > table.horizon()) {
    throw std::out_of_range("composite evaluation round out of range");
  }
  const int m = g.memory;
  if (actions.size() < static_cast<std::size_t>(t) + 1) {
    throw std::invalid_argument("action history does not cover round t");
  }
  // small stack window keeps the per-round game loop allocation-free
  double stack_window[16];
  std::vector<double> heap_window;
  double* window = stack_window;
  if (m + 1 > 16) {
    heap_window.assign(static_cast<std::size_t>(m) + 1, 0.0);
    window = heap_window.data();
  }
  for (int i = 0; i <= m; ++i) {
    const std::int64_t s = t - m + i;
    window[i] = s >= 1 ? table.value(s, actions[static_cast<std::size_t>(s)]) : 0.0;
  }
  return g.apply(std::span<const double>(window, static_cast<std::size_t>(m) + 1));
}

}  // namespace cbsim
