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

#ifndef CBSIM_COMBINING_HPP
#define CBSIM_COMBINING_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cbsim {

// Confine a value to [0, 1].
inline double clip(double alpha) {
  if (alpha < 0.0) return 0.0;
  if (alpha > 1.0) return 1.0;
  return alpha;
}

enum class CombinerKind { kMin, kMax, kLinear };

// Rule g mapping a window of m+1 oblivious loss values to a single loss.
// For Linear, coeffs holds (a_0, ..., a_m) with a_i the weight of the value
// observed i rounds ago; the coefficients are nonnegative and sum to 1, so
// the output stays in [0, 1].
struct CombiningFunction {
  CombinerKind kind = CombinerKind::kMin;
  int memory = 1;                // m
  std::vector<double> coeffs;    // Linear only, size m+1

  // window is ordered oldest-first: (value at t-m, ..., value at t).
  double apply(std::span<const double> window) const;

  std::string describe() const;
};

CombiningFunction min_combiner();
CombiningFunction max_combiner();

// Normalizes the coefficients so they sum to 1. Rejects an empty sequence,
// negative entries, and the all-zero sequence.
CombiningFunction make_linear_combiner(std::span<const double> raw_coeffs);

// Realized oblivious loss values over rounds 1..T and arms 0..k-1.
// Queries at t <= 0 return exactly 0; every consumer gets the convention
// from the table itself. Immutable after construction.
class LossTable {
 public:
  LossTable() = default;
  // unit_range enforces that every stored value lies in [0, 1]; pass false
  // for diagnostic tables that intentionally leave the unit interval.
  LossTable(std::int64_t horizon, int arms, std::vector<double> values,
            bool unit_range = true);

  std::int64_t horizon() const { return horizon_; }
  int arms() const { return arms_; }
  bool unit_range() const { return unit_range_; }
  bool empty() const { return horizon_ == 0; }

  // t in (-inf, T]; rounds at or before 0 are identically 0.
  double value(std::int64_t t, int arm) const;

  const std::vector<double>& raw() const { return values_; }

 private:
  std::int64_t horizon_ = 0;
  int arms_ = 0;
  bool unit_range_ = true;
  std::vector<double> values_;  // row-major, (t-1)*arms + x
};

// f_t(x_{1:t}) = g(l_{t-m}(x_{t-m}), ..., l_t(x_t)) with l_{<=0} = 0.
// actions is 1-based: actions[s] is the arm played on round s (index 0 is
// ignored); it must cover rounds max(1, t-m)..t.
double eval_composite(const CombiningFunction& g, const LossTable& table,
                      std::span<const int> actions, std::int64_t t);

}  // namespace cbsim

#endif  // CBSIM_COMBINING_HPP
