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

#ifndef CBSIM_PARENT_HPP
#define CBSIM_PARENT_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "cbsim/rng.hpp"

namespace cbsim {

// Dependence skeleton of the multi-scale walk: each round t in [1, T] has a
// parent rho(t) < t, so iterating the parent always terminates at round 0.
class ParentFunction {
 public:
  ParentFunction(std::int64_t horizon, std::vector<std::int64_t> parents);

  // rho(t) = t - 1: a plain random-walk skeleton.
  static ParentFunction chain(std::int64_t horizon);
  // rho(t) = 0: i.i.d. skeleton (test workloads).
  static ParentFunction star(std::int64_t horizon);
  // rho(t) clears the lowest set bit of t.
  static ParentFunction gcd(std::int64_t horizon);

  std::int64_t horizon() const { return horizon_; }
  std::int64_t parent(std::int64_t t) const;

 private:
  std::int64_t horizon_ = 0;
  std::vector<std::int64_t> parents_;  // 1-based, slot 0 unused
};

// t with its lowest set binary bit cleared; equals t - gcd(t, 2^T) for any
// horizon T whose power covers the bit, so the horizon only bounds t.
std::int64_t gcd_parent(std::int64_t t, std::int64_t horizon);

// Randomized parent construction: draw unbiased bits B_1..B_T; B_t = 0 sets
// rho(t) = t-1, and the rounds with B_t = 1, renamed U_1, U_2, ... (with
// U_0 = 0), are wired through the deterministic gcd parent on their rank.
struct RandomParentTrace {
  ParentFunction parent;
  std::vector<std::uint8_t> bits;             // 1-based, slot 0 unused
  std::vector<std::int64_t> renamed_indices;  // U_0 = 0, U_1, U_2, ...
};

// Deterministic core, driven by explicit bits (1-based, bits.size() == T+1).
RandomParentTrace build_random_parent_from_bits(std::span<const std::uint8_t> bits);
RandomParentTrace build_random_parent(std::int64_t horizon, Rng& rng);

// Ancestors of t: the indices reached by iterating the parent from t down to
// 0, i.e. {rho(t), rho(rho(t)), ..., 0}; empty for t = 0. Returned in
// iteration order (decreasing).
std::vector<std::int64_t> ancestors(const ParentFunction& rho, std::int64_t t);

// Largest ancestor-set size over t in [1, T].
std::int64_t depth(const ParentFunction& rho);

// cut(t) = { s in [T] : rho(s) < t <= s }, increasing order.
std::vector<std::int64_t> cut(const ParentFunction& rho, std::int64_t t);

// Largest cut size over t in [1, T].
std::int64_t width(const ParentFunction& rho);

}  // namespace cbsim

#endif  // CBSIM_PARENT_HPP
