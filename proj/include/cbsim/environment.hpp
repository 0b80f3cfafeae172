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

#ifndef CBSIM_ENVIRONMENT_HPP
#define CBSIM_ENVIRONMENT_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cbsim/combining.hpp"
#include "cbsim/process.hpp"
#include "cbsim/rng.hpp"

namespace cbsim {

struct EnvMetadata {
  std::string kind;
  std::uint64_t seed = 0;
  double sigma = 0.0;
  double epsilon = 0.0;
  double eta = 0.0;
  double tau = 0.0;
  double delta = 0.0;
  int chi = -1;  // -1 when the environment has no better-action draw
};

// Construction byproducts kept for post-hoc audit of hard instances.
struct EnvAudit {
  std::vector<double> walk;            // W_0..W_T
  std::vector<std::uint8_t> events;    // 1-based event flags
  std::vector<std::uint8_t> lambda;    // 1-based spike orientations
  std::vector<double> spike_values;    // (T+1)*2 layout, slot 2t+x

  bool empty() const { return walk.empty() && events.empty(); }
};

// A fully sampled oblivious loss table plus one loss semantics: either a
// combining rule over a window of recent oblivious values, or the oblivious
// value plus a unit switch penalty. Because the table is realized up front,
// counterfactual play (any action sequence, any constant) can be evaluated
// exactly.
class RealizedEnvironment {
 public:
  RealizedEnvironment() = default;
  RealizedEnvironment(LossTable game_table, CombiningFunction combiner,
                      bool switching, EnvMetadata meta);

  std::int64_t horizon() const { return table_.horizon(); }
  int arms() const { return table_.arms(); }
  bool switching() const { return switching_; }
  const CombiningFunction& combiner() const { return combiner_; }
  const LossTable& table() const { return table_; }
  const LossTable* unclipped() const {
    return unclipped_.has_value() ? &*unclipped_ : nullptr;
  }
  const EnvMetadata& metadata() const { return meta_; }
  const EnvAudit& audit() const { return audit_; }

  void attach_unclipped(LossTable unclipped) { unclipped_ = std::move(unclipped); }
  void attach_audit(EnvAudit audit) { audit_ = std::move(audit); }
  void set_seed(std::uint64_t seed) { meta_.seed = seed; }

  // f_t for the player's (1-based) action history; switching environments
  // add the switch indicator on t >= 2, composite environments apply the
  // combiner over the trailing window.
  double loss(std::span<const int> actions, std::int64_t t) const;

  // f_t for the constant policy that repeats x.
  double constant_loss(int x, std::int64_t t) const;
  double total_constant_loss(int x) const;

  std::string dump() const;

 private:
  LossTable table_;
  std::optional<LossTable> unclipped_;
  CombiningFunction combiner_;
  bool switching_ = false;
  EnvMetadata meta_;
  EnvAudit audit_;
};

// Wrap an oblivious table with the unit switch penalty semantics. Round 1
// incurs no penalty; the per-round loss lives in [0, 2] and is recorded
// unscaled.
RealizedEnvironment switching_cost_env(LossTable table, EnvMetadata meta = {});

// I.i.d. environment for the linear-composite experiments: each value is
// gap * 1{x != chi} + (1 - gap) * Uniform[0,1], so the drawn better arm chi
// is favored by exactly `gap` in expectation on every round. The combiner is
// the normalized `coeffs` linear rule. Draw order: chi, then values in
// (round, arm) order.
RealizedEnvironment build_linear_iid_env(std::int64_t horizon, int arms,
                                         std::span<const double> coeffs,
                                         double gap, Rng& rng);

struct GapWalkOptions {
  std::string parent = "gcd";  // gcd | chain | star | random
  double sigma = 0.0;          // 0 = tuned from depth, horizon, delta
  double epsilon = 0.0;        // 0 = T^{-1/3} / ln T
  double delta = 0.0;          // 0 = 1/T
  bool clipped = true;         // false: games run on the unclipped values
  bool switching = false;      // true: oblivious-plus-switching semantics
};

// Two-action walk-plus-gap environment. Draw order: parent bits (random
// parent only), noise, chi.
RealizedEnvironment build_gap_walk_env(std::int64_t horizon,
                                       const GapWalkOptions& options, Rng& rng);

void write_env_dump(const RealizedEnvironment& env, const std::string& path);
RealizedEnvironment parse_env_dump(const std::string& text);
RealizedEnvironment read_env_dump(const std::string& path);

}  // namespace cbsim

#endif  // CBSIM_ENVIRONMENT_HPP
