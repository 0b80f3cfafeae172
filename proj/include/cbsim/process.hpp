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

#ifndef CBSIM_PROCESS_HPP
#define CBSIM_PROCESS_HPP

#include <cstdint>
#include <vector>

#include "cbsim/combining.hpp"
#include "cbsim/parent.hpp"
#include "cbsim/rng.hpp"

namespace cbsim {

// Independent zero-mean Gaussian draws xi_1..xi_T with standard deviation
// sigma, drawn in round order.
struct NoiseSequence {
  double sigma = 0.0;
  std::vector<double> values;  // 1-based, slot 0 unused (0.0)

  std::int64_t horizon() const {
    return static_cast<std::int64_t>(values.size()) - 1;
  }
};

NoiseSequence sample_noise(std::int64_t horizon, double sigma, Rng& rng);

// Multi-scale walk W_0 = 0, W_t = W_{rho(t)} + xi_t. A single forward pass
// suffices since rho(t) < t.
struct WalkSequence {
  std::vector<double> values;  // W_0..W_T

  std::int64_t horizon() const {
    return static_cast<std::int64_t>(values.size()) - 1;
  }
};

WalkSequence build_walk(const ParentFunction& rho, const NoiseSequence& noise);

// Two-action gap losses Z_t(x) = W_t + 1/2 - epsilon * 1{x = chi}: the
// better action chi sits below the other by a constant gap, unclipped.
struct GapProcess {
  std::vector<double> walk;  // W_0..W_T
  int chi = 0;
  double epsilon = 0.0;

  std::int64_t horizon() const {
    return static_cast<std::int64_t>(walk.size()) - 1;
  }
  double z(std::int64_t t, int x) const {
    return walk[static_cast<std::size_t>(t)] + 0.5 -
           (x == chi ? epsilon : 0.0);
  }
};

GapProcess build_gap_process(const WalkSequence& walk, int chi, double epsilon);

// Additive spikes S_t(x) over two actions, plus the Bernoulli orientations
// that placed them (1-based; lambda[t] meaningful for t in [2, T-1]).
struct SpikeSequence {
  std::int64_t horizon = 0;
  std::vector<double> values;         // (T+1)*2, slot 2t+x, t in 1..T
  std::vector<std::uint8_t> lambda;   // 1-based, slot 0 unused

  double value(std::int64_t t, int x) const {
    if (t < 1 || t > horizon) return 0.0;
    return values[static_cast<std::size_t>(2 * t + x)];
  }
};

SpikeSequence zero_spikes(std::int64_t horizon);

// L_t(x) = clip(Z_t(x) + S_t(x)). The unclipped variant (Z + S, allowed to
// leave [0, 1]) is kept alongside for diagnostics and interval checks.
struct ClippedTables {
  LossTable clipped;
  LossTable unclipped;
};

ClippedTables clip_to_table(const GapProcess& gaps, const SpikeSequence* spikes);

// sigma ~ (d(rho) * log(T/delta))^{-1/2}: keeps the unclipped values inside
// the unit interval with probability about 1 - delta.
double tuned_sigma(std::int64_t depth_of_parent, std::int64_t horizon,
                   double delta);

}  // namespace cbsim

#endif  // CBSIM_PROCESS_HPP
