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

#include "cbsim/process.hpp"

#include <cmath>
#include <stdexcept>

namespace cbsim {

NoiseSequence sample_noise(std::int64_t horizon, double sigma, Rng& rng) {
  if (horizon < 1) throw std::invalid_argument("noise horizon must be >= 1");
  if (!(sigma > 0.0)) throw std::invalid_argument("noise sigma must be positive");
  NoiseSequence out;
  out.sigma = sigma;
  out.values.assign(static_cast<std::size_t>(horizon) + 1, 0.0);
  for (std::int64_t t = 1; t <= horizon; ++t) {
    out.values[static_cast<std::size_t>(t)] = sigma * standard_normal(rng);
  }
  return out;
}

WalkSequence build_walk(const ParentFunction& rho, const NoiseSequence& noise) {
  if (rho.horizon() != noise.horizon()) {
    throw std::invalid_argument("parent function and noise horizons differ");
  }
  WalkSequence walk;
  walk.values.assign(static_cast<std::size_t>(rho.horizon()) + 1, 0.0);
  for (std::int64_t t = 1; t <= rho.horizon(); ++t) {
    walk.values[static_cast<std::size_t>(t)] =
        walk.values[static_cast<std::size_t>(rho.parent(t))] +
        noise.values[static_cast<std::size_t>(t)];
  }
  return walk;
}

GapProcess build_gap_process(const WalkSequence& walk, int chi, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("gap epsilon must be positive");
  if (chi != 0 && chi != 1) throw std::invalid_argument("gap process is two-action; chi must be 0 or 1");
  return GapProcess{walk.values, chi, epsilon};
}

SpikeSequence zero_spikes(std::int64_t horizon) {
  SpikeSequence s;
  s.horizon = horizon;
  s.values.assign(static_cast<std::size_t>(2 * (horizon + 1)), 0.0);
  s.lambda.assign(static_cast<std::size_t>(horizon) + 1, 0);
  return s;
}

ClippedTables clip_to_table(const GapProcess& gaps, const SpikeSequence* spikes) {
  const std::int64_t horizon = gaps.horizon();
  if (horizon < 1) throw std::invalid_argument("gap process is empty");
  if (spikes != nullptr && spikes->horizon != horizon) {
    throw std::invalid_argument("spike sequence not aligned to [1,T]");
  }
  std::vector<double> clipped(static_cast<std::size_t>(horizon) * 2, 0.0);
  std::vector<double> unclipped(static_cast<std::size_t>(horizon) * 2, 0.0);
  for (std::int64_t t = 1; t <= horizon; ++t) {
    for (int x = 0; x < 2; ++x) {
      const double s = spikes != nullptr ? spikes->value(t, x) : 0.0;
      const double v = gaps.z(t, x) + s;
      unclipped[static_cast<std::size_t>(t - 1) * 2 + x] = v;
      clipped[static_cast<std::size_t>(t - 1) * 2 + x] = clip(v);
    }
  }
  return ClippedTables{LossTable(horizon, 2, std::move(clipped), true),
                       LossTable(horizon, 2, std::move(unclipped), false)};
}

double tuned_sigma(std::int64_t depth_of_parent, std::int64_t horizon,
                   double delta) {
  if (depth_of_parent < 1) throw std::invalid_argument("depth must be >= 1");
  if (!(delta > 0.0) || !(delta < 1.0)) throw std::invalid_argument("delta must be in (0,1)");
  return 1.0 / std::sqrt(static_cast<double>(depth_of_parent) *
                         std::log(static_cast<double>(horizon) / delta));
}

}  // namespace cbsim
