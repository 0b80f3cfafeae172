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

#ifndef CBSIM_ADVERSARY_HPP
#define CBSIM_ADVERSARY_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "cbsim/environment.hpp"
#include "cbsim/process.hpp"
#include "cbsim/rng.hpp"

namespace cbsim {

// Parameter schedule for the hard instances: gap epsilon, walk step sigma,
// flatness tolerance tau, spike size eta.
struct HardnessParams {
  double epsilon = 0.0;
  double sigma = 0.0;
  double tau = 0.0;
  double eta = 0.0;
};

// eta = ln^-2 T, sigma = ln^-1 T, tau = ln^-5 T, epsilon = T^(-1/3) / ln T.
// Rejects horizons where the parameters leave (0,1) or eta <= tau; reports
// which constraint failed. The asymptotic ordering eta*tau/sigma >> epsilon
// only kicks in at astronomically large T, so it is reported through
// spike_to_gap_ratio() rather than enforced.
HardnessParams default_schedule(std::int64_t horizon);

// (eta * tau / sigma) / epsilon at the default schedule.
double spike_to_gap_ratio(const HardnessParams& params);

// Trigger flags E_t, defined for 2 <= t <= T-2 and false elsewhere. An
// event at t excludes events at t+1 and t+2 by construction.
struct EventSequence {
  std::int64_t horizon = 0;
  std::vector<std::uint8_t> flags;  // 1-based, slot 0 unused

  bool at(std::int64_t t) const {
    if (t < 1 || t > horizon) return false;
    return flags[static_cast<std::size_t>(t)] != 0;
  }
  std::int64_t count() const;
};

// E_t: |W_{t-1} - W_t| <= tau, W_{t+1} < W_t - tau, W_{t+2} < W_{t+1} - tau.
EventSequence detect_min_events(const WalkSequence& walk, double tau);

// E_t: |W_{t-1} - W_t| <= tau and W_{t+1} > W_t + eta.
EventSequence detect_max_events(const WalkSequence& walk, double tau, double eta);

// Min-adversary spikes: S_t(x) = eta iff (E_t and x = Lambda_t) or
// (E_{t+1} and x != Lambda_{t+1}); an event at t therefore spikes round t-1
// on action 1-Lambda_t and round t on action Lambda_t. Orientations are
// drawn up front for every t in [2, T-1], independent of the events.
SpikeSequence assign_spikes_min(const EventSequence& events,
                                const HardnessParams& params, Rng& rng);
SpikeSequence assign_spikes_min_from(const EventSequence& events,
                                     std::span<const std::uint8_t> lambda,
                                     double eta);

// Max-adversary spikes: unit spikes on action Lambda_t on rounds t-1 and t.
SpikeSequence assign_spikes_max(const EventSequence& events, Rng& rng);
SpikeSequence assign_spikes_max_from(const EventSequence& events,
                                     std::span<const std::uint8_t> lambda);

// Full pipeline: random parent, noise, walk, chi draw, event detection,
// spikes, clipped table, min (resp. max) combiner with memory 1. The
// realized sequence is fully oblivious. Draw order: parent bits, noise,
// chi, orientations.
RealizedEnvironment build_min_adversary(std::int64_t horizon,
                                        const HardnessParams& params, Rng& rng);
RealizedEnvironment build_max_adversary(std::int64_t horizon,
                                        const HardnessParams& params, Rng& rng);

}  // namespace cbsim

#endif  // CBSIM_ADVERSARY_HPP
