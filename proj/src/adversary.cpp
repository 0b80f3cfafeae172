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

#include "cbsim/adversary.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "cbsim/parent.hpp"

namespace cbsim {

HardnessParams default_schedule(std::int64_t horizon) {
  if (horizon < 16) {
    throw std::invalid_argument("hard-instance schedule needs T >= 16");
  }
  const double log_t = std::log(static_cast<double>(horizon));
  HardnessParams p;
  p.eta = 1.0 / (log_t * log_t);
  p.sigma = 1.0 / log_t;
  p.tau = 1.0 / std::pow(log_t, 5.0);
  p.epsilon = std::pow(static_cast<double>(horizon), -1.0 / 3.0) / log_t;
  auto check = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("hard-instance schedule: ") + what);
  };
  check(p.sigma > 0.0 && p.sigma < 1.0, "sigma must be in (0,1)");
  check(p.eta > 0.0 && p.eta < 1.0, "eta must be in (0,1)");
  check(p.tau > 0.0, "tau must be positive");
  check(p.epsilon > 0.0 && p.epsilon < 1.0, "epsilon must be in (0,1)");
  check(p.eta > p.tau, "eta must exceed tau");
  return p;
}

double spike_to_gap_ratio(const HardnessParams& params) {
  return params.eta * params.tau / (params.sigma * params.epsilon);
}

std::int64_t EventSequence::count() const {
  std::int64_t n = 0;
  for (std::int64_t t = 1; t <= horizon; ++t) n += at(t) ? 1 : 0;
  return n;
}

EventSequence detect_min_events(const WalkSequence& walk, double tau) {
  const std::int64_t horizon = walk.horizon();
  if (horizon < 4) throw std::invalid_argument("event detection needs T >= 4");
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  EventSequence events;
  events.horizon = horizon;
  events.flags.assign(static_cast<std::size_t>(horizon) + 1, 0);
  const auto& w = walk.values;
  for (std::int64_t t = 2; t <= horizon - 2; ++t) {
    const std::size_t i = static_cast<std::size_t>(t);
    const bool flat = std::fabs(w[i - 1] - w[i]) <= tau;
    const bool drop1 = w[i + 1] < w[i] - tau;
    const bool drop2 = w[i + 2] < w[i + 1] - tau;
    events.flags[i] = (flat && drop1 && drop2) ? 1 : 0;
  }
  return events;
}

EventSequence detect_max_events(const WalkSequence& walk, double tau, double eta) {
  const std::int64_t horizon = walk.horizon();
  if (horizon < 4) throw std::invalid_argument("event detection needs T >= 4");
  if (!(tau > 0.0) || !(eta > 0.0)) throw std::invalid_argument("tau and eta must be positive");
  EventSequence events;
  events.horizon = horizon;
  events.flags.assign(static_cast<std::size_t>(horizon) + 1, 0);
  const auto& w = walk.values;
  for (std::int64_t t = 2; t <= horizon - 2; ++t) {
    const std::size_t i = static_cast<std::size_t>(t);
    const bool flat = std::fabs(w[i - 1] - w[i]) <= tau;
    const bool rise = w[i + 1] > w[i] + eta;
    events.flags[i] = (flat && rise) ? 1 : 0;
  }
  return events;
}

namespace {

std::vector<std::uint8_t> draw_orientations(std::int64_t horizon, Rng& rng) {
  std::vector<std::uint8_t> lambda(static_cast<std::size_t>(horizon) + 1, 0);
  for (std::int64_t t = 2; t <= horizon - 1; ++t) {
    lambda[static_cast<std::size_t>(t)] = coin_flip(rng) ? 1 : 0;
  }
  return lambda;
}

}  // namespace

SpikeSequence assign_spikes_min_from(const EventSequence& events,
                                     std::span<const std::uint8_t> lambda,
                                     double eta) {
  const std::int64_t horizon = events.horizon;
  if (lambda.size() != static_cast<std::size_t>(horizon) + 1) {
    throw std::invalid_argument("orientation vector must be 1-based with T+1 slots");
  }
  SpikeSequence s = zero_spikes(horizon);
  s.lambda.assign(lambda.begin(), lambda.end());
  for (std::int64_t t = 1; t <= horizon; ++t) {
    for (int x = 0; x < 2; ++x) {
      const bool own_event =
          events.at(t) && x == static_cast<int>(s.lambda[static_cast<std::size_t>(t)]);
      const bool next_event =
          events.at(t + 1) &&
          x != static_cast<int>(s.lambda[static_cast<std::size_t>(t + 1)]);
      if (own_event || next_event) {
        s.values[static_cast<std::size_t>(2 * t + x)] = eta;
      }
    }
  }
  return s;
}

SpikeSequence assign_spikes_min(const EventSequence& events,
                                const HardnessParams& params, Rng& rng) {
  return assign_spikes_min_from(events, draw_orientations(events.horizon, rng),
                                params.eta);
}

SpikeSequence assign_spikes_max_from(const EventSequence& events,
                                     std::span<const std::uint8_t> lambda) {
  const std::int64_t horizon = events.horizon;
  if (lambda.size() != static_cast<std::size_t>(horizon) + 1) {
    throw std::invalid_argument("orientation vector must be 1-based with T+1 slots");
  }
  SpikeSequence s = zero_spikes(horizon);
  s.lambda.assign(lambda.begin(), lambda.end());
  for (std::int64_t t = 1; t <= horizon; ++t) {
    for (int x = 0; x < 2; ++x) {
      const bool own_event =
          events.at(t) && x == static_cast<int>(s.lambda[static_cast<std::size_t>(t)]);
      const bool next_event =
          events.at(t + 1) &&
          x == static_cast<int>(s.lambda[static_cast<std::size_t>(t + 1)]);
      if (own_event || next_event) {
        s.values[static_cast<std::size_t>(2 * t + x)] = 1.0;
      }
    }
  }
  return s;
}

SpikeSequence assign_spikes_max(const EventSequence& events, Rng& rng) {
  return assign_spikes_max_from(events, draw_orientations(events.horizon, rng));
}

namespace {

RealizedEnvironment build_hard_adversary(std::int64_t horizon,
                                         const HardnessParams& params, Rng& rng,
                                         bool is_min) {
  if (horizon < 4) throw std::invalid_argument("hard adversary needs T >= 4");
  if (!(params.sigma > 0.0) || !(params.epsilon > 0.0) || !(params.tau > 0.0) ||
      !(params.eta > 0.0)) {
    throw std::invalid_argument("hard adversary parameters must be positive");
  }
  RandomParentTrace trace = build_random_parent(horizon, rng);
  NoiseSequence noise = sample_noise(horizon, params.sigma, rng);
  WalkSequence walk = build_walk(trace.parent, noise);
  const int chi = coin_flip(rng) ? 1 : 0;
  EventSequence events = is_min
                             ? detect_min_events(walk, params.tau)
                             : detect_max_events(walk, params.tau, params.eta);
  SpikeSequence spikes = is_min ? assign_spikes_min(events, params, rng)
                                : assign_spikes_max(events, rng);
  GapProcess gaps = build_gap_process(walk, chi, params.epsilon);
  ClippedTables tables = clip_to_table(gaps, &spikes);

  EnvMetadata meta;
  meta.kind = is_min ? "min_adversary" : "max_adversary";
  meta.sigma = params.sigma;
  meta.epsilon = params.epsilon;
  meta.eta = params.eta;
  meta.tau = params.tau;
  meta.chi = chi;

  RealizedEnvironment env(std::move(tables.clipped),
                          is_min ? min_combiner() : max_combiner(), false,
                          std::move(meta));
  env.attach_unclipped(std::move(tables.unclipped));
  EnvAudit audit;
  audit.walk = walk.values;
  audit.events = events.flags;
  audit.lambda = spikes.lambda;
  audit.spike_values = spikes.values;
  env.attach_audit(std::move(audit));
  return env;
}

}  // namespace

RealizedEnvironment build_min_adversary(std::int64_t horizon,
                                        const HardnessParams& params, Rng& rng) {
  return build_hard_adversary(horizon, params, rng, /*is_min=*/true);
}

RealizedEnvironment build_max_adversary(std::int64_t horizon,
                                        const HardnessParams& params, Rng& rng) {
  return build_hard_adversary(horizon, params, rng, /*is_min=*/false);
}

}  // namespace cbsim
