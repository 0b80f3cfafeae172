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

#ifndef CBSIM_ENGINE_HPP
#define CBSIM_ENGINE_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "cbsim/environment.hpp"
#include "cbsim/players.hpp"

namespace cbsim {

// Per-round record of one game. Everything is 1-based; slot 0 is unused.
struct Transcript {
  std::vector<int> actions;
  std::vector<double> losses;          // incurred f_t, unscaled
  std::vector<double> observed;        // feedback value delivered to the player
  std::vector<std::uint8_t> switched;  // X_t != X_{t-1}, t >= 2
  std::int64_t switches = 0;           // M

  std::int64_t horizon() const {
    return static_cast<std::int64_t>(actions.size()) - 1;
  }
  // One row per round: t,action,loss,feedback,switch.
  std::string export_csv() const;
};

// Play one T-round game. The environment is never mutated; the player's
// randomness flows through rng. Switching-cost feedback under the composite
// model is halved before delivery so the player sees values in [0,1]; the
// transcript keeps the unscaled loss.
Transcript run_game(const RealizedEnvironment& env, Player& player,
                    FeedbackModel model, Rng& rng);

// Cumulative loss of the transcript minus the best constant policy's
// cumulative loss, evaluated exactly from the realized table.
double policy_regret(const RealizedEnvironment& env, const Transcript& transcript);

// Diagnostic per-round regret against the recorded better action chi:
// f_t(X_{1:t}) - f_t(chi,...,chi). Requires chi metadata (pass chi >= 0 to
// override).
std::vector<double> per_round_regret(const RealizedEnvironment& env,
                                     const Transcript& transcript,
                                     int chi = -1);

using EnvFactory = std::function<RealizedEnvironment(std::uint64_t seed)>;
using PlayerFactory =
    std::function<std::unique_ptr<Player>(const RealizedEnvironment&)>;

struct RegretStats {
  std::int64_t n_reps = 0;
  double mean_regret = 0.0;
  double std_regret = 0.0;
  double min_regret = 0.0;
  double q25_regret = 0.0;
  double median_regret = 0.0;
  double q75_regret = 0.0;
  double max_regret = 0.0;
  double mean_switches = 0.0;
  double std_switches = 0.0;

  // Key-value text export.
  std::string to_text() const;
};

// Runs n_reps independent games. Replication r draws its environment from
// derive_seed(master_seed, 0, r) and its game randomness from
// derive_seed(master_seed, 1, r), and results are reduced in replication
// order, so the output does not depend on the parallelism degree.
// parallelism <= 0 picks the hardware concurrency.
RegretStats monte_carlo(const EnvFactory& env_factory,
                        const PlayerFactory& player_factory,
                        FeedbackModel model, std::int64_t n_reps,
                        std::uint64_t master_seed, int parallelism);

}  // namespace cbsim

#endif  // CBSIM_ENGINE_HPP
