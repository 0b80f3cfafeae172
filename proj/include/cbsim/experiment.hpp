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

#ifndef CBSIM_EXPERIMENT_HPP
#define CBSIM_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cbsim/engine.hpp"

namespace cbsim {

// Config-driven horizon sweep. The JSON document accepts exactly these keys
// (unknown keys are rejected):
//   environment  (object, required)  -- see make_env_factory
//   player       (string, required)  -- player spec string
//   out_prefix   (string, required)  -- output path prefix
//   feedback     (string)            -- default "composite_bandit"
//   horizons     (int array)         -- strictly increasing, default 2^10..2^16
//   n_reps       (int)               -- default 100
//   master_seed  (unsigned int)      -- default 0
struct ExperimentConfig {
  std::string environment_json;  // canonical dump of the environment object
  std::string player;
  FeedbackModel feedback = FeedbackModel::kCompositeBandit;
  std::vector<std::int64_t> horizons;
  std::int64_t n_reps = 100;
  std::uint64_t master_seed = 0;
  std::string out_prefix;

  static ExperimentConfig parse(const std::string& json_text);
};

// Environment factory for one horizon of a sweep; also returns the short tag
// used in the CSV env column. Supported kinds: linear_iid, min_adversary,
// max_adversary, gap_walk, switching_cost.
std::pair<EnvFactory, std::string> make_env_factory(
    const std::string& environment_json, std::int64_t horizon);

struct SweepRow {
  std::string env_tag;
  std::string player;
  std::int64_t horizon = 0;
  std::int64_t n_reps = 0;
  double mean_regret = 0.0;
  double std_regret = 0.0;
  double mean_switches = 0.0;
  std::uint64_t seed = 0;
};

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root-mean-square residual in log space
  int points_used = 0;
  int points_dropped = 0;                         // nonpositive regret points
  std::vector<std::pair<double, double>> points;  // (ln T, ln mean regret)
};

// Ordinary least squares on (ln T, ln regret). Points with nonpositive
// regret are dropped; fewer than 3 usable points is an error.
ScalingFit fit_exponent(std::span<const std::pair<double, double>> t_and_regret);

struct ExperimentResult {
  std::vector<SweepRow> rows;
  std::optional<ScalingFit> fit;  // absent when fewer than 3 usable points
  std::string csv_text;
  std::string summary_text;
  std::string csv_path;
  std::string summary_path;
};

// Runs the sweep and writes <out_prefix>.csv and <out_prefix>_summary.txt.
// Horizon h uses derive_seed(master_seed, 2, h) as its replication master
// seed, so output is byte-identical across reruns and parallelism degrees.
ExperimentResult run_experiment(const ExperimentConfig& config, int parallelism);

// The environment replication 0 of horizons[horizon_index] would see; used
// by the dump-env verb.
RealizedEnvironment build_config_env(const ExperimentConfig& config,
                                     std::size_t horizon_index = 0);

// CSV (de)serialization of sweep rows. Header is fixed:
// env,player,T,n_reps,mean_regret,std_regret,mean_switches,seed
std::string rows_to_csv(std::span<const SweepRow> rows);
std::vector<SweepRow> parse_sweep_csv(const std::string& text);

// Fits every (env,player) group found in a sweep CSV and renders a
// key-value report.
std::string fit_csv_report(const std::string& csv_text);

}  // namespace cbsim

#endif  // CBSIM_EXPERIMENT_HPP
