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

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "cbsim/cbsim.h"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

constexpr const char* kLinearEnvSpec =
    R"({"kind": "linear_iid", "coeffs": [0.5, 0.5], "gap": 0.05})";

}  // namespace

TEST_CASE("c api basics") {
  CHECK(std::strlen(cbsim_version()) > 0);
  CHECK(std::string(cbsim_status_name(CBSIM_OK)) == "ok");
  CHECK(std::string(cbsim_status_name(CBSIM_ERROR_PARSE)) == "parse_error");
}

TEST_CASE("c api environment lifecycle") {
  cbsim_env* env = nullptr;
  REQUIRE(cbsim_env_create(kLinearEnvSpec, 64, 42, &env) == CBSIM_OK);
  REQUIRE(env != nullptr);

  int64_t horizon = 0;
  CHECK(cbsim_env_horizon(env, &horizon) == CBSIM_OK);
  CHECK(horizon == 64);
  int32_t arms = 0;
  CHECK(cbsim_env_arms(env, &arms) == CBSIM_OK);
  CHECK(arms == 2);

  double v = -1.0;
  CHECK(cbsim_env_loss_value(env, 1, 0, &v) == CBSIM_OK);
  CHECK(v >= 0.0);
  CHECK(v <= 1.0);
  CHECK(cbsim_env_loss_value(env, 65, 0, &v) == CBSIM_ERROR_INVALID_ARGUMENT);
  CHECK(std::strlen(cbsim_last_error()) > 0);

  CHECK(cbsim_env_write_dump(env, "c_api_env_dump.txt") == CBSIM_OK);
  CHECK(slurp("c_api_env_dump.txt").rfind("cbsim-env 1\n", 0) == 0);
  std::remove("c_api_env_dump.txt");

  cbsim_env_destroy(env);

  cbsim_env* bad = nullptr;
  CHECK(cbsim_env_create(R"({"kind": "nope"})", 64, 1, &bad) == CBSIM_ERROR_PARSE);
  CHECK(bad == nullptr);
  CHECK(cbsim_env_create("not json", 64, 1, &bad) == CBSIM_ERROR_PARSE);
  CHECK(cbsim_env_create(kLinearEnvSpec, 64, 1, nullptr) ==
        CBSIM_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("c api game round trip") {
  cbsim_env* env = nullptr;
  REQUIRE(cbsim_env_create(kLinearEnvSpec, 128, 7, &env) == CBSIM_OK);

  cbsim_player* bad_player = nullptr;
  CHECK(cbsim_player_create("ucb", env, &bad_player) ==
        CBSIM_ERROR_INVALID_ARGUMENT);

  cbsim_player* player = nullptr;
  REQUIRE(cbsim_player_create("constant:0", env, &player) == CBSIM_OK);

  cbsim_transcript* transcript = nullptr;
  REQUIRE(cbsim_game_run(env, player, "composite_bandit", 99, &transcript) ==
          CBSIM_OK);

  int64_t switches = -1;
  CHECK(cbsim_transcript_switches(transcript, &switches) == CBSIM_OK);
  CHECK(switches == 0);
  double regret = -1.0;
  CHECK(cbsim_transcript_policy_regret(transcript, env, &regret) == CBSIM_OK);
  CHECK(regret >= 0.0);

  CHECK(cbsim_transcript_write_csv(transcript, "c_api_transcript.csv") == CBSIM_OK);
  CHECK(slurp("c_api_transcript.csv").rfind("t,action,loss,feedback,switch\n", 0) == 0);
  std::remove("c_api_transcript.csv");

  cbsim_transcript* bad_tr = nullptr;
  CHECK(cbsim_game_run(env, player, "telepathy", 99, &bad_tr) ==
        CBSIM_ERROR_INVALID_ARGUMENT);

  cbsim_transcript_destroy(transcript);
  cbsim_player_destroy(player);
  cbsim_env_destroy(env);
}

TEST_CASE("c api exponent fit") {
  const double horizons[4] = {1024, 2048, 4096, 8192};
  double regrets[4];
  for (int i = 0; i < 4; ++i) regrets[i] = 2.0 * std::pow(horizons[i], 0.5);
  double slope = 0.0;
  double intercept = 0.0;
  double residual = -1.0;
  REQUIRE(cbsim_fit_exponent(horizons, regrets, 4, &slope, &intercept,
                             &residual) == CBSIM_OK);
  CHECK(slope == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(residual <= 1e-9);

  CHECK(cbsim_fit_exponent(horizons, regrets, 2, &slope, &intercept, nullptr) ==
        CBSIM_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("c api experiment run is reproducible") {
  const char* config = R"({
    "environment": {"kind": "linear_iid", "coeffs": [1], "gap": 0.1},
    "player": "exp3",
    "horizons": [32, 64, 128],
    "n_reps": 4,
    "master_seed": 3,
    "out_prefix": "c_api_experiment/sweep"
  })";

  cbsim_run_options options{};
  options.parallelism = 1;
  char* summary = nullptr;
  REQUIRE(cbsim_experiment_run(config, &options, &summary) == CBSIM_OK);
  REQUIRE(summary != nullptr);
  CHECK(std::string(summary).find("slope ") != std::string::npos);
  cbsim_string_destroy(summary);
  const std::string csv_first = slurp("c_api_experiment/sweep.csv");

  options.parallelism = 2;
  REQUIRE(cbsim_experiment_run(config, &options, nullptr) == CBSIM_OK);
  CHECK(slurp("c_api_experiment/sweep.csv") == csv_first);

  char* report = nullptr;
  REQUIRE(cbsim_fit_csv_report("c_api_experiment/sweep.csv", &report) == CBSIM_OK);
  CHECK(std::string(report).find("group env=linear_iid player=exp3") !=
        std::string::npos);
  cbsim_string_destroy(report);

  // overrides: --reps and --out
  cbsim_run_options override_options{};
  override_options.has_reps = 1;
  override_options.reps = 2;
  override_options.out_prefix = "c_api_experiment/override";
  REQUIRE(cbsim_experiment_run(config, &override_options, nullptr) == CBSIM_OK);
  const std::string overridden = slurp("c_api_experiment/override.csv");
  CHECK(overridden.find(",2,") != std::string::npos);

  CHECK(cbsim_experiment_dump_env(config, &options, "c_api_experiment/env.txt") ==
        CBSIM_OK);
  CHECK(slurp("c_api_experiment/env.txt").rfind("cbsim-env 1\n", 0) == 0);

  CHECK(cbsim_experiment_run("{}", &options, nullptr) == CBSIM_ERROR_PARSE);
  CHECK(std::strlen(cbsim_last_error()) > 0);

  std::remove("c_api_experiment/sweep.csv");
  std::remove("c_api_experiment/sweep_summary.txt");
  std::remove("c_api_experiment/override.csv");
  std::remove("c_api_experiment/override_summary.txt");
  std::remove("c_api_experiment/env.txt");
}
