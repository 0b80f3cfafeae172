/* Copyright 2026 The cbsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface of the cbsim shared library: composite-loss bandit
 * environments, players, single games, and config-driven regret-scaling
 * experiments behind opaque handles.
 *
 * Every fallible call returns a cbsim_status; on failure,
 * cbsim_last_error() describes the problem for the calling thread. Handles
 * are released with the matching *_destroy function (safe on NULL).
 */

#ifndef CBSIM_CBSIM_H
#define CBSIM_CBSIM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cbsim_status {
  CBSIM_OK = 0,
  CBSIM_ERROR_INVALID_ARGUMENT = 1,
  CBSIM_ERROR_PARSE = 2,
  CBSIM_ERROR_IO = 3,
  CBSIM_ERROR_INTERNAL = 4
} cbsim_status;

const char* cbsim_status_name(cbsim_status status);

/* Message for the last failing call on this thread; empty string if none. */
const char* cbsim_last_error(void);

const char* cbsim_version(void);

typedef struct cbsim_env cbsim_env;
typedef struct cbsim_player cbsim_player;
typedef struct cbsim_transcript cbsim_transcript;

/* --- environments -------------------------------------------------------
 * spec_json is the same "environment" object the experiment config uses,
 * e.g. {"kind":"min_adversary"} or
 * {"kind":"linear_iid","coeffs":[0,1],"gap":0.05}. The seed fully
 * determines the realized loss table.
 */
cbsim_status cbsim_env_create(const char* spec_json, int64_t horizon,
                              uint64_t seed, cbsim_env** out);
cbsim_status cbsim_env_horizon(const cbsim_env* env, int64_t* out);
cbsim_status cbsim_env_arms(const cbsim_env* env, int32_t* out);
cbsim_status cbsim_env_loss_value(const cbsim_env* env, int64_t round,
                                  int32_t arm, double* out);
/* Writes the audit dump (metadata, event flags, orientations, loss table). */
cbsim_status cbsim_env_write_dump(const cbsim_env* env, const char* path);
void cbsim_env_destroy(cbsim_env* env);

/* --- players -------------------------------------------------------------
 * spec: "exp3", "linear", "constant:<arm>", "batched:exp3:B=<n|auto>".
 * The player is built against the given environment (arm count, horizon,
 * combining rule).
 */
cbsim_status cbsim_player_create(const char* spec, const cbsim_env* env,
                                 cbsim_player** out);
void cbsim_player_destroy(cbsim_player* player);

/* --- games ---------------------------------------------------------------
 * feedback: "composite_bandit", "oblivious_value", or "full". The player
 * handle is consumed statefully; create a fresh player per game.
 */
cbsim_status cbsim_game_run(const cbsim_env* env, cbsim_player* player,
                            const char* feedback, uint64_t seed,
                            cbsim_transcript** out);
cbsim_status cbsim_transcript_policy_regret(const cbsim_transcript* transcript,
                                            const cbsim_env* env, double* out);
cbsim_status cbsim_transcript_switches(const cbsim_transcript* transcript,
                                       int64_t* out);
/* One row per round: t,action,loss,feedback,switch. */
cbsim_status cbsim_transcript_write_csv(const cbsim_transcript* transcript,
                                        const char* path);
void cbsim_transcript_destroy(cbsim_transcript* transcript);

/* --- experiments ---------------------------------------------------------
 * config_json is a full experiment config document. Optional CLI-style
 * overrides are applied before running. parallelism 0 means "hardware".
 */
typedef struct cbsim_run_options {
  int has_seed;
  uint64_t seed;
  int has_reps;
  int64_t reps;
  const char* out_prefix; /* NULL keeps the config value */
  int32_t parallelism;
} cbsim_run_options;

/* Runs the sweep, writes <prefix>.csv and <prefix>_summary.txt, and (when
 * out_summary is non-NULL) returns the summary text; free it with
 * cbsim_string_destroy. */
cbsim_status cbsim_experiment_run(const char* config_json,
                                  const cbsim_run_options* options,
                                  char** out_summary);

/* Builds the environment replication 0 of the first horizon would see and
 * writes its dump to out_path. */
cbsim_status cbsim_experiment_dump_env(const char* config_json,
                                       const cbsim_run_options* options,
                                       const char* out_path);

/* Least-squares exponent fit on (ln T, ln regret); needs >= 3 points with
 * positive regret. residual may be NULL. */
cbsim_status cbsim_fit_exponent(const double* horizons,
                                const double* mean_regrets, size_t n_points,
                                double* slope, double* intercept,
                                double* residual);

/* Fits every (env,player) group of a sweep CSV file and returns a key-value
 * report; free it with cbsim_string_destroy. */
cbsim_status cbsim_fit_csv_report(const char* csv_path, char** out_report);

void cbsim_string_destroy(char* text);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CBSIM_CBSIM_H */
