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

#include "cbsim/cbsim.h"

#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cbsim/engine.hpp"
#include "cbsim/environment.hpp"
#include "cbsim/experiment.hpp"
#include "cbsim/players.hpp"

struct cbsim_env {
  cbsim::RealizedEnvironment env;
};

struct cbsim_player {
  std::unique_ptr<cbsim::Player> player;
};

struct cbsim_transcript {
  cbsim::Transcript transcript;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

cbsim_status fail(cbsim_status status, const std::string& message) {
  set_error(message);
  return status;
}

// Runs body(), translating exceptions into status codes.
template <typename Fn>
cbsim_status guarded(Fn&& body) {
  try {
    cbsim_status status = body();
    if (status == CBSIM_OK) g_last_error.clear();
    return status;
  } catch (const std::invalid_argument& e) {
    return fail(CBSIM_ERROR_INVALID_ARGUMENT, e.what());
  } catch (const std::out_of_range& e) {
    return fail(CBSIM_ERROR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(CBSIM_ERROR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CBSIM_ERROR_INTERNAL, e.what());
  } catch (...) {
    return fail(CBSIM_ERROR_INTERNAL, "unknown error");
  }
}

char* copy_string(const std::string& text) {
  char* out = new char[text.size() + 1];
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

cbsim::ExperimentConfig config_with_overrides(const char* config_json,
                                              const cbsim_run_options* options) {
  if (config_json == nullptr) throw std::invalid_argument("config_json is NULL");
  cbsim::ExperimentConfig config = cbsim::ExperimentConfig::parse(config_json);
  if (options != nullptr) {
    if (options->has_seed) config.master_seed = options->seed;
    if (options->has_reps) {
      if (options->reps < 1) throw std::invalid_argument("reps override must be >= 1");
      config.n_reps = options->reps;
    }
    if (options->out_prefix != nullptr) config.out_prefix = options->out_prefix;
  }
  return config;
}

}  // namespace

extern "C" {

const char* cbsim_status_name(cbsim_status status) {
  switch (status) {
    case CBSIM_OK: return "ok";
    case CBSIM_ERROR_INVALID_ARGUMENT: return "invalid_argument";
    case CBSIM_ERROR_PARSE: return "parse_error";
    case CBSIM_ERROR_IO: return "io_error";
    case CBSIM_ERROR_INTERNAL: return "internal_error";
  }
  return "unknown";
}

const char* cbsim_last_error(void) { return g_last_error.c_str(); }

const char* cbsim_version(void) { return "0.1.0"; }

cbsim_status cbsim_env_create(const char* spec_json, int64_t horizon,
                              uint64_t seed, cbsim_env** out) {
  return guarded([&]() -> cbsim_status {
    if (spec_json == nullptr || out == nullptr) {
      return fail(CBSIM_ERROR_INVALID_ARGUMENT, "NULL argument");
    }
    *out = nullptr;
    std::pair<cbsim::EnvFactory, std::string> factory;
    try {
      factory = cbsim::make_env_factory(spec_json, horizon);
    } catch (const std::invalid_argument& e) {
      return fail(CBSIM_ERROR_PARSE, e.what());
    }
    auto handle = std::make_unique<cbsim_env>();
    handle->env = factory.first(seed);
    *out = handle.release();
    return CBSIM_OK;
  });
}

cbsim_status cbsim_env_horizon(const cbsim_env* env, int64_t* out) {
  return guarded([&]() -> cbsim_status {
    if (env == nullptr || out == nullptr) {
      return fail(CBSIM_ERROR_INVALID_ARGUMENT, "NULL argument");
    }
    *out = env->env.horizon();
    return CBSIM_OK;
  });
}

cbsim_status cbsim_env_arms(const cbsim_env* env, int32_t* out) {
  return guarded([&]() -> cbsim_status {
    if (env == nullptr || out == nullptr) {
      return fail(CBSIM_ERROR_INVALID_ARGUMENT, "NULL argument");
    }
    *out = env->env.arms();
    return CBSIM_OK;
  });
}

cbsim_status cbsim_env_loss_value(const cbsim_env* env, int64_t round,
                                  int32_t arm, double* out) {
  return guarded([&]() -> cbsim_status {
    if (env == nullptr || out == nullptr) {
      return fail(CBSIM_ERROR_INVALID_ARGUMENT, "NULL argument");
    }
    *out = env->env.table().value(round, arm);
    return CBSIM_OK;
  });
}

cbsim_status cbsim_env_write_dump(const cbsim_env* env, const char* path) {
  return guarded([&]() -> cbsim_status {
    if (env == nullptr || path == nullptr) {
      return fail(CBSIM_ERROR_INVALID_ARGUMENT, "NULL argument");
    }
    try {
      cbsim::write_env_dump(env->env, path);
    } catch (const std::runtime_error& e) {
      return fail(CBSIM_ERROR_IO, e.what());
    }
    return CBSIM_OK;
  });
}

void cbsim_env_destroy(cbsim_env* env) { delete env; }

cbsim_status cbsim_player_create(const char* spec, const cbsim_env* env,
                                 cbsim_player** out) {
  return guarded([&]() -> cbsim_status {
    if (spec == nullptr || env == nullptr || out == nullptr) {
      return fail(CBSIM_ERROR_INVALID_ARGUMENT, "NULL argument");
    }
    *out = nullptr;
    auto handle = std::make_unique<cbsim_player>();
    handle->player = cbsim::make_player(spec, env->env);
    *out = handle.release();
    return CBSIM_OK;
  });
}

void cbsim_player_destroy(cbsim_player* player) { delete player; }

cbsim_status cbsim_game_run(const cbsim_env* env, cbsim_player* player,
                            const char* feedback, uint64_t seed,
                            cbsim_transcript** out) {
  return guarded([&]() -> cbsim_status {
    if (env == nullptr || player == nullptr || feedback == nullptr ||
        out == nullptr) {
      return fail(CBSIM_ERROR_INVALID_ARGUMENT, "NULL argument");
    }
    *out = nullptr;
    const cbsim::FeedbackModel model = cbsim::parse_feedback_model(feedback);
    cbsim::Rng rng(seed);
    auto handle = std::make_unique<cbsim_transcript>();
    handle->transcript = cbsim::run_game(env->env, *player->player, model, rng);
    *out = handle.release();
    return CBSIM_OK;
  });
}

cbsim_status cbsim_transcript_policy_regret(const cbsim_transcript* transcript,
                                            const cbsim_env* env, double* out) {
  return guarded([&]() -> cbsim_status {
    if (transcript == nullptr || env == nullptr || out == nullptr) {
      return fail(CBSIM_ERROR_INVALID_ARGUMENT, "NULL argument");
    }
    *out = cbsim::policy_regret(env->env, transcript->transcript);
    return CBSIM_OK;
  });
}

cbsim_status cbsim_transcript_switches(const cbsim_transcript* transcript,
                                       int64_t* out) {
  return guarded([&]() -> cbsim_status {
    if (transcript == nullptr || out == nullptr) {
      return fail(CBSIM_ERROR_INVALID_ARGUMENT, "NULL argument");
    }
    *out = transcript->transcript.switches;
    return CBSIM_OK;
  });
}

cbsim_status cbsim_transcript_write_csv(const cbsim_transcript* transcript,
                                        const char* path) {
  return guarded([&]() -> cbsim_status {
    if (transcript == nullptr || path == nullptr) {
      return fail(CBSIM_ERROR_INVALID_ARGUMENT, "NULL argument");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) return fail(CBSIM_ERROR_IO, std::string("cannot open ") + path);
    out << transcript->transcript.export_csv();
    if (!out) return fail(CBSIM_ERROR_IO, std::string("failed while writing ") + path);
    return CBSIM_OK;
  });
}

void cbsim_transcript_destroy(cbsim_transcript* transcript) { delete transcript; }

cbsim_status cbsim_experiment_run(const char* config_json,
                                  const cbsim_run_options* options,
                                  char** out_summary) {
  return guarded([&]() -> cbsim_status {
    cbsim::ExperimentConfig config;
    try {
      config = config_with_overrides(config_json, options);
    } catch (const std::invalid_argument& e) {
      return fail(CBSIM_ERROR_PARSE, e.what());
    }
    const int parallelism = options != nullptr ? options->parallelism : 0;
    cbsim::ExperimentResult result = cbsim::run_experiment(config, parallelism);
    if (out_summary != nullptr) *out_summary = copy_string(result.summary_text);
    return CBSIM_OK;
  });
}

cbsim_status cbsim_experiment_dump_env(const char* config_json,
                                       const cbsim_run_options* options,
                                       const char* out_path) {
  return guarded([&]() -> cbsim_status {
    if (out_path == nullptr) return fail(CBSIM_ERROR_INVALID_ARGUMENT, "NULL out_path");
    cbsim::ExperimentConfig config;
    try {
      config = config_with_overrides(config_json, options);
    } catch (const std::invalid_argument& e) {
      return fail(CBSIM_ERROR_PARSE, e.what());
    }
    const cbsim::RealizedEnvironment env = cbsim::build_config_env(config, 0);
    try {
      cbsim::write_env_dump(env, out_path);
    } catch (const std::runtime_error& e) {
      return fail(CBSIM_ERROR_IO, e.what());
    }
    return CBSIM_OK;
  });
}

cbsim_status cbsim_fit_exponent(const double* horizons,
                                const double* mean_regrets, size_t n_points,
                                double* slope, double* intercept,
                                double* residual) {
  return guarded([&]() -> cbsim_status {
    if (horizons == nullptr || mean_regrets == nullptr || slope == nullptr ||
        intercept == nullptr) {
      return fail(CBSIM_ERROR_INVALID_ARGUMENT, "NULL argument");
    }
    std::vector<std::pair<double, double>> points;
    points.reserve(n_points);
    for (size_t i = 0; i < n_points; ++i) {
      points.emplace_back(horizons[i], mean_regrets[i]);
    }
    const cbsim::ScalingFit fit = cbsim::fit_exponent(points);
    *slope = fit.slope;
    *intercept = fit.intercept;
    if (residual != nullptr) *residual = fit.residual;
    return CBSIM_OK;
  });
}

cbsim_status cbsim_fit_csv_report(const char* csv_path, char** out_report) {
  return guarded([&]() -> cbsim_status {
    if (csv_path == nullptr || out_report == nullptr) {
      return fail(CBSIM_ERROR_INVALID_ARGUMENT, "NULL argument");
    }
    *out_report = nullptr;
    std::ifstream in(csv_path, std::ios::binary);
    if (!in) return fail(CBSIM_ERROR_IO, std::string("cannot open ") + csv_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string report;
    try {
      report = cbsim::fit_csv_report(buf.str());
    } catch (const std::invalid_argument& e) {
      return fail(CBSIM_ERROR_PARSE, e.what());
    }
    *out_report = copy_string(report);
    return CBSIM_OK;
  });
}

void cbsim_string_destroy(char* text) { delete[] text; }

}  // extern "C"
