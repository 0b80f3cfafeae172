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

// Command-line front end for the cbsim shared library. Talks to the core
// exclusively through the C API in cbsim/cbsim.h.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cbsim/cbsim.h"

namespace {

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream buf;
  buf << in.rdbuf();
  out = buf.str();
  return true;
}

int report_failure(const char* what, cbsim_status status) {
  std::cerr << "cbsim: " << what << " failed (" << cbsim_status_name(status)
            << "): " << cbsim_last_error() << "\n";
  return 1;
}

struct CommonFlags {
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::int64_t reps = 0;
  bool reps_set = false;
  std::string out;
  int parallelism = 0;

  cbsim_run_options options() const {
    cbsim_run_options o{};
    o.has_seed = seed_set ? 1 : 0;
    o.seed = seed;
    o.has_reps = reps_set ? 1 : 0;
    o.reps = reps;
    o.out_prefix = out.empty() ? nullptr : out.c_str();
    o.parallelism = parallelism;
    return o;
  }
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--seed", flags.seed, "Override the config master seed")
      ->each([&flags](const std::string&) { flags.seed_set = true; });
  cmd->add_option("--reps", flags.reps, "Override the config replication count")
      ->each([&flags](const std::string&) { flags.reps_set = true; });
  cmd->add_option("--out", flags.out, "Override the config output path prefix");
  cmd->add_option("--parallelism", flags.parallelism,
                  "Worker threads for replications (0 = hardware)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"composite-loss bandit simulator"};
  app.require_subcommand(1);

  std::string run_config_path;
  CommonFlags run_flags;
  CLI::App* run = app.add_subcommand(
      "run", "Run the experiment sweep described by a JSON config");
  run->add_option("config", run_config_path, "Path to the config JSON")
      ->required();
  add_common_flags(run, run_flags);

  std::string fit_csv_path;
  CLI::App* fit = app.add_subcommand(
      "fit", "Fit regret-scaling exponents from a sweep CSV");
  fit->add_option("csv", fit_csv_path, "Path to a sweep CSV")->required();

  std::string dump_config_path;
  CommonFlags dump_flags;
  CLI::App* dump = app.add_subcommand(
      "dump-env", "Realize and dump the first-horizon environment of a config");
  dump->add_option("config", dump_config_path, "Path to the config JSON")
      ->required();
  add_common_flags(dump, dump_flags);

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    std::string config;
    if (!read_file(run_config_path, config)) {
      std::cerr << "cbsim: cannot read " << run_config_path << "\n";
      return 1;
    }
    const cbsim_run_options options = run_flags.options();
    char* summary = nullptr;
    const cbsim_status status = cbsim_experiment_run(config.c_str(), &options, &summary);
    if (status != CBSIM_OK) return report_failure("run", status);
    std::cout << summary;
    cbsim_string_destroy(summary);
    return 0;
  }

  if (fit->parsed()) {
    char* report = nullptr;
    const cbsim_status status = cbsim_fit_csv_report(fit_csv_path.c_str(), &report);
    if (status != CBSIM_OK) return report_failure("fit", status);
    std::cout << report;
    cbsim_string_destroy(report);
    return 0;
  }

  if (dump->parsed()) {
    std::string config;
    if (!read_file(dump_config_path, config)) {
      std::cerr << "cbsim: cannot read " << dump_config_path << "\n";
      return 1;
    }
    const cbsim_run_options options = dump_flags.options();
    const std::string out_path =
        dump_flags.out.empty() ? dump_config_path + ".env.txt" : dump_flags.out;
    cbsim_run_options env_options = options;
    env_options.out_prefix = nullptr;  // --out names the dump file here
    const cbsim_status status =
        cbsim_experiment_dump_env(config.c_str(), &env_options, out_path.c_str());
    if (status != CBSIM_OK) return report_failure("dump-env", status);
    std::cout << "wrote " << out_path << "\n";
    return 0;
  }

  return 1;
}
