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

#include "cbsim/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "cbsim/adversary.hpp"

namespace cbsim {

namespace {

using nlohmann::json;

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void require_keys(const json& obj, const char* where,
                  std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) {
      if (it.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw std::invalid_argument(std::string("unknown key \"") + it.key() +
                                  "\" in " + where);
    }
  }
}

double number_or(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) {
    throw std::invalid_argument(std::string(key) + " must be a number");
  }
  return obj[key].get<double>();
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");
  require_keys(doc, "config",
               {"environment", "player", "feedback", "horizons", "n_reps",
                "master_seed", "out_prefix"});

  ExperimentConfig config;
  if (!doc.contains("environment") || !doc["environment"].is_object()) {
    throw std::invalid_argument("config needs an \"environment\" object");
  }
  config.environment_json = doc["environment"].dump();
  if (!doc.contains("player") || !doc["player"].is_string()) {
    throw std::invalid_argument("config needs a \"player\" string");
  }
  config.player = doc["player"].get<std::string>();
  if (!doc.contains("out_prefix") || !doc["out_prefix"].is_string()) {
    throw std::invalid_argument("config needs an \"out_prefix\" string");
  }
  config.out_prefix = doc["out_prefix"].get<std::string>();

  if (doc.contains("feedback")) {
    config.feedback = parse_feedback_model(doc["feedback"].get<std::string>());
  }
  if (doc.contains("horizons")) {
    if (!doc["horizons"].is_array() || doc["horizons"].empty()) {
      throw std::invalid_argument("horizons must be a nonempty array");
    }
    for (const auto& h : doc["horizons"]) {
      if (!h.is_number_integer()) throw std::invalid_argument("horizons must be integers");
      config.horizons.push_back(h.get<std::int64_t>());
    }
    for (std::size_t i = 1; i < config.horizons.size(); ++i) {
      if (config.horizons[i] <= config.horizons[i - 1]) {
        throw std::invalid_argument("horizons must be strictly increasing");
      }
    }
  } else {
    for (std::int64_t t = 1 << 10; t <= 1 << 16; t <<= 1) {
      config.horizons.push_back(t);
    }
  }
  if (doc.contains("n_reps")) {
    config.n_reps = doc["n_reps"].get<std::int64_t>();
    if (config.n_reps < 1) throw std::invalid_argument("n_reps must be >= 1");
  }
  if (doc.contains("master_seed")) {
    config.master_seed = doc["master_seed"].get<std::uint64_t>();
  }
  return config;
}

std::pair<EnvFactory, std::string> make_env_factory(
    const std::string& environment_json, std::int64_t horizon) {
  json spec;
  try {
    spec = json::parse(environment_json);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("environment spec is not valid JSON: ") +
                                e.what());
  }
  if (!spec.is_object() || !spec.contains("kind") || !spec["kind"].is_string()) {
    throw std::invalid_argument("environment spec needs a \"kind\" string");
  }
  const std::string kind = spec["kind"].get<std::string>();

  if (kind == "linear_iid") {
    require_keys(spec, "linear_iid environment", {"kind", "coeffs", "gap", "arms"});
    if (!spec.contains("coeffs") || !spec["coeffs"].is_array()) {
      throw std::invalid_argument("linear_iid environment needs a coeffs array");
    }
    std::vector<double> coeffs;
    for (const auto& a : spec["coeffs"]) coeffs.push_back(a.get<double>());
    const double gap = number_or(spec, "gap", 0.05);
    const int arms = spec.contains("arms") ? spec["arms"].get<int>() : 2;
    make_linear_combiner(coeffs);  // validate now, not per replication
    EnvFactory factory = [coeffs, gap, arms, horizon](std::uint64_t seed) {
      Rng rng(seed);
      RealizedEnvironment env =
          build_linear_iid_env(horizon, arms, coeffs, gap, rng);
      env.set_seed(seed);
      return env;
    };
    return {std::move(factory), kind};
  }

  if (kind == "min_adversary" || kind == "max_adversary") {
    require_keys(spec, "hard-adversary environment",
                 {"kind", "schedule", "epsilon", "sigma", "tau", "eta"});
    HardnessParams params;
    const bool explicit_params = spec.contains("epsilon") || spec.contains("sigma") ||
                                 spec.contains("tau") || spec.contains("eta");
    if (explicit_params) {
      if (!(spec.contains("epsilon") && spec.contains("sigma") &&
            spec.contains("tau") && spec.contains("eta"))) {
        throw std::invalid_argument(
            "explicit hard-adversary parameters need all of epsilon, sigma, tau, eta");
      }
      params.epsilon = spec["epsilon"].get<double>();
      params.sigma = spec["sigma"].get<double>();
      params.tau = spec["tau"].get<double>();
      params.eta = spec["eta"].get<double>();
    } else {
      if (spec.contains("schedule") && spec["schedule"].get<std::string>() != "auto") {
        throw std::invalid_argument("schedule must be \"auto\" or omitted");
      }
      params = default_schedule(horizon);
    }
    const bool is_min = kind == "min_adversary";
    EnvFactory factory = [params, is_min, horizon](std::uint64_t seed) {
      Rng rng(seed);
      RealizedEnvironment env = is_min ? build_min_adversary(horizon, params, rng)
                                       : build_max_adversary(horizon, params, rng);
      env.set_seed(seed);
      return env;
    };
    return {std::move(factory), kind};
  }

  if (kind == "gap_walk" || kind == "switching_cost") {
    require_keys(spec, "walk environment",
                 {"kind", "parent", "sigma", "gap", "delta", "clipped"});
    GapWalkOptions options;
    options.switching = kind == "switching_cost";
    if (spec.contains("parent")) options.parent = spec["parent"].get<std::string>();
    options.sigma = number_or(spec, "sigma", 0.0);
    options.epsilon = number_or(spec, "gap", 0.0);
    options.delta = number_or(spec, "delta", 0.0);
    if (spec.contains("clipped")) options.clipped = spec["clipped"].get<bool>();
    EnvFactory factory = [options, horizon](std::uint64_t seed) {
      Rng rng(seed);
      RealizedEnvironment env = build_gap_walk_env(horizon, options, rng);
      env.set_seed(seed);
      return env;
    };
    return {std::move(factory), kind};
  }

  throw std::invalid_argument("unknown environment kind: " + kind);
}

ScalingFit fit_exponent(std::span<const std::pair<double, double>> t_and_regret) {
  ScalingFit fit;
  for (const auto& [t, regret] : t_and_regret) {
    if (!(regret > 0.0)) {
      fit.points_dropped += 1;
      continue;
    }
    fit.points.emplace_back(std::log(t), std::log(regret));
  }
  fit.points_used = static_cast<int>(fit.points.size());
  if (fit.points_used < 3) {
    throw std::invalid_argument("exponent fit needs at least 3 positive-regret points");
  }
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (const auto& [x, y] : fit.points) {
    mean_x += x;
    mean_y += y;
  }
  mean_x /= fit.points_used;
  mean_y /= fit.points_used;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& [x, y] : fit.points) {
    sxx += (x - mean_x) * (x - mean_x);
    sxy += (x - mean_x) * (y - mean_y);
  }
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  double ss = 0.0;
  for (const auto& [x, y] : fit.points) {
    const double r = y - (fit.intercept + fit.slope * x);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / fit.points_used);
  return fit;
}

std::string rows_to_csv(std::span<const SweepRow> rows) {
  std::ostringstream out;
  out << "env,player,T,n_reps,mean_regret,std_regret,mean_switches,seed\n";
  for (const SweepRow& row : rows) {
    out << row.env_tag << "," << row.player << "," << row.horizon << ","
        << row.n_reps << "," << fmt_double(row.mean_regret) << ","
        << fmt_double(row.std_regret) << "," << fmt_double(row.mean_switches)
        << "," << row.seed << "\n";
  }
  return out.str();
}

std::vector<SweepRow> parse_sweep_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) ||
      line != "env,player,T,n_reps,mean_regret,std_regret,mean_switches,seed") {
    throw std::invalid_argument("not a cbsim sweep CSV (bad header)");
  }
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    SweepRow row;
    std::string field;
    auto next = [&](const char* what) {
      if (!std::getline(ls, field, ',')) {
        throw std::invalid_argument(std::string("sweep CSV row missing ") + what);
      }
      return field;
    };
    row.env_tag = next("env");
    row.player = next("player");
    row.horizon = std::stoll(next("T"));
    row.n_reps = std::stoll(next("n_reps"));
    row.mean_regret = std::stod(next("mean_regret"));
    row.std_regret = std::stod(next("std_regret"));
    row.mean_switches = std::stod(next("mean_switches"));
    row.seed = std::stoull(next("seed"));
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

std::string summary_text_for(const ExperimentConfig& config,
                             std::span<const SweepRow> rows,
                             const std::optional<ScalingFit>& fit,
                             const std::string& fit_failure) {
  std::ostringstream out;
  out << "cbsim-experiment-summary 1\n";
  out << "env " << (rows.empty() ? "?" : rows.front().env_tag) << "\n";
  out << "player " << config.player << "\n";
  out << "feedback " << feedback_model_name(config.feedback) << "\n";
  out << "master_seed " << config.master_seed << "\n";
  out << "n_reps " << config.n_reps << "\n";
  out << "horizons";
  for (std::int64_t t : config.horizons) out << " " << t;
  out << "\n";
  for (const SweepRow& row : rows) {
    out << "T" << row.horizon << "_mean_regret " << fmt_double(row.mean_regret)
        << "\n";
    out << "T" << row.horizon << "_mean_switches "
        << fmt_double(row.mean_switches) << "\n";
  }
  if (fit.has_value()) {
    out << "fit_points_used " << fit->points_used << "\n";
    out << "fit_points_dropped " << fit->points_dropped << "\n";
    out << "slope " << fmt_double(fit->slope) << "\n";
    out << "intercept " << fmt_double(fit->intercept) << "\n";
    out << "residual " << fmt_double(fit->residual) << "\n";
  } else {
    out << "fit none (" << fit_failure << ")\n";
  }
  return out.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("failed while writing " + path);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, int parallelism) {
  ExperimentResult result;
  PlayerFactory player_factory = [spec = config.player](const RealizedEnvironment& env) {
    return make_player(spec, env);
  };

  for (std::size_t h = 0; h < config.horizons.size(); ++h) {
    const std::int64_t horizon = config.horizons[h];
    auto [env_factory, env_tag] = make_env_factory(config.environment_json, horizon);
    const std::uint64_t horizon_seed = derive_seed(config.master_seed, 2, h);
    RegretStats stats = monte_carlo(env_factory, player_factory, config.feedback,
                                    config.n_reps, horizon_seed, parallelism);
    SweepRow row;
    row.env_tag = env_tag;
    row.player = config.player;
    row.horizon = horizon;
    row.n_reps = config.n_reps;
    row.mean_regret = stats.mean_regret;
    row.std_regret = stats.std_regret;
    row.mean_switches = stats.mean_switches;
    row.seed = config.master_seed;
    result.rows.push_back(std::move(row));
  }

  std::string fit_failure;
  std::vector<std::pair<double, double>> points;
  for (const SweepRow& row : result.rows) {
    points.emplace_back(static_cast<double>(row.horizon), row.mean_regret);
  }
  try {
    result.fit = fit_exponent(points);
  } catch (const std::exception& e) {
    fit_failure = e.what();
  }

  result.csv_text = rows_to_csv(result.rows);
  result.summary_text = summary_text_for(config, result.rows, result.fit, fit_failure);
  result.csv_path = config.out_prefix + ".csv";
  result.summary_path = config.out_prefix + "_summary.txt";
  write_text_file(result.csv_path, result.csv_text);
  write_text_file(result.summary_path, result.summary_text);
  return result;
}

RealizedEnvironment build_config_env(const ExperimentConfig& config,
                                     std::size_t horizon_index) {
  if (horizon_index >= config.horizons.size()) {
    throw std::invalid_argument("horizon index out of range");
  }
  auto [env_factory, env_tag] =
      make_env_factory(config.environment_json, config.horizons[horizon_index]);
  const std::uint64_t horizon_seed =
      derive_seed(config.master_seed, 2, horizon_index);
  return env_factory(derive_seed(horizon_seed, 0, 0));
}

std::string fit_csv_report(const std::string& csv_text) {
  const std::vector<SweepRow> rows = parse_sweep_csv(csv_text);
  if (rows.empty()) throw std::invalid_argument("sweep CSV has no data rows");

  std::map<std::pair<std::string, std::string>,
           std::vector<std::pair<double, double>>>
      groups;
  for (const SweepRow& row : rows) {
    groups[{row.env_tag, row.player}].emplace_back(
        static_cast<double>(row.horizon), row.mean_regret);
  }
  std::ostringstream out;
  out << "cbsim-fit-report 1\n";
  for (const auto& [key, points] : groups) {
    out << "group env=" << key.first << " player=" << key.second << "\n";
    try {
      const ScalingFit fit = fit_exponent(points);
      out << "points_used " << fit.points_used << "\n";
      out << "points_dropped " << fit.points_dropped << "\n";
      out << "slope " << fmt_double(fit.slope) << "\n";
      out << "intercept " << fmt_double(fit.intercept) << "\n";
      out << "residual " << fmt_double(fit.residual) << "\n";
    } catch (const std::exception& e) {
      out << "fit none (" << e.what() << ")\n";
    }
  }
  return out.str();
}

}  // namespace cbsim
