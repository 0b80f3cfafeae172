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

#include "cbsim/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace cbsim {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string Transcript::export_csv() const {
  std::ostringstream out;
  out << "t,action,loss,feedback,switch\n";
  for (std::int64_t t = 1; t <= horizon(); ++t) {
    const std::size_t i = static_cast<std::size_t>(t);
    out << t << "," << actions[i] << "," << fmt_double(losses[i]) << ","
        << fmt_double(observed[i]) << "," << static_cast<int>(switched[i])
        << "\n";
  }
  return out.str();
}

Transcript run_game(const RealizedEnvironment& env, Player& player,
                    FeedbackModel model, Rng& rng) {
  if (player.arms() != env.arms()) {
    throw std::invalid_argument("player arm count does not match environment");
  }
  if (!player.supports(model)) {
    throw std::invalid_argument("player does not support feedback model " +
                                feedback_model_name(model));
  }
  const std::int64_t horizon = env.horizon();
  Transcript tr;
  tr.actions.assign(static_cast<std::size_t>(horizon) + 1, 0);
  tr.losses.assign(static_cast<std::size_t>(horizon) + 1, 0.0);
  tr.observed.assign(static_cast<std::size_t>(horizon) + 1, 0.0);
  tr.switched.assign(static_cast<std::size_t>(horizon) + 1, 0);

  std::vector<double> full_row(static_cast<std::size_t>(env.arms()), 0.0);
  for (std::int64_t t = 1; t <= horizon; ++t) {
    const std::size_t i = static_cast<std::size_t>(t);
    const int x = player.act(t, rng);
    if (x < 0 || x >= env.arms()) {
      throw std::runtime_error("player emitted an action out of range");
    }
    tr.actions[i] = x;
    if (t >= 2 && x != tr.actions[i - 1]) {
      tr.switched[i] = 1;
      tr.switches += 1;
    }
    const double loss = env.loss(tr.actions, t);
    tr.losses[i] = loss;

    Feedback fb;
    switch (model) {
      case FeedbackModel::kCompositeBandit:
        // Switching-cost losses live in [0,2]; halve them on the way to the
        // player and keep the transcript unscaled.
        fb.value = env.switching() ? loss / 2.0 : loss;
        break;
      case FeedbackModel::kObliviousValue:
        fb.value = env.table().value(t, x);
        break;
      case FeedbackModel::kFullOblivious:
        for (int a = 0; a < env.arms(); ++a) {
          full_row[static_cast<std::size_t>(a)] = env.table().value(t, a);
        }
        fb.all_values = full_row;
        fb.value = full_row[static_cast<std::size_t>(x)];
        break;
    }
    tr.observed[i] = fb.value;
    player.feed(t, fb);
  }
  return tr;
}

double policy_regret(const RealizedEnvironment& env, const Transcript& transcript) {
  if (transcript.horizon() != env.horizon()) {
    throw std::invalid_argument("transcript does not match environment horizon");
  }
  double player_total = 0.0;
  for (std::int64_t t = 1; t <= env.horizon(); ++t) {
    player_total += transcript.losses[static_cast<std::size_t>(t)];
  }
  double best = env.total_constant_loss(0);
  for (int x = 1; x < env.arms(); ++x) {
    best = std::min(best, env.total_constant_loss(x));
  }
  return player_total - best;
}

std::vector<double> per_round_regret(const RealizedEnvironment& env,
                                     const Transcript& transcript, int chi) {
  if (chi < 0) chi = env.metadata().chi;
  if (chi < 0 || chi >= env.arms()) {
    throw std::invalid_argument("environment has no recorded better action");
  }
  std::vector<double> out(static_cast<std::size_t>(env.horizon()) + 1, 0.0);
  for (std::int64_t t = 1; t <= env.horizon(); ++t) {
    out[static_cast<std::size_t>(t)] =
        transcript.losses[static_cast<std::size_t>(t)] -
        env.constant_loss(chi, t);
  }
  return out;
}

namespace {

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t idx = static_cast<std::size_t>(pos + 0.5);  // nearest rank
  return sorted[std::min(idx, sorted.size() - 1)];
}

double sample_std(const std::vector<double>& values, double mean) {
  if (values.size() < 2) return 0.0;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

}  // namespace

std::string RegretStats::to_text() const {
  std::ostringstream out;
  out << "n_reps " << n_reps << "\n";
  out << "mean_regret " << fmt_double(mean_regret) << "\n";
  out << "std_regret " << fmt_double(std_regret) << "\n";
  out << "min_regret " << fmt_double(min_regret) << "\n";
  out << "q25_regret " << fmt_double(q25_regret) << "\n";
  out << "median_regret " << fmt_double(median_regret) << "\n";
  out << "q75_regret " << fmt_double(q75_regret) << "\n";
  out << "max_regret " << fmt_double(max_regret) << "\n";
  out << "mean_switches " << fmt_double(mean_switches) << "\n";
  out << "std_switches " << fmt_double(std_switches) << "\n";
  return out.str();
}

RegretStats monte_carlo(const EnvFactory& env_factory,
                        const PlayerFactory& player_factory,
                        FeedbackModel model, std::int64_t n_reps,
                        std::uint64_t master_seed, int parallelism) {
  if (n_reps < 1) throw std::invalid_argument("n_reps must be >= 1");
  if (parallelism <= 0) {
    parallelism = static_cast<int>(std::thread::hardware_concurrency());
    if (parallelism <= 0) parallelism = 1;
  }
  parallelism = static_cast<int>(
      std::min<std::int64_t>(parallelism, n_reps));

  std::vector<double> regrets(static_cast<std::size_t>(n_reps), 0.0);
  std::vector<double> switch_counts(static_cast<std::size_t>(n_reps), 0.0);

  std::atomic<std::int64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&]() {
    for (;;) {
      const std::int64_t rep = next.fetch_add(1);
      if (rep >= n_reps || failed.load()) return;
      try {
        RealizedEnvironment env = env_factory(derive_seed(master_seed, 0, rep));
        std::unique_ptr<Player> player = player_factory(env);
        Rng game_rng(derive_seed(master_seed, 1, rep));
        Transcript tr = run_game(env, *player, model, game_rng);
        regrets[static_cast<std::size_t>(rep)] = policy_regret(env, tr);
        switch_counts[static_cast<std::size_t>(rep)] =
            static_cast<double>(tr.switches);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!failed.exchange(true)) error = std::current_exception();
        return;
      }
    }
  };

  if (parallelism == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(parallelism));
    for (int i = 0; i < parallelism; ++i) threads.emplace_back(worker);
    for (auto& th : threads) th.join();
  }
  if (failed.load()) std::rethrow_exception(error);

  RegretStats stats;
  stats.n_reps = n_reps;
  double sum = 0.0;
  double switch_sum = 0.0;
  for (std::int64_t r = 0; r < n_reps; ++r) {
    sum += regrets[static_cast<std::size_t>(r)];
    switch_sum += switch_counts[static_cast<std::size_t>(r)];
  }
  stats.mean_regret = sum / static_cast<double>(n_reps);
  stats.mean_switches = switch_sum / static_cast<double>(n_reps);
  stats.std_regret = sample_std(regrets, stats.mean_regret);
  stats.std_switches = sample_std(switch_counts, stats.mean_switches);

  std::vector<double> sorted = regrets;
  std::sort(sorted.begin(), sorted.end());
  stats.min_regret = sorted.front();
  stats.q25_regret = quantile_sorted(sorted, 0.25);
  stats.median_regret = quantile_sorted(sorted, 0.5);
  stats.q75_regret = quantile_sorted(sorted, 0.75);
  stats.max_regret = sorted.back();
  return stats;
}

}  // namespace cbsim
