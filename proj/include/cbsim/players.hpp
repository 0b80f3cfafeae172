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

#ifndef CBSIM_PLAYERS_HPP
#define CBSIM_PLAYERS_HPP

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cbsim/combining.hpp"
#include "cbsim/rng.hpp"

namespace cbsim {

class RealizedEnvironment;

// What the engine reveals to the player each round.
enum class FeedbackModel {
  kCompositeBandit,  // the single number f_t(X_{1:t})
  kObliviousValue,   // the single number l_t(X_t)
  kFullOblivious,    // the vector l_t(.) over all arms
};

FeedbackModel parse_feedback_model(const std::string& name);
std::string feedback_model_name(FeedbackModel model);

struct Feedback {
  double value = 0.0;                  // scalar models
  std::span<const double> all_values;  // full model only
};

class Player {
 public:
  virtual ~Player() = default;
  virtual int arms() const = 0;
  // Rounds are 1-based; act is called before feed on every round.
  virtual int act(std::int64_t t, Rng& rng) = 0;
  virtual void feed(std::int64_t t, const Feedback& fb) = 0;
  virtual bool supports(FeedbackModel model) const = 0;
  virtual std::string name() const = 0;
};

// Exponential weights over losses with importance weighting and no explicit
// exploration mixing. Weights are kept in log domain; the sampling
// distribution is their softmax.
struct Exp3State {
  int arms = 0;
  double learning_rate = 0.0;
  std::int64_t round_budget = 0;  // horizon the rate was tuned for
  std::vector<double> log_weights;
};

// Rate constant used by the shipped players, as a multiple of the textbook
// sqrt(2 ln k / (n k)). Without exploration mixing the unit-constant rate
// needs ~(1/(rate*gap))^2 rounds to separate a gap, which for small gaps is
// most of a short horizon; the larger constant moves that transition below
// the horizons the experiments sweep and costs only a constant factor in
// the worst-case O(sqrt(n k ln k)) bound.
inline constexpr double kPlayerRateScale = 2.5;

// learning_rate = rate_scale * sqrt(2 ln k / (budget * k)).
Exp3State make_exp3_state(int arms, std::int64_t round_budget,
                          double rate_scale = 1.0);
std::vector<double> exp3_probabilities(const Exp3State& state);
int exp3_sample(const Exp3State& state, Rng& rng);
// Importance-weighted update for the sampled action; rejects losses outside
// [0, 1]. Unplayed arms are unchanged.
void exp3_update(Exp3State& state, int action, double loss);

class Exp3Player : public Player {
 public:
  explicit Exp3Player(int arms, std::int64_t round_budget,
                      double rate_scale = kPlayerRateScale);

  int arms() const override { return state_.arms; }
  int act(std::int64_t t, Rng& rng) override;
  void feed(std::int64_t t, const Feedback& fb) override;
  bool supports(FeedbackModel model) const override;
  std::string name() const override { return "exp3"; }

  const Exp3State& state() const { return state_; }

 private:
  Exp3State state_;
  int pending_action_ = -1;
};

// Round-robin pool of d+1 exponential-weights instances for linear combining
// rules, where d is the index of the first nonzero coefficient. Each round
// the active instance plays; the observed composite loss is unwound through
// the recursion z_t = (f_t - sum_{i>d} a_i z_{t-i+d}) / a_d, which recovers
// z_t = l_{t-d}(x_{t-d}), the oblivious value of the action drawn d rounds
// earlier. That value is credited to the instance that drew x_{t-d}, so
// each instance plays a plain bandit game over its own subsampled rounds
// with feedback delayed by d (always arriving before its next turn).
class LinearCompositePlayer : public Player {
 public:
  LinearCompositePlayer(const CombiningFunction& combiner, int arms,
                        std::int64_t horizon,
                        double rate_scale = kPlayerRateScale);

  int arms() const override { return arms_; }
  int act(std::int64_t t, Rng& rng) override;
  void feed(std::int64_t t, const Feedback& fb) override;
  bool supports(FeedbackModel model) const override {
    return model == FeedbackModel::kCompositeBandit;
  }
  std::string name() const override { return "linear"; }

  int delay() const { return delay_; }
  // z_t per round, 1-based; diagnostic log used by the recovery checks.
  const std::vector<double>& recovered_values() const { return z_; }
  const std::vector<std::int64_t>& pool_update_counts() const {
    return update_counts_;
  }
  const std::vector<Exp3State>& pool() const { return pool_; }

 private:
  int arms_ = 0;
  int memory_ = 0;
  int delay_ = 0;
  std::vector<double> coeffs_;
  std::vector<Exp3State> pool_;
  std::vector<std::int64_t> update_counts_;
  std::vector<int> recent_actions_;  // ring keyed by round mod (d+1)
  std::vector<double> z_;            // 1-based, grows with the rounds played
  int pending_action_ = -1;
};

class ConstantPlayer : public Player {
 public:
  ConstantPlayer(int arms, int action);

  int arms() const override { return arms_; }
  int act(std::int64_t, Rng&) override { return action_; }
  void feed(std::int64_t, const Feedback&) override {}
  bool supports(FeedbackModel) const override { return true; }
  std::string name() const override;

 private:
  int arms_ = 0;
  int action_ = 0;
};

// Plays the inner policy on meta-rounds of batch_size real rounds: the same
// action is repeated within a batch and the inner policy sees the batch
// average of the observed feedback.
class BatchedPlayer : public Player {
 public:
  BatchedPlayer(std::unique_ptr<Player> inner, std::int64_t batch_size,
                std::int64_t horizon, std::string spec_name);

  int arms() const override { return inner_->arms(); }
  int act(std::int64_t t, Rng& rng) override;
  void feed(std::int64_t t, const Feedback& fb) override;
  bool supports(FeedbackModel model) const override;
  std::string name() const override { return spec_name_; }

 private:
  std::unique_ptr<Player> inner_;
  std::int64_t batch_size_ = 1;
  std::int64_t horizon_ = 0;
  std::string spec_name_;
  int current_action_ = -1;
  double batch_sum_ = 0.0;
  std::int64_t batch_rounds_ = 0;
  std::int64_t meta_round_ = 0;
};

// Smallest B with B^3 >= T.
std::int64_t cube_root_batch(std::int64_t horizon);

// Build a player from a textual spec: "exp3", "linear", "constant:<arm>",
// "batched:<inner>:B=<n>" (B=auto picks ceil(T^{1/3})). The environment
// supplies the arm count, horizon, and (for "linear") the combining rule.
std::unique_ptr<Player> make_player(const std::string& spec,
                                    const RealizedEnvironment& env);

}  // namespace cbsim

#endif  // CBSIM_PLAYERS_HPP
