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

#include "cbsim/players.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cbsim/environment.hpp"

namespace cbsim {

FeedbackModel parse_feedback_model(const std::string& name) {
  if (name == "composite_bandit") return FeedbackModel::kCompositeBandit;
  if (name == "oblivious_value") return FeedbackModel::kObliviousValue;
  if (name == "full") return FeedbackModel::kFullOblivious;
  throw std::invalid_argument("unknown feedback model: " + name);
}

std::string feedback_model_name(FeedbackModel model) {
  switch (model) {
    case FeedbackModel::kCompositeBandit: return "composite_bandit";
    case FeedbackModel::kObliviousValue: return "oblivious_value";
    case FeedbackModel::kFullOblivious: return "full";
  }
  return "?";
}

Exp3State make_exp3_state(int arms, std::int64_t round_budget,
                          double rate_scale) {
  if (arms < 2) throw std::invalid_argument("exp3 needs at least 2 arms");
  if (round_budget < 1) round_budget = 1;
  if (!(rate_scale > 0.0)) throw std::invalid_argument("rate scale must be positive");
  Exp3State s;
  s.arms = arms;
  s.round_budget = round_budget;
  s.learning_rate = rate_scale *
                    std::sqrt(2.0 * std::log(static_cast<double>(arms)) /
                              (static_cast<double>(round_budget) * arms));
  s.log_weights.assign(static_cast<std::size_t>(arms), 0.0);
  return s;
}

std::vector<double> exp3_probabilities(const Exp3State& state) {
  const double top = *std::max_element(state.log_weights.begin(),
                                       state.log_weights.end());
  std::vector<double> p(state.log_weights.size(), 0.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::exp(state.log_weights[i] - top);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

namespace {

// max-shifted softmax normalizer; allocation-free for the per-round loop
double softmax_total(const Exp3State& state, double& top_out) {
  top_out = *std::max_element(state.log_weights.begin(), state.log_weights.end());
  double sum = 0.0;
  for (double w : state.log_weights) sum += std::exp(w - top_out);
  return sum;
}

}  // namespace

int exp3_sample(const Exp3State& state, Rng& rng) {
  double top = 0.0;
  const double total = softmax_total(state, top);
  const double u = uniform01(rng) * total;
  double acc = 0.0;
  for (int x = 0; x < state.arms; ++x) {
    acc += std::exp(state.log_weights[static_cast<std::size_t>(x)] - top);
    if (u < acc) return x;
  }
  return state.arms - 1;
}

void exp3_update(Exp3State& state, int action, double loss) {
  if (action < 0 || action >= state.arms) {
    throw std::invalid_argument("exp3 update action out of range");
  }
  if (loss < 0.0 || loss > 1.0) {
    throw std::invalid_argument("exp3 update loss outside [0,1]");
  }
  double top = 0.0;
  const double total = softmax_total(state, top);
  const double prob =
      std::exp(state.log_weights[static_cast<std::size_t>(action)] - top) / total;
  // Importance-weighted estimate: loss / p on the played arm, 0 elsewhere.
  state.log_weights[static_cast<std::size_t>(action)] -=
      state.learning_rate * loss / prob;
}

Exp3Player::Exp3Player(int arms, std::int64_t round_budget, double rate_scale)
    : state_(make_exp3_state(arms, round_budget, rate_scale)) {}

int Exp3Player::act(std::int64_t, Rng& rng) {
  pending_action_ = exp3_sample(state_, rng);
  return pending_action_;
}

void Exp3Player::feed(std::int64_t, const Feedback& fb) {
  if (pending_action_ < 0) throw std::logic_error("feed before act");
  double v = fb.value;
  if (v < -1e-9 || v > 1.0 + 1e-9) {
    throw std::runtime_error("exp3 player received feedback outside [0,1]");
  }
  exp3_update(state_, pending_action_, clip(v));
  pending_action_ = -1;
}

bool Exp3Player::supports(FeedbackModel model) const {
  return model == FeedbackModel::kCompositeBandit ||
         model == FeedbackModel::kObliviousValue;
}

namespace {

std::int64_t residue_count(std::int64_t horizon, std::int64_t modulus,
                           std::int64_t residue) {
  // |{ t in [1, T] : t mod modulus == residue }|
  if (residue == 0) return horizon / modulus;
  if (residue > horizon) return 0;
  return (horizon - residue) / modulus + 1;
}

}  // namespace

LinearCompositePlayer::LinearCompositePlayer(const CombiningFunction& combiner,
                                             int arms, std::int64_t horizon,
                                             double rate_scale)
    : arms_(arms) {
  if (combiner.kind != CombinerKind::kLinear) {
    throw std::invalid_argument("linear composite player needs a linear combiner");
  }
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  memory_ = combiner.memory;
  coeffs_ = combiner.coeffs;
  delay_ = -1;
  for (int i = 0; i <= memory_; ++i) {
    if (coeffs_[static_cast<std::size_t>(i)] > 0.0) {
      delay_ = i;
      break;
    }
  }
  if (delay_ < 0) throw std::invalid_argument("combiner has no nonzero coefficient");

  const std::int64_t pool_size = delay_ + 1;
  pool_.reserve(static_cast<std::size_t>(pool_size));
  for (std::int64_t j = 0; j < pool_size; ++j) {
    pool_.push_back(make_exp3_state(arms_, residue_count(horizon, pool_size, j),
                                    rate_scale));
  }
  update_counts_.assign(static_cast<std::size_t>(pool_size), 0);
  recent_actions_.assign(static_cast<std::size_t>(pool_size), -1);
  z_.assign(1, 0.0);  // slot 0; z_t for t <= 0 is 0 by convention
}

int LinearCompositePlayer::act(std::int64_t t, Rng& rng) {
  const std::size_t j = static_cast<std::size_t>(t % (delay_ + 1));
  pending_action_ = exp3_sample(pool_[j], rng);
  recent_actions_[j] = pending_action_;  // ring over the last d+1 rounds
  return pending_action_;
}

void LinearCompositePlayer::feed(std::int64_t t, const Feedback& fb) {
  if (pending_action_ < 0) throw std::logic_error("feed before act");
  if (static_cast<std::int64_t>(z_.size()) != t) {
    throw std::logic_error("linear composite player fed out of round order");
  }
  // Unwind f_t = sum_i a_i * l_{t-i}(x_{t-i}): since z_s recovers
  // l_{s-d}(x_{s-d}), the term a_i * l_{t-i}(x_{t-i}) equals
  // a_i * z_{t-i+d}, leaving a_d * l_{t-d}(x_{t-d}) behind.
  double acc = fb.value;
  for (int i = delay_ + 1; i <= memory_; ++i) {
    const std::int64_t s = t - (i - delay_);
    const double zs = s >= 1 ? z_[static_cast<std::size_t>(s)] : 0.0;
    acc -= coeffs_[static_cast<std::size_t>(i)] * zs;
  }
  const double z = acc / coeffs_[static_cast<std::size_t>(delay_)];
  // The recursion recovers an oblivious value, so anything materially
  // outside [0,1] means the feedback channel is broken; abort rather than
  // learn from garbage.
  if (z < -1e-6 || z > 1.0 + 1e-6) {
    throw std::runtime_error("recovered loss outside [0,1]: feedback mismatch");
  }
  z_.push_back(z);

  // z_t is the loss of the action played on round t-d, so it belongs to the
  // instance that drew that action. The instance is not updated between its
  // draw and this delayed feedback, so the importance weight recomputed now
  // equals the draw-time probability.
  const std::int64_t source_round = t - delay_;
  if (source_round >= 1) {
    const std::size_t j = static_cast<std::size_t>(source_round % (delay_ + 1));
    exp3_update(pool_[j], recent_actions_[j], clip(z));
    update_counts_[j] += 1;
  }
  pending_action_ = -1;
}

ConstantPlayer::ConstantPlayer(int arms, int action)
    : arms_(arms), action_(action) {
  if (arms_ < 2) throw std::invalid_argument("constant player needs >= 2 arms");
  if (action_ < 0 || action_ >= arms_) {
    throw std::invalid_argument("constant player action out of range");
  }
}

std::string ConstantPlayer::name() const {
  return "constant:" + std::to_string(action_);
}

BatchedPlayer::BatchedPlayer(std::unique_ptr<Player> inner,
                             std::int64_t batch_size, std::int64_t horizon,
                             std::string spec_name)
    : inner_(std::move(inner)), batch_size_(batch_size), horizon_(horizon),
      spec_name_(std::move(spec_name)) {
  if (batch_size_ < 1) throw std::invalid_argument("batch size must be >= 1");
  if (horizon_ < 1) throw std::invalid_argument("horizon must be >= 1");
}

int BatchedPlayer::act(std::int64_t t, Rng& rng) {
  if ((t - 1) % batch_size_ == 0) {
    meta_round_ += 1;
    current_action_ = inner_->act(meta_round_, rng);
    batch_sum_ = 0.0;
    batch_rounds_ = 0;
  }
  return current_action_;
}

void BatchedPlayer::feed(std::int64_t t, const Feedback& fb) {
  batch_sum_ += fb.value;
  batch_rounds_ += 1;
  if (t % batch_size_ == 0 || t == horizon_) {
    Feedback avg;
    avg.value = batch_sum_ / static_cast<double>(batch_rounds_);
    inner_->feed(meta_round_, avg);
  }
}

bool BatchedPlayer::supports(FeedbackModel model) const {
  return model != FeedbackModel::kFullOblivious && inner_->supports(model);
}

std::int64_t cube_root_batch(std::int64_t horizon) {
  std::int64_t b = 1;
  while (b * b * b < horizon) ++b;
  return b;
}

std::unique_ptr<Player> make_player(const std::string& spec,
                                    const RealizedEnvironment& env) {
  if (spec == "exp3") {
    return std::make_unique<Exp3Player>(env.arms(), env.horizon());
  }
  if (spec == "linear") {
    return std::make_unique<LinearCompositePlayer>(env.combiner(), env.arms(),
                                                   env.horizon());
  }
  if (spec.rfind("constant:", 0) == 0) {
    const std::string arg = spec.substr(9);
    std::size_t used = 0;
    int action = 0;
    try {
      action = std::stoi(arg, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad constant player spec: " + spec);
    }
    if (used != arg.size()) throw std::invalid_argument("bad constant player spec: " + spec);
    return std::make_unique<ConstantPlayer>(env.arms(), action);
  }
  if (spec.rfind("batched:", 0) == 0) {
    const std::string rest = spec.substr(8);
    const std::size_t split = rest.rfind(":B=");
    if (split == std::string::npos || split == 0) {
      throw std::invalid_argument("batched player spec needs \":B=<n|auto>\": " + spec);
    }
    const std::string inner_spec = rest.substr(0, split);
    const std::string b_arg = rest.substr(split + 3);
    std::int64_t batch = 0;
    if (b_arg == "auto") {
      batch = cube_root_batch(env.horizon());
    } else {
      std::size_t used = 0;
      try {
        batch = std::stoll(b_arg, &used);
      } catch (const std::exception&) {
        throw std::invalid_argument("bad batch size in spec: " + spec);
      }
      if (used != b_arg.size() || batch < 1) {
        throw std::invalid_argument("bad batch size in spec: " + spec);
      }
    }
    const std::int64_t meta_rounds = (env.horizon() + batch - 1) / batch;
    std::unique_ptr<Player> inner;
    if (inner_spec == "exp3") {
      inner = std::make_unique<Exp3Player>(env.arms(), meta_rounds);
    } else if (inner_spec.rfind("constant:", 0) == 0) {
      inner = make_player(inner_spec, env);
    } else {
      throw std::invalid_argument("unsupported batched inner player: " + inner_spec);
    }
    return std::make_unique<BatchedPlayer>(std::move(inner), batch,
                                           env.horizon(), spec);
  }
  throw std::invalid_argument("unknown player spec: " + spec);
}

}  // namespace cbsim
