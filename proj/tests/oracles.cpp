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

#include "oracles.hpp"

#include <stdexcept>

namespace cbsim::oracle {

std::set<std::int64_t> brute_ancestors(const ParentFunction& rho, std::int64_t t) {
  if (t == 0) return {};
  std::set<std::int64_t> out = brute_ancestors(rho, rho.parent(t));
  out.insert(rho.parent(t));
  return out;
}

std::int64_t brute_depth(const ParentFunction& rho) {
  std::int64_t best = 0;
  for (std::int64_t t = 1; t <= rho.horizon(); ++t) {
    const std::int64_t size =
        static_cast<std::int64_t>(brute_ancestors(rho, t).size());
    if (size > best) best = size;
  }
  return best;
}

std::set<std::int64_t> brute_cut(const ParentFunction& rho, std::int64_t t) {
  std::set<std::int64_t> out;
  for (std::int64_t s = 1; s <= rho.horizon(); ++s) {
    if (rho.parent(s) < t && t <= s) out.insert(s);
  }
  return out;
}

std::int64_t brute_width(const ParentFunction& rho) {
  std::int64_t best = 0;
  for (std::int64_t t = 1; t <= rho.horizon(); ++t) {
    const std::int64_t size = static_cast<std::int64_t>(brute_cut(rho, t).size());
    if (size > best) best = size;
  }
  return best;
}

double brute_composite_eval(const CombiningFunction& g, const LossTable& table,
                            std::span<const int> actions, std::int64_t t) {
  const int m = g.memory;
  std::vector<double> window;
  for (std::int64_t s = t - m; s <= t; ++s) {
    if (s <= 0) {
      window.push_back(0.0);
    } else {
      window.push_back(table.value(s, actions[static_cast<std::size_t>(s)]));
    }
  }
  switch (g.kind) {
    case CombinerKind::kMin: {
      double best = window[0];
      for (double v : window) {
        if (v < best) best = v;
      }
      return best;
    }
    case CombinerKind::kMax: {
      double best = window[0];
      for (double v : window) {
        if (v > best) best = v;
      }
      return best;
    }
    case CombinerKind::kLinear: {
      // a_m * l_{t-m} + ... + a_0 * l_t, left to right.
      double sum = 0.0;
      for (int i = m; i >= 0; --i) {
        sum += g.coeffs[static_cast<std::size_t>(i)] *
               window[static_cast<std::size_t>(m - i)];
      }
      return sum;
    }
  }
  throw std::logic_error("unreachable combiner kind");
}

namespace {

double brute_round_loss(const RealizedEnvironment& env,
                        std::span<const int> actions, std::int64_t t) {
  if (env.switching()) {
    double v = env.table().value(t, actions[static_cast<std::size_t>(t)]);
    if (t >= 2 && actions[static_cast<std::size_t>(t)] !=
                      actions[static_cast<std::size_t>(t - 1)]) {
      v += 1.0;
    }
    return v;
  }
  return brute_composite_eval(env.combiner(), env.table(), actions, t);
}

}  // namespace

double brute_policy_regret(const RealizedEnvironment& env,
                           std::span<const int> actions) {
  const std::int64_t horizon = env.horizon();
  double player_total = 0.0;
  for (std::int64_t t = 1; t <= horizon; ++t) {
    player_total += brute_round_loss(env, actions, t);
  }

  double best = 0.0;
  bool first = true;
  std::vector<int> constant(static_cast<std::size_t>(horizon) + 1, 0);
  for (int x = 0; x < env.arms(); ++x) {
    for (auto& a : constant) a = x;
    double total = 0.0;
    for (std::int64_t t = 1; t <= horizon; ++t) {
      total += brute_round_loss(env, constant, t);
    }
    if (first || total < best) {
      best = total;
      first = false;
    }
  }
  return player_total - best;
}

}  // namespace cbsim::oracle
