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

#include "cbsim/parent.hpp"

#include <algorithm>
#include <stdexcept>

namespace cbsim {

ParentFunction::ParentFunction(std::int64_t horizon,
                               std::vector<std::int64_t> parents)
    : horizon_(horizon), parents_(std::move(parents)) {
  if (horizon_ < 1) throw std::invalid_argument("parent function horizon must be >= 1");
  if (parents_.size() != static_cast<std::size_t>(horizon_) + 1) {
    throw std::invalid_argument("parent vector must have T+1 slots (1-based)");
  }
  for (std::int64_t t = 1; t <= horizon_; ++t) {
    const std::int64_t p = parents_[static_cast<std::size_t>(t)];
    if (p < 0 || p >= t) {
      throw std::invalid_argument("parent must satisfy 0 <= rho(t) < t");
    }
  }
}

ParentFunction ParentFunction::chain(std::int64_t horizon) {
  std::vector<std::int64_t> p(static_cast<std::size_t>(horizon) + 1, 0);
  for (std::int64_t t = 1; t <= horizon; ++t) p[static_cast<std::size_t>(t)] = t - 1;
  return ParentFunction(horizon, std::move(p));
}

ParentFunction ParentFunction::star(std::int64_t horizon) {
  std::vector<std::int64_t> p(static_cast<std::size_t>(horizon) + 1, 0);
  return ParentFunction(horizon, std::move(p));
}

ParentFunction ParentFunction::gcd(std::int64_t horizon) {
  std::vector<std::int64_t> p(static_cast<std::size_t>(horizon) + 1, 0);
  for (std::int64_t t = 1; t <= horizon; ++t) {
    p[static_cast<std::size_t>(t)] = gcd_parent(t, horizon);
  }
  return ParentFunction(horizon, std::move(p));
}

std::int64_t ParentFunction::parent(std::int64_t t) const {
  if (t < 1 || t > horizon_) throw std::out_of_range("parent round out of range");
  return parents_[static_cast<std::size_t>(t)];
}

std::int64_t gcd_parent(std::int64_t t, std::int64_t horizon) {
  if (t < 1 || t > horizon) throw std::out_of_range("gcd_parent round out of range");
  return t - (t & -t);
}

RandomParentTrace build_random_parent_from_bits(
    std::span<const std::uint8_t> bits) {
  if (bits.size() < 2) throw std::invalid_argument("need bits for at least one round");
  const std::int64_t horizon = static_cast<std::int64_t>(bits.size()) - 1;

  std::vector<std::int64_t> renamed;  // U_0 = 0, then the rounds with B_t = 1
  renamed.push_back(0);
  std::vector<std::int64_t> parents(static_cast<std::size_t>(horizon) + 1, 0);
  for (std::int64_t t = 1; t <= horizon; ++t) {
    if (bits[static_cast<std::size_t>(t)] == 0) {
      parents[static_cast<std::size_t>(t)] = t - 1;
    } else {
      renamed.push_back(t);
      const std::int64_t rank = static_cast<std::int64_t>(renamed.size()) - 1;
      const std::int64_t parent_rank = rank - (rank & -rank);
      parents[static_cast<std::size_t>(t)] =
          renamed[static_cast<std::size_t>(parent_rank)];
    }
  }
  return RandomParentTrace{
      ParentFunction(horizon, std::move(parents)),
      std::vector<std::uint8_t>(bits.begin(), bits.end()),
      std::move(renamed)};
}

RandomParentTrace build_random_parent(std::int64_t horizon, Rng& rng) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(horizon) + 1, 0);
  for (std::int64_t t = 1; t <= horizon; ++t) {
    bits[static_cast<std::size_t>(t)] = coin_flip(rng) ? 1 : 0;
  }
  return build_random_parent_from_bits(bits);
}

std::vector<std::int64_t> ancestors(const ParentFunction& rho, std::int64_t t) {
  if (t < 0 || t > rho.horizon()) throw std::out_of_range("ancestors round out of range");
  std::vector<std::int64_t> out;
  while (t > 0) {
    t = rho.parent(t);
    out.push_back(t);
  }
  return out;
}

std::int64_t depth(const ParentFunction& rho) {
  const std::int64_t horizon = rho.horizon();
  // |ancestors(t)| = |ancestors(rho(t))| + 1 since every ancestor of rho(t)
  // is strictly below rho(t).
  std::vector<std::int64_t> size(static_cast<std::size_t>(horizon) + 1, 0);
  std::int64_t best = 0;
  for (std::int64_t t = 1; t <= horizon; ++t) {
    size[static_cast<std::size_t>(t)] =
        size[static_cast<std::size_t>(rho.parent(t))] + 1;
    best = std::max(best, size[static_cast<std::size_t>(t)]);
  }
  return best;
}

std::vector<std::int64_t> cut(const ParentFunction& rho, std::int64_t t) {
  if (t < 1 || t > rho.horizon()) throw std::out_of_range("cut round out of range");
  std::vector<std::int64_t> out;
  for (std::int64_t s = t; s <= rho.horizon(); ++s) {
    if (rho.parent(s) < t) out.push_back(s);
  }
  return out;
}

std::int64_t width(const ParentFunction& rho) {
  const std::int64_t horizon = rho.horizon();
  // Each s contributes to cut(t) for every t in (rho(s), s]; sweep with a
  // difference array instead of materializing the cuts.
  std::vector<std::int64_t> diff(static_cast<std::size_t>(horizon) + 2, 0);
  for (std::int64_t s = 1; s <= horizon; ++s) {
    diff[static_cast<std::size_t>(rho.parent(s)) + 1] += 1;
    diff[static_cast<std::size_t>(s) + 1] -= 1;
  }
  std::int64_t best = 0;
  std::int64_t running = 0;
  for (std::int64_t t = 1; t <= horizon; ++t) {
    running += diff[static_cast<std::size_t>(t)];
    best = std::max(best, running);
  }
  return best;
}

}  // namespace cbsim
