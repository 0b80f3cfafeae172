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

#ifndef CBSIM_RNG_HPP
#define CBSIM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace cbsim {

using Rng = std::mt19937_64;

// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Pure function of (master, stream, index). Replication runners derive every
// per-run seed through this, so aggregate results cannot depend on thread
// scheduling.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t index) {
  return mix64(mix64(mix64(master) ^ stream) ^ index);
}

// Uniform on [0, 1), 53 random bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool coin_flip(Rng& rng) { return (rng() >> 63) != 0ULL; }

inline int uniform_int(Rng& rng, int n) {
  // n is tiny (arm counts); modulo bias is negligible for n << 2^64 but we
  // reject anyway to keep draws exact.
  const std::uint64_t limit = ~0ULL - (~0ULL % static_cast<std::uint64_t>(n));
  std::uint64_t v = rng();
  while (v >= limit) v = rng();
  return static_cast<int>(v % static_cast<std::uint64_t>(n));
}

// Box-Muller transform; consumes exactly two generator words per draw, which
// pins the draw order to the round order.
inline double standard_normal(Rng& rng) {
  const double u1 = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;  // (0,1]
  const double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;          // [0,1)
  constexpr double two_pi = 6.283185307179586476925286766559;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

}  // namespace cbsim

#endif  // CBSIM_RNG_HPP
