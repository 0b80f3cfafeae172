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

#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "cbsim/environment.hpp"
#include "cbsim/process.hpp"

using namespace cbsim;

TEST_CASE("sample_noise validates and is reproducible") {
  Rng rng(1);
  CHECK_THROWS_AS(sample_noise(4, 0.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_noise(4, -1.0, rng), std::invalid_argument);

  Rng a(42);
  Rng b(42);
  NoiseSequence na = sample_noise(4, 0.5, a);
  NoiseSequence nb = sample_noise(4, 0.5, b);
  CHECK(na.values == nb.values);
}

TEST_CASE("sample_noise moments") {
  Rng rng(2024);
  const std::int64_t horizon = 10000;
  NoiseSequence noise = sample_noise(horizon, 1.0, rng);
  double mean = 0.0;
  for (std::int64_t t = 1; t <= horizon; ++t) mean += noise.values[t];
  mean /= static_cast<double>(horizon);
  double var = 0.0;
  for (std::int64_t t = 1; t <= horizon; ++t) {
    var += (noise.values[t] - mean) * (noise.values[t] - mean);
  }
  var /= static_cast<double>(horizon - 1);
  CHECK(std::fabs(mean) <= 4.0 / std::sqrt(static_cast<double>(horizon)));
  CHECK(var == doctest::Approx(1.0).epsilon(0.10));
}

TEST_CASE("build_walk on the degenerate skeletons") {
  Rng rng(3);
  NoiseSequence noise = sample_noise(16, 0.3, rng);

  WalkSequence star_walk = build_walk(ParentFunction::star(16), noise);
  for (std::int64_t t = 1; t <= 16; ++t) CHECK(star_walk.values[t] == noise.values[t]);

  WalkSequence chain_walk = build_walk(ParentFunction::chain(16), noise);
  double acc = 0.0;
  for (std::int64_t t = 1; t <= 16; ++t) {
    acc += noise.values[t];
    CHECK(chain_walk.values[t] == doctest::Approx(acc).epsilon(1e-12));
  }
}

TEST_CASE("build_walk hand recursion") {
  NoiseSequence noise;
  noise.sigma = 1.0;
  noise.values = {0.0, 0.1, 0.2, 0.3};
  ParentFunction rho(3, {0, 0, 1, 1});
  WalkSequence walk = build_walk(rho, noise);
  CHECK(walk.values[0] == 0.0);
  CHECK(walk.values[1] == doctest::Approx(0.1));
  CHECK(walk.values[2] == doctest::Approx(0.3));
  CHECK(walk.values[3] == doctest::Approx(0.4));

  NoiseSequence short_noise;
  short_noise.sigma = 1.0;
  short_noise.values = {0.0, 0.1};
  CHECK_THROWS_AS(build_walk(rho, short_noise), std::invalid_argument);
}

TEST_CASE("build_walk is linear in the noise") {
  Rng rng(4);
  RandomParentTrace trace = build_random_parent(64, rng);
  NoiseSequence noise = sample_noise(64, 0.2, rng);
  WalkSequence walk = build_walk(trace.parent, noise);
  NoiseSequence scaled = noise;
  for (double& v : scaled.values) v *= 3.0;
  WalkSequence scaled_walk = build_walk(trace.parent, scaled);
  for (std::int64_t t = 0; t <= 64; ++t) {
    CHECK(scaled_walk.values[t] == doctest::Approx(3.0 * walk.values[t]).epsilon(1e-12));
  }
}

TEST_CASE("gap process plug-ins and exact gap") {
  WalkSequence walk;
  walk.values = {0.0, 0.0, 0.6};
  GapProcess gaps = build_gap_process(walk, 0, 0.1);
  CHECK(gaps.z(1, 0) == doctest::Approx(0.4));
  CHECK(gaps.z(1, 1) == doctest::Approx(0.5));

  GapProcess gaps2 = build_gap_process(walk, 1, 0.2);
  CHECK(gaps2.z(2, 1) == doctest::Approx(0.9));
  CHECK(gaps2.z(2, 0) == doctest::Approx(1.1));  // unclipped may exceed 1

  for (std::int64_t t = 1; t <= 2; ++t) {
    CHECK(gaps.z(t, 1) - gaps.z(t, 0) == doctest::Approx(0.1).epsilon(1e-12));
  }
  CHECK_THROWS_AS(build_gap_process(walk, 0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_gap_process(walk, 2, 0.1), std::invalid_argument);
}

TEST_CASE("clip_to_table clips, adds spikes, keeps the unclipped variant") {
  WalkSequence walk;
  walk.values = {0.0, 0.8, -0.1};
  GapProcess gaps = build_gap_process(walk, 1, 0.1);  // z(t,0) = W_t + 0.5
  SpikeSequence spikes = zero_spikes(2);
  spikes.values[2 * 2 + 0] = 0.25;  // S_2(0)

  ClippedTables tables = clip_to_table(gaps, &spikes);
  CHECK(tables.unclipped.value(1, 0) == doctest::Approx(1.3));
  CHECK(tables.clipped.value(1, 0) == 1.0);
  CHECK(tables.unclipped.value(2, 0) == doctest::Approx(0.65));
  CHECK(tables.clipped.value(2, 0) == doctest::Approx(0.65));
  for (std::int64_t t = 1; t <= 2; ++t) {
    for (int x = 0; x < 2; ++x) {
      CHECK(tables.clipped.value(t, x) >= 0.0);
      CHECK(tables.clipped.value(t, x) <= 1.0);
    }
  }

  SpikeSequence misaligned = zero_spikes(3);
  CHECK_THROWS_AS(clip_to_table(gaps, &misaligned), std::invalid_argument);
}

TEST_CASE("tuned sigma keeps clipping rare") {
  // Monte-Carlo measurement at T = 4096, delta = 0.1 with the gcd parent.
  const std::int64_t horizon = 4096;
  ParentFunction rho = ParentFunction::gcd(horizon);
  const double sigma = tuned_sigma(depth(rho), horizon, 0.1);
  Rng rng(77);
  std::int64_t clipped_entries = 0;
  std::int64_t total_entries = 0;
  for (int rep = 0; rep < 50; ++rep) {
    NoiseSequence noise = sample_noise(horizon, sigma, rng);
    WalkSequence walk = build_walk(rho, noise);
    GapProcess gaps = build_gap_process(walk, coin_flip(rng) ? 1 : 0, 1e-3);
    ClippedTables tables = clip_to_table(gaps, nullptr);
    for (std::int64_t t = 1; t <= horizon; ++t) {
      for (int x = 0; x < 2; ++x) {
        const double u = tables.unclipped.value(t, x);
        clipped_entries += (u < 0.0 || u > 1.0) ? 1 : 0;
        ++total_entries;
      }
    }
  }
  const double fraction =
      static_cast<double>(clipped_entries) / static_cast<double>(total_entries);
  CHECK(fraction < 0.05);
}

TEST_CASE("walk concentration bound holds in most runs") {
  const std::int64_t horizon = 1024;
  ParentFunction rho = ParentFunction::gcd(horizon);
  const std::int64_t d = depth(rho);
  const double delta = 0.1;
  const double sigma = 0.25;
  const double bound =
      sigma * std::sqrt(2.0 * static_cast<double>(d) *
                        std::log(static_cast<double>(horizon) / delta));
  Rng rng(88);
  int violations = 0;
  const int reps = 200;
  for (int rep = 0; rep < reps; ++rep) {
    NoiseSequence noise = sample_noise(horizon, sigma, rng);
    WalkSequence walk = build_walk(rho, noise);
    double max_abs = 0.0;
    for (std::int64_t t = 1; t <= horizon; ++t) {
      max_abs = std::max(max_abs, std::fabs(walk.values[t]));
    }
    violations += max_abs > bound ? 1 : 0;
  }
  CHECK(static_cast<double>(violations) / reps <= delta + 0.02);
}

TEST_CASE("identical seeds give identical walks and tables") {
  auto build = [](std::uint64_t seed) {
    Rng rng(seed);
    RandomParentTrace trace = build_random_parent(128, rng);
    NoiseSequence noise = sample_noise(128, 0.2, rng);
    WalkSequence walk = build_walk(trace.parent, noise);
    GapProcess gaps = build_gap_process(walk, coin_flip(rng) ? 1 : 0, 0.05);
    return clip_to_table(gaps, nullptr);
  };
  ClippedTables a = build(1234);
  ClippedTables b = build(1234);
  CHECK(a.clipped.raw() == b.clipped.raw());
  CHECK(a.unclipped.raw() == b.unclipped.raw());
}

TEST_CASE("switching cost environment semantics") {
  // constant players pay no penalty, alternating players pay T-1
  std::vector<double> values(8 * 2, 0.25);
  RealizedEnvironment env = switching_cost_env(LossTable(8, 2, values));
  CHECK(env.switching());

  std::vector<int> constant(9, 1);
  double total = 0.0;
  for (std::int64_t t = 1; t <= 8; ++t) total += env.loss(constant, t);
  CHECK(total == doctest::Approx(8 * 0.25));

  std::vector<int> alternating(9, 0);
  for (std::int64_t t = 1; t <= 8; ++t) alternating[t] = static_cast<int>(t % 2);
  total = 0.0;
  for (std::int64_t t = 1; t <= 8; ++t) {
    const double loss = env.loss(alternating, t);
    const double base = env.table().value(t, alternating[t]);
    CHECK((loss - base == 0.0 || loss - base == 1.0));
    total += loss;
  }
  CHECK(total == doctest::Approx(8 * 0.25 + 7));
}
