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

#include <vector>

#include "cbsim/combining.hpp"
#include "cbsim/rng.hpp"
#include "oracles.hpp"

using namespace cbsim;

namespace {

LossTable make_table(std::int64_t horizon, int arms, std::vector<double> values) {
  return LossTable(horizon, arms, std::move(values));
}

}  // namespace

TEST_CASE("clip confines to the unit interval") {
  CHECK(clip(1.7) == 1.0);
  CHECK(clip(-0.2) == 0.0);
  CHECK(clip(0.42) == 0.42);
  // idempotence
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    const double v = (uniform01(rng) - 0.5) * 10.0;
    CHECK(clip(clip(v)) == clip(v));
  }
}

TEST_CASE("make_linear_combiner normalizes and validates") {
  const std::vector<double> halves{0.5, 0.5};
  CombiningFunction g = make_linear_combiner(halves);
  CHECK(g.kind == CombinerKind::kLinear);
  CHECK(g.memory == 1);
  CHECK(g.coeffs[0] == 0.5);
  CHECK(g.coeffs[1] == 0.5);

  const std::vector<double> delayed{1.0, 0.0};
  g = make_linear_combiner(delayed);
  CHECK(g.memory == 1);
  CHECK(g.coeffs[0] == 1.0);
  CHECK(g.coeffs[1] == 0.0);

  const std::vector<double> twos{2.0, 2.0};
  g = make_linear_combiner(twos);
  CHECK(g.coeffs[0] == 0.5);
  CHECK(g.coeffs[1] == 0.5);

  CHECK_THROWS_AS(make_linear_combiner(std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(make_linear_combiner(std::vector<double>{0.5, -0.1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_linear_combiner(std::vector<double>{0.0, 0.0}),
                  std::invalid_argument);
}

TEST_CASE("loss table zero convention and range checks") {
  LossTable table = make_table(2, 2, {0.1, 0.9, 0.3, 0.7});
  CHECK(table.value(0, 0) == 0.0);
  CHECK(table.value(-5, 1) == 0.0);
  CHECK(table.value(1, 1) == 0.9);
  CHECK_THROWS_AS(table.value(3, 0), std::out_of_range);
  CHECK_THROWS_AS(make_table(1, 2, {0.5, 1.5}), std::invalid_argument);
}

TEST_CASE("eval_composite on hand windows") {
  // ell_1 = (0.3, .), ell_2 = (0.7, .) with the player on arm 0 both rounds
  LossTable table = make_table(2, 2, {0.3, 0.0, 0.7, 0.0});
  const std::vector<int> actions{0, 0, 0};

  CHECK(eval_composite(min_combiner(), table, actions, 2) == 0.3);
  CHECK(eval_composite(max_combiner(), table, actions, 2) == 0.7);

  LossTable table2 = make_table(2, 2, {0.2, 0.0, 0.6, 0.0});
  const std::vector<double> halves{0.5, 0.5};
  CHECK(eval_composite(make_linear_combiner(halves), table2, actions, 2) ==
        doctest::Approx(0.4).epsilon(1e-12));

  // round 1 with memory 1 sees the zero convention on the left slot
  CHECK(eval_composite(min_combiner(), table, actions, 1) == 0.0);

  CHECK_THROWS_AS(eval_composite(min_combiner(), table, actions, 3),
                  std::out_of_range);
  CHECK_THROWS_AS(eval_composite(min_combiner(), table, actions, 0),
                  std::out_of_range);
}

TEST_CASE("composite output properties on random inputs") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::int64_t horizon = 1 + static_cast<std::int64_t>(uniform01(rng) * 12);
    const int arms = 2 + uniform_int(rng, 3);
    std::vector<double> values(static_cast<std::size_t>(horizon) * arms);
    for (double& v : values) v = uniform01(rng);
    LossTable table = make_table(horizon, arms, values);
    std::vector<int> actions(static_cast<std::size_t>(horizon) + 1, 0);
    for (auto& a : actions) a = uniform_int(rng, arms);

    const int m = uniform_int(rng, 4);
    std::vector<double> coeffs(static_cast<std::size_t>(m) + 1, 0.0);
    for (double& a : coeffs) a = uniform01(rng);
    coeffs[static_cast<std::size_t>(uniform_int(rng, m + 1))] += 0.1;
    const CombiningFunction linear = make_linear_combiner(coeffs);
    const CombiningFunction min_g = min_combiner();
    const CombiningFunction max_g = max_combiner();

    const std::int64_t t = 1 + static_cast<std::int64_t>(uniform01(rng) * (horizon - 1));
    const double lin = eval_composite(linear, table, actions, t);
    CHECK(lin >= -1e-12);
    CHECK(lin <= 1.0 + 1e-12);
    const double lo = eval_composite(min_g, table, actions, t);
    const double hi = eval_composite(max_g, table, actions, t);
    CHECK(lo <= table.value(t, actions[static_cast<std::size_t>(t)]));
    CHECK(hi >= table.value(t, actions[static_cast<std::size_t>(t)]));
    CHECK(lo <= hi);
  }
}

TEST_CASE("linear combiner is exact on constant windows") {
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = uniform_int(rng, 5);
    std::vector<double> coeffs(static_cast<std::size_t>(m) + 1, 0.0);
    for (double& a : coeffs) a = uniform01(rng) + 0.01;
    const CombiningFunction g = make_linear_combiner(coeffs);
    const double v = uniform01(rng);
    const std::vector<double> window(static_cast<std::size_t>(m) + 1, v);
    CHECK(g.apply(window) == doctest::Approx(v).epsilon(1e-12));
  }
}

TEST_CASE("eval_composite matches the literal oracle") {
  Rng rng(17);
  int cases = 0;
  for (int table_idx = 0; table_idx < 100; ++table_idx) {
    const std::int64_t horizon = 1 + static_cast<std::int64_t>(uniform01(rng) * 20);
    const int arms = 2 + uniform_int(rng, 3);
    std::vector<double> values(static_cast<std::size_t>(horizon) * arms);
    for (double& v : values) v = uniform01(rng);
    LossTable table = make_table(horizon, arms, values);

    for (int q = 0; q < 1000; ++q) {
      std::vector<int> actions(static_cast<std::size_t>(horizon) + 1, 0);
      for (auto& a : actions) a = uniform_int(rng, arms);
      const int which = uniform_int(rng, 3);
      CombiningFunction g;
      if (which == 0) {
        g = min_combiner();
      } else if (which == 1) {
        g = max_combiner();
      } else {
        const int m = uniform_int(rng, 4);
        std::vector<double> coeffs(static_cast<std::size_t>(m) + 1, 0.0);
        for (double& a : coeffs) a = uniform01(rng);
        coeffs[0] += 0.05;
        g = make_linear_combiner(coeffs);
      }
      const std::int64_t t =
          1 + static_cast<std::int64_t>(uniform01(rng) * (horizon - 1));
      CHECK(eval_composite(g, table, actions, t) ==
            oracle::brute_composite_eval(g, table, actions, t));
      ++cases;
    }
  }
  CHECK(cases == 100000);
}
