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

#include "cbsim/environment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cbsim/parent.hpp"

namespace cbsim {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

RealizedEnvironment::RealizedEnvironment(LossTable game_table,
                                         CombiningFunction combiner,
                                         bool switching, EnvMetadata meta)
    : table_(std::move(game_table)), combiner_(std::move(combiner)),
      switching_(switching), meta_(std::move(meta)) {}

double RealizedEnvironment::loss(std::span<const int> actions,
                                 std::int64_t t) const {
  if (switching_) {
    if (t < 1 || t > horizon()) throw std::out_of_range("loss round out of range");
    if (actions.size() < static_cast<std::size_t>(t) + 1) {
      throw std::invalid_argument("action history does not cover round t");
    }
    double v = table_.value(t, actions[static_cast<std::size_t>(t)]);
    if (t >= 2 && actions[static_cast<std::size_t>(t)] !=
                      actions[static_cast<std::size_t>(t - 1)]) {
      v += 1.0;
    }
    return v;
  }
  return eval_composite(combiner_, table_, actions, t);
}

double RealizedEnvironment::constant_loss(int x, std::int64_t t) const {
  if (switching_) {
    return table_.value(t, x);  // a constant policy never pays the penalty
  }
  const int m = combiner_.memory;
  double stack_window[16];
  std::vector<double> heap_window;
  double* window = stack_window;
  if (m + 1 > 16) {
    heap_window.assign(static_cast<std::size_t>(m) + 1, 0.0);
    window = heap_window.data();
  }
  for (int i = 0; i <= m; ++i) {
    const std::int64_t s = t - m + i;
    window[i] = s >= 1 ? table_.value(s, x) : 0.0;
  }
  return combiner_.apply(
      std::span<const double>(window, static_cast<std::size_t>(m) + 1));
}

double RealizedEnvironment::total_constant_loss(int x) const {
  double total = 0.0;
  for (std::int64_t t = 1; t <= horizon(); ++t) total += constant_loss(x, t);
  return total;
}

RealizedEnvironment switching_cost_env(LossTable table, EnvMetadata meta) {
  if (meta.kind.empty()) meta.kind = "switching_cost";
  std::vector<double> identity{1.0};
  return RealizedEnvironment(std::move(table), make_linear_combiner(identity),
                             true, std::move(meta));
}

RealizedEnvironment build_linear_iid_env(std::int64_t horizon, int arms,
                                         std::span<const double> coeffs,
                                         double gap, Rng& rng) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (arms < 2) throw std::invalid_argument("need at least 2 arms");
  if (gap < 0.0 || gap >= 1.0) throw std::invalid_argument("gap must be in [0,1)");
  CombiningFunction g = make_linear_combiner(coeffs);

  const int chi = uniform_int(rng, arms);
  std::vector<double> values(static_cast<std::size_t>(horizon) * arms, 0.0);
  for (std::int64_t t = 1; t <= horizon; ++t) {
    for (int x = 0; x < arms; ++x) {
      const double u = uniform01(rng);
      values[static_cast<std::size_t>(t - 1) * arms + x] =
          (x == chi ? 0.0 : gap) + (1.0 - gap) * u;
    }
  }
  EnvMetadata meta;
  meta.kind = "linear_iid";
  meta.epsilon = gap;
  meta.chi = chi;
  return RealizedEnvironment(LossTable(horizon, arms, std::move(values), true),
                             std::move(g), false, std::move(meta));
}

RealizedEnvironment build_gap_walk_env(std::int64_t horizon,
                                       const GapWalkOptions& options, Rng& rng) {
  if (horizon < 2) throw std::invalid_argument("horizon must be >= 2");
  ParentFunction rho = [&]() {
    if (options.parent == "gcd") return ParentFunction::gcd(horizon);
    if (options.parent == "chain") return ParentFunction::chain(horizon);
    if (options.parent == "star") return ParentFunction::star(horizon);
    if (options.parent == "random") return build_random_parent(horizon, rng).parent;
    throw std::invalid_argument("unknown parent kind: " + options.parent);
  }();

  const double delta =
      options.delta > 0.0 ? options.delta : 1.0 / static_cast<double>(horizon);
  const double sigma = options.sigma > 0.0
                           ? options.sigma
                           : tuned_sigma(depth(rho), horizon, delta);
  const double epsilon =
      options.epsilon > 0.0
          ? options.epsilon
          : std::pow(static_cast<double>(horizon), -1.0 / 3.0) /
                std::log(static_cast<double>(horizon));

  NoiseSequence noise = sample_noise(horizon, sigma, rng);
  WalkSequence walk = build_walk(rho, noise);
  const int chi = coin_flip(rng) ? 1 : 0;
  GapProcess gaps = build_gap_process(walk, chi, epsilon);
  ClippedTables tables = clip_to_table(gaps, nullptr);

  EnvMetadata meta;
  meta.kind = options.switching ? "switching_cost" : "gap_walk";
  meta.sigma = sigma;
  meta.epsilon = epsilon;
  meta.delta = delta;
  meta.chi = chi;

  LossTable game_table = options.clipped ? tables.clipped : tables.unclipped;
  std::vector<double> identity{1.0};
  RealizedEnvironment env(std::move(game_table), make_linear_combiner(identity),
                          options.switching, std::move(meta));
  if (options.clipped) env.attach_unclipped(std::move(tables.unclipped));
  EnvAudit audit;
  audit.walk = walk.values;
  env.attach_audit(std::move(audit));
  return env;
}

std::string RealizedEnvironment::dump() const {
  std::ostringstream out;
  out << "cbsim-env 1\n";
  out << "kind " << (meta_.kind.empty() ? "custom" : meta_.kind) << "\n";
  out << "T " << horizon() << "\n";
  out << "k " << arms() << "\n";
  out << "seed " << meta_.seed << "\n";
  out << "switching " << (switching_ ? 1 : 0) << "\n";
  out << "game_clipped " << (table_.unit_range() ? 1 : 0) << "\n";
  out << "combiner ";
  switch (combiner_.kind) {
    case CombinerKind::kMin: out << "min " << combiner_.memory; break;
    case CombinerKind::kMax: out << "max " << combiner_.memory; break;
    case CombinerKind::kLinear:
      out << "linear " << combiner_.memory;
      for (double a : combiner_.coeffs) out << " " << fmt_double(a);
      break;
  }
  out << "\n";
  out << "sigma " << fmt_double(meta_.sigma) << "\n";
  out << "epsilon " << fmt_double(meta_.epsilon) << "\n";
  out << "eta " << fmt_double(meta_.eta) << "\n";
  out << "tau " << fmt_double(meta_.tau) << "\n";
  out << "delta " << fmt_double(meta_.delta) << "\n";
  out << "chi " << meta_.chi << "\n";
  if (!audit_.events.empty()) {
    out << "events ";
    for (std::int64_t t = 1; t <= horizon(); ++t) {
      out << (t < static_cast<std::int64_t>(audit_.events.size()) &&
                      audit_.events[static_cast<std::size_t>(t)]
                  ? '1'
                  : '0');
    }
    out << "\n";
  }
  if (!audit_.lambda.empty()) {
    out << "lambda ";
    for (std::int64_t t = 1; t <= horizon(); ++t) {
      out << (t < static_cast<std::int64_t>(audit_.lambda.size()) &&
                      audit_.lambda[static_cast<std::size_t>(t)]
                  ? '1'
                  : '0');
    }
    out << "\n";
  }
  if (!audit_.walk.empty()) {
    out << "walk";
    for (double w : audit_.walk) out << " " << fmt_double(w);
    out << "\n";
  }
  const bool both = unclipped_.has_value();
  out << "table " << (both ? 2 : 1) << "\n";
  for (std::int64_t t = 1; t <= horizon(); ++t) {
    out << t;
    for (int x = 0; x < arms(); ++x) out << " " << fmt_double(table_.value(t, x));
    if (both) {
      for (int x = 0; x < arms(); ++x) {
        out << " " << fmt_double(unclipped_->value(t, x));
      }
    }
    out << "\n";
  }
  out << "end\n";
  return out.str();
}

void write_env_dump(const RealizedEnvironment& env, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << env.dump();
  if (!out) throw std::runtime_error("failed while writing " + path);
}

RealizedEnvironment parse_env_dump(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "cbsim-env 1") {
    throw std::runtime_error("not a cbsim environment dump");
  }

  EnvMetadata meta;
  bool switching = false;
  bool game_clipped = true;
  std::int64_t horizon = 0;
  int arms = 0;
  CombiningFunction combiner = min_combiner();
  EnvAudit audit;
  int table_variants = 1;

  auto fail = [](const std::string& what) -> void {
    throw std::runtime_error("malformed environment dump: " + what);
  };

  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "kind") { ls >> meta.kind; }
    else if (key == "T") { ls >> horizon; }
    else if (key == "k") { ls >> arms; }
    else if (key == "seed") { ls >> meta.seed; }
    else if (key == "switching") { int v = 0; ls >> v; switching = v != 0; }
    else if (key == "game_clipped") { int v = 1; ls >> v; game_clipped = v != 0; }
    else if (key == "sigma") { ls >> meta.sigma; }
    else if (key == "epsilon") { ls >> meta.epsilon; }
    else if (key == "eta") { ls >> meta.eta; }
    else if (key == "tau") { ls >> meta.tau; }
    else if (key == "delta") { ls >> meta.delta; }
    else if (key == "chi") { ls >> meta.chi; }
    else if (key == "combiner") {
      std::string kind;
      int memory = 0;
      ls >> kind >> memory;
      if (kind == "min") combiner = min_combiner();
      else if (kind == "max") combiner = max_combiner();
      else if (kind == "linear") {
        std::vector<double> coeffs;
        double a = 0.0;
        while (ls >> a) coeffs.push_back(a);
        if (static_cast<int>(coeffs.size()) != memory + 1) fail("combiner coeffs");
        combiner = make_linear_combiner(coeffs);
      } else fail("combiner kind");
    }
    else if (key == "events" || key == "lambda") {
      std::string flags;
      ls >> flags;
      std::vector<std::uint8_t> v(flags.size() + 1, 0);
      for (std::size_t i = 0; i < flags.size(); ++i) v[i + 1] = flags[i] == '1';
      if (key == "events") audit.events = std::move(v);
      else audit.lambda = std::move(v);
    }
    else if (key == "walk") {
      double w = 0.0;
      while (ls >> w) audit.walk.push_back(w);
    }
    else if (key == "table") {
      ls >> table_variants;
      break;
    }
    else fail("unknown key " + key);
  }
  if (horizon < 1 || arms < 2) fail("missing dimensions");
  if (table_variants != 1 && table_variants != 2) fail("table variant count");

  std::vector<double> game(static_cast<std::size_t>(horizon) * arms, 0.0);
  std::vector<double> unclipped;
  if (table_variants == 2) unclipped.assign(game.size(), 0.0);
  for (std::int64_t i = 0; i < horizon; ++i) {
    if (!std::getline(in, line)) fail("truncated table");
    std::istringstream ls(line);
    std::int64_t t = 0;
    ls >> t;
    if (t != i + 1) fail("table rows out of order");
    for (int x = 0; x < arms; ++x) {
      if (!(ls >> game[static_cast<std::size_t>(i) * arms + x])) fail("table row");
    }
    if (table_variants == 2) {
      for (int x = 0; x < arms; ++x) {
        if (!(ls >> unclipped[static_cast<std::size_t>(i) * arms + x])) fail("table row");
      }
    }
  }
  if (!std::getline(in, line) || line != "end") fail("missing end marker");

  RealizedEnvironment env(LossTable(horizon, arms, std::move(game), game_clipped),
                          std::move(combiner), switching, std::move(meta));
  if (table_variants == 2) {
    env.attach_unclipped(LossTable(horizon, arms, std::move(unclipped), false));
  }
  env.attach_audit(std::move(audit));
  return env;
}

RealizedEnvironment read_env_dump(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_env_dump(buf.str());
}

}  // namespace cbsim
