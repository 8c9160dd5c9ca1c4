// Copyright 2026 The RDV Authors
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

#include "sim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <random>
#include <sstream>
#include <thread>

#include "core/serialize.hpp"
#include "sim/node.hpp"
#include "sim/simulation.hpp"

namespace rdv::sim {

using nlohmann::json;

ScenarioConfig random_scenario(std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x5deece66dULL);
  ScenarioConfig c;
  c.name = "random-" + std::to_string(seed);
  c.seed = seed;
  c.key_seed = seed;
  const auto voters = uniform_int(rng, 3, 9);
  c.voters.assign(voters, VoterSpec{});
  c.ordinary_nodes = static_cast<std::uint32_t>(uniform_int(rng, 1, 4));
  c.params.clock.m = static_cast<Tick>(uniform_int(rng, 2, 8));
  c.params.delta = static_cast<Tick>(uniform_int(rng, 2 * c.params.clock.m, 40));
  c.params.pi = static_cast<Tick>(uniform_int(rng, 50, 400));
  c.params.deposit = 4;
  c.params.penalty = 1;
  c.initial_coins.assign(c.node_count(), static_cast<std::uint32_t>(uniform_int(rng, 8, 20)));
  c.delay = {DelayModel::Kind::uniform, 1, c.params.clock.m};
  GeneratorSpec g;
  g.count = static_cast<std::uint32_t>(uniform_int(rng, 10, 50));
  g.start = 5;
  g.min_gap = 0;
  g.max_gap = static_cast<Tick>(uniform_int(rng, 2, 30));
  g.max_coins = static_cast<std::uint32_t>(uniform_int(rng, 1, 3));
  c.generator = g;
  c.duration = 100000;
  c.validate();
  return c;
}

namespace {

SweepEntry run_one(const ScenarioConfig& cfg, bool check_determinism) {
  SweepEntry e;
  e.seed = cfg.seed;
  e.name = cfg.name;
  e.voters = cfg.voters.size();
  const RunResult r = run(cfg);
  e.blocks = r.metrics.blocks;
  e.forks = r.metrics.forks;
  e.tip = r.chains[r.observer].tip().block_hash.hex();
  e.passed = r.passed();
  for (const auto& v : r.verdicts) {
    if (!v.passed) e.failures.push_back(v.name + ": " + v.detail);
  }
  for (const auto& v : r.invariant_violations) e.failures.push_back(v);
  if (check_determinism) {
    const RunResult again = run(cfg);
    e.deterministic = again.events == r.events && again.chains == r.chains;
    if (!e.deterministic) e.failures.push_back("determinism: second run diverged");
  } else {
    e.deterministic = true;
  }
  return e;
}

}  // namespace

SweepReport run_sweep(const std::optional<ScenarioConfig>& base, const SweepOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  SweepReport report;
  report.entries.resize(options.count);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t i = next++; i < options.count; i = next++) {
      const std::uint64_t seed = options.first_seed + i;
      SweepEntry& slot = report.entries[i];
      try {
        ScenarioConfig cfg = base ? *base : random_scenario(seed);
        cfg.seed = seed;
        slot = run_one(cfg, options.check_determinism);
      } catch (const std::exception& ex) {
        slot.seed = seed;
        slot.failures.push_back(ex.what());
      }
    }
  };
  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(1, options.count)));
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

bool SweepReport::passed() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const SweepEntry& e) { return e.passed && e.deterministic && e.forks == 0; });
}

json SweepReport::to_json() const {
  json rows = json::array();
  for (const auto& e : entries) {
    rows.push_back({{"seed", e.seed},
                    {"name", e.name},
                    {"voters", e.voters},
                    {"blocks", e.blocks},
                    {"forks", e.forks},
                    {"tip", e.tip},
                    {"passed", e.passed},
                    {"deterministic", e.deterministic},
                    {"failures", e.failures}});
  }
  return {{"runs", entries.size()}, {"seconds", seconds}, {"result", passed() ? "PASS" : "FAIL"}, {"entries", rows}};
}

std::string SweepReport::render() const {
  std::ostringstream os;
  for (const auto& e : entries) {
    os << "seed " << e.seed << "  " << e.name << "  voters " << e.voters << "  blocks " << e.blocks << "  tip "
       << e.tip.substr(0, std::min<std::size_t>(16, e.tip.size())) << "  "
       << (e.passed && e.deterministic && e.forks == 0 ? "PASS" : "FAIL") << "\n";
    for (const auto& f : e.failures) os << "    " << f << "\n";
  }
  os << entries.size() << " runs in " << seconds << " s, " << (passed() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

}  // namespace rdv::sim
