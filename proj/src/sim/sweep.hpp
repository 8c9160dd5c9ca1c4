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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "sim/config.hpp"

namespace rdv::sim {

// Honest-majority scenario drawn from `seed`: 3 to 9 voters, 10 to 50
// generated transactions, uniform delays within [1, m].
ScenarioConfig random_scenario(std::uint64_t seed);

struct SweepEntry {
  std::uint64_t seed = 0;
  std::string name;
  std::size_t voters = 0;
  std::uint64_t blocks = 0;
  std::uint64_t forks = 0;
  std::string tip;
  bool passed = false;
  bool deterministic = false;  // a second run reproduced events and chains
  std::vector<std::string> failures;
};

struct SweepReport {
  std::vector<SweepEntry> entries;
  double seconds = 0.0;

  bool passed() const;
  nlohmann::json to_json() const;
  std::string render() const;
};

struct SweepOptions {
  std::uint64_t first_seed = 0;
  std::uint64_t count = 10;
  unsigned threads = 0;  // 0: hardware concurrency
  bool check_determinism = true;
};

// Runs `base` under consecutive seeds, or random scenarios when `base` is
// empty. Each run is isolated; results are ordered by seed.
SweepReport run_sweep(const std::optional<ScenarioConfig>& base, const SweepOptions& options);

}  // namespace rdv::sim
