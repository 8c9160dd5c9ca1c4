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
#include <string>
#include <vector>

#include "json.hpp"

namespace rdv::sim {

// Per-voter behavior for one transaction.
enum class Behavior : std::uint8_t { vote1, vote0, abstain };

char to_char(Behavior b);

// Expected or observed end state of a single-transaction run.
struct StateOutcome {
  std::string kind;  // accepted, rejected or aborted
  std::uint64_t blocks = 0;
  std::vector<std::uint64_t> penalties;  // per voter
  std::vector<std::uint64_t> ctr;        // per voter
  std::vector<bool> on_roster;           // final VoteRBox membership per voter
  std::vector<bool> suspended;           // per voter

  bool operator==(const StateOutcome&) const = default;
  nlohmann::json to_json() const;
};

// Straight-line reading of one voting round: abstainers are removed after Δ,
// the rest decide by strict majority of ones.
StateOutcome reference_outcome(const std::vector<Behavior>& behaviors);

// state1 (all vote, unanimous), state2 (all vote, split), state{k+2} (k of n
// abstainers removed, remainder decides), state_n (every voter removed).
std::string classify(const std::vector<Behavior>& behaviors);

struct StateCase {
  std::vector<Behavior> behaviors;
  std::string label;
  StateOutcome expected;
  StateOutcome observed;
  bool consistent = false;  // label agrees with the observed run
  bool matches() const { return consistent && expected == observed; }
};

struct StateTable {
  std::uint32_t n = 0;
  std::vector<StateCase> cases;
  bool passed() const;
  nlohmann::json to_json() const;
  std::string render() const;
};

// Runs the simulator for every one of the 3^n behavior combinations.
StateTable enumerate_correctness_states(std::uint32_t n);

}  // namespace rdv::sim
