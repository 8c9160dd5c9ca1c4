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

#include "core/types.hpp"
#include "ledger/state.hpp"
#include "sim/config.hpp"

namespace rdv::sim {

struct Metrics {
  std::uint64_t blocks = 0;  // excluding genesis
  std::uint64_t rounds = 0;
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;
  std::uint64_t aborted = 0;
  std::uint64_t ties = 0;
  std::uint64_t delta_removals = 0;
  std::uint64_t signature_removals = 0;
  std::uint64_t reinstatements = 0;
  std::uint64_t penalties = 0;
  std::uint64_t coins_blocked = 0;
  std::uint64_t ctr_awarded = 0;
  std::uint64_t demotions = 0;
  std::uint64_t equivocations = 0;
  std::uint64_t bad_messages = 0;
  std::uint64_t blocks_refused = 0;
  std::uint64_t txs_broadcast = 0;
  std::uint64_t txs_confirmed = 0;
  std::uint64_t txs_dropped = 0;
  std::uint64_t txs_pending = 0;
  std::uint64_t double_spends_attempted = 0;
  std::uint64_t double_spends_detected = 0;
  std::uint64_t double_spends_confirmed = 0;
  std::uint64_t double_spent_flags = 0;
  std::uint64_t forks = 0;
  double latency_mean = 0.0;
  Tick latency_max = 0;
  std::vector<Tick> latencies;  // per confirmed transaction, broadcast to block
  std::vector<std::uint64_t> chain_lengths;  // per node, blocks including genesis
  bool assumption_violated = false;

  nlohmann::json to_json() const;
};

struct Verdict {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ForgeryResult {
  Tick backdate = 0;
  Hash tx_id;
  bool confirmed = false;
};

struct DoubleSpendAttempt {
  Hash vendor_tx;
  Hash collider_tx;
  bool detected = false;
  bool vendor_confirmed = false;
  bool collider_confirmed = false;
};

struct RunResult {
  ScenarioConfig config;
  std::vector<NodeId> node_ids;
  std::vector<Chain> chains;  // per node
  std::size_t observer = 0;
  ledger::LedgerState ledger;                   // observer's final state
  std::vector<ledger::RoundOutcome> outcomes;  // observer's round history
  Metrics metrics;
  std::vector<std::string> events;  // JSON lines
  std::vector<Verdict> verdicts;
  std::vector<ForgeryResult> forgeries;
  std::vector<DoubleSpendAttempt> double_spends;
  std::vector<std::string> invariant_violations;

  bool passed() const;
  nlohmann::json report() const;
};

// Human-readable rendering of a report produced by RunResult::report().
std::string summarize(const nlohmann::json& report);

// Executes the scenario until the event queue drains or `duration` elapses.
RunResult run(const ScenarioConfig& config);

// Writes chain.rdv, ledger.bin, ledger.json, events.jsonl, report.json and summary.txt.
void write_artifacts(const RunResult& result, const std::string& out_dir);

}  // namespace rdv::sim
