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
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "core/types.hpp"
#include "ledger/state.hpp"
#include "priority/priority.hpp"
#include "sim/config.hpp"
#include "sim/wire.hpp"
#include "voter/round.hpp"

namespace rdv::sim {

using ledger::LedgerState;
using ledger::RoundOutcome;

// Services a node needs from the simulation around it.
class Host {
 public:
  virtual ~Host() = default;
  virtual void broadcast(std::size_t from, Envelope env) = 0;
  virtual void schedule(std::size_t node, Tick at) = 0;
  virtual void log(std::size_t node, nlohmann::json event) = 0;
  virtual const Verifier& verifier() const = 0;
};

struct NodeStats {
  std::uint64_t rounds = 0;
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;
  std::uint64_t aborted = 0;
  std::uint64_t ties = 0;
  std::uint64_t delta_removals = 0;
  std::uint64_t signature_removals = 0;
  std::uint64_t reinstatements = 0;
  std::uint64_t penalties = 0;
  std::uint64_t ctr_awarded = 0;
  std::uint64_t equivocations = 0;
  std::uint64_t bad_messages = 0;
  std::uint64_t blocks_refused = 0;
  std::uint64_t demotions = 0;
  std::uint64_t forks = 0;
  bool assumption_violated = false;
  std::set<Hash> flagged_double_spent;
  std::map<Hash, std::string> dropped;  // tx id -> reason
  std::map<Hash, Tick> confirmed_at;
  std::map<Hash, Tick> announced_at;
  std::vector<std::string> invariant_violations;
};

// Returns a uniformly distributed integer in [lo, hi].
std::uint64_t uniform_int(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi);
bool chance(std::mt19937_64& rng, double p);

// One participant. Every node keeps the full chain and ledger, selects the
// same head and runs the same round bookkeeping; nodes that hold a voter
// record also vote and sign.
class Node {
 public:
  Node(std::size_t index, KeyPair key, std::optional<VoterSpec> role, const Block& genesis,
       const ProtocolParams& params, std::uint64_t seed, Host& host, const std::set<NodeId>& adversarial);

  std::size_t index() const { return index_; }
  const NodeId& id() const { return key_.id(); }
  const KeyPair& key() const { return key_; }
  const Chain& chain() const { return chain_; }
  const LedgerState& ledger() const { return ledger_; }
  const NodeStats& stats() const { return stats_; }
  const std::vector<RoundOutcome>& outcomes() const { return outcomes_; }
  const priority::PriorityTable& table() const { return table_; }

  void deliver(Tick now, const Bytes& message);
  void on_timer(Tick now);

  // Wallet: up to `n` spendable coins not tied up in this node's own pending
  // transactions. Empty if fewer than `n` are available.
  std::vector<CoinId> pick_coins(std::uint32_t n) const;
  void reserve(const Transaction& tx);

 private:
  void reinstate_due(Tick now);
  void handle(Tick now, const Envelope& env);
  void handle_tx(Tick now, const Transaction& tx, Tick broadcast_at);
  void step(Tick now);
  bool try_start(Tick now);
  void cast(Tick now);
  void maybe_sign(Tick now);
  void finish_round(Tick now);
  void resolve(const Transaction& tx, const std::string& reason, Tick now);
  void after_ledger_change(const LedgerState& before, Tick now);
  void log(Tick now, nlohmann::json ev);

  std::size_t index_;
  KeyPair key_;
  std::optional<VoterSpec> role_;
  ProtocolParams params_;
  Host& host_;
  const std::set<NodeId>& adversarial_;
  std::mt19937_64 rng_;

  Chain chain_;
  LedgerState ledger_;
  priority::ConfirmedCoins confirmed_;
  priority::PriorityTable table_;
  std::set<Hash> seen_;
  std::set<Hash> resolved_;
  std::map<NodeId, Hash> pending_leaves_;
  std::set<CoinId> reserved_;

  std::map<std::pair<Tick, Bytes>, Envelope> inbox_;

  std::optional<voter::RoundState> round_;
  std::uint64_t round_seq_ = 0;
  std::uint32_t signed_epoch_ = 0;
  std::size_t logged_suspensions_ = 0;
  std::uint64_t roster_rounds_ = 0;

  NodeStats stats_;
  std::vector<RoundOutcome> outcomes_;
};

}  // namespace rdv::sim
