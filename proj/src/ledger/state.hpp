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
#include <string>
#include <vector>

#include "core/types.hpp"
#include "voter/record.hpp"

namespace rdv::ledger {

using voter::ProtocolParams;
using voter::VoterRecord;
using voter::VoterStatus;

class LedgerError : public Error {
 public:
  using Error::Error;
};

enum class CoinState : std::uint8_t { spendable = 0, locked = 1, blocked = 2 };

struct CoinEntry {
  NodeId owner;
  CoinState state = CoinState::spendable;

  bool operator==(const CoinEntry&) const = default;
};

struct Balance {
  std::uint64_t spendable = 0;
  std::int64_t deposited = 0;
  std::uint64_t blocked = 0;
  std::uint64_t ctr = 0;

  bool operator==(const Balance&) const = default;
};

struct Suspension {
  NodeId node;
  Tick at = 0;
  Tick until = 0;

  bool operator==(const Suspension&) const = default;
};

// Economic effect of one finished voting round. Accepted rounds come with a
// block; rejected and aborted rounds leave the chain untouched but still move
// deposits, CTR and roster state.
struct RoundOutcome {
  enum class Kind : std::uint8_t { accepted = 0, rejected = 1, aborted = 2 };

  Kind kind = Kind::accepted;
  std::uint64_t round = 0;
  Hash tx_id;
  Hash prev_hash;
  Tick started_at = 0;
  Tick decided_at = 0;
  bool tie = false;
  std::vector<NodeId> participants;  // final roster, sorted
  std::vector<NodeId> penalized;
  std::vector<NodeId> rewarded;
  std::vector<NodeId> equivocators;
  std::vector<Suspension> suspensions;
  VoteBoxSet votes;
  VoteRBox vote_rbox;

  bool operator==(const RoundOutcome&) const = default;
};

const char* to_string(RoundOutcome::Kind kind);

struct LedgerState {
  std::map<CoinId, CoinEntry> coins;
  std::map<NodeId, VoterRecord> voters;
  std::map<NodeId, std::uint64_t> ctr;
  std::uint64_t height = 0;
  std::uint64_t minted = 0;

  Balance balance_of(const NodeId& node) const;
  std::uint64_t ctr_of(const NodeId& node) const;
  const VoterRecord* record(const NodeId& node) const;
  VoterRecord* record(const NodeId& node);
  bool can_spend(const NodeId& node, const CoinId& coin) const;
  std::vector<CoinId> spendable_coins(const NodeId& node) const;
  std::vector<CoinId> blocked_coins() const;
  // Registered identities (active or suspended), sorted.
  std::vector<NodeId> voter_ids() const;

  bool operator==(const LedgerState&) const = default;
};

}  // namespace rdv::ledger
