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
#include <vector>

#include "ledger/state.hpp"
#include "priority/priority.hpp"
#include "voter/record.hpp"

// One voting round for one transaction at one chain height.
//
// Timing, with S the start tick, m the propagation bound and Δ the window:
//   votes count if broadcast before V = S + Δ; collection closes at the first
//   tick every roster member is covered, or at V - 1 + m. Members still
//   silent are removed effective V and suspended until V + Π.
//   The remaining roster signs the VoteRBox. Signatures count if broadcast
//   before W = T + Δ (T the tick the signing epoch opened); missing signers
//   are removed at W - 1 + m and the smaller roster is signed again.
// The caller feeds every message broadcast at or before now - m before
// calling advance(now), so all nodes running the same round agree on it.

namespace rdv::voter {

using ledger::LedgerState;
using ledger::RoundOutcome;
using ledger::Suspension;

enum class Phase : std::uint8_t { collecting, signing_roster, tallying, done };

const char* to_string(Phase phase);

// Vote value of an honest voter: the transaction is valid against the
// ledger, its signatures verify and its timestamp is plausible relative to
// the tick it was broadcast.
bool verify_tx(const Transaction& tx, Tick broadcast_at, const LedgerState& ledger, const ProtocolParams& params,
               const Verifier& verifier);

struct CastResult {
  enum class Kind : std::uint8_t { vote, abstain, double_spent };
  Kind kind = Kind::abstain;
  std::optional<Vote> vote;
};

CastResult cast_vote(const VoterRecord& self, const KeyPair& key, const Transaction& tx, Tick broadcast_at,
                     const LedgerState& ledger, const priority::ConfirmedCoins& confirmed,
                     const priority::PriorityTable& table, const Hash& prev_hash, const ProtocolParams& params,
                     const Verifier& verifier);

enum class Accept : std::uint8_t {
  counted,
  duplicate,
  bad_signature,
  wrong_binding,
  not_member,
  late,
  equivocation,
  closed,
};

const char* to_string(Accept a);

class RoundState {
 public:
  RoundState(std::uint64_t seq, Transaction tx, Tick tx_broadcast_at, Hash prev_hash, std::vector<NodeId> roster,
             Tick start, const ProtocolParams& params);

  Phase phase() const { return phase_; }
  std::uint64_t seq() const { return seq_; }
  const Transaction& tx() const { return tx_; }
  Tick tx_broadcast_at() const { return tx_broadcast_at_; }
  const Hash& prev_hash() const { return prev_; }
  Tick started_at() const { return start_; }
  Tick vote_deadline() const { return start_ + params_.delta; }
  const std::vector<NodeId>& initial_roster() const { return initial_; }
  const std::vector<NodeId>& roster() const { return roster_; }
  const VoteBoxSet& votes() const { return votes_; }
  const std::vector<NodeId>& not_participated() const { return not_participated_; }
  const std::vector<NodeId>& equivocators() const { return equivocators_; }
  const std::vector<NodeId>& leavers() const { return leavers_; }
  const std::vector<Suspension>& suspensions() const { return suspensions_; }
  bool is_member(const NodeId& node) const;

  // Signing epoch; bumps whenever the roster to be signed changes.
  std::uint32_t epoch() const { return epoch_; }
  Tick closed_at() const { return closed_at_; }
  Tick finished_at() const { return finished_at_; }

  // Tick at which advance() fires without further input.
  std::optional<Tick> next_deadline() const;

  Accept add_vote(const Vote& vote, Tick broadcast_at, const Verifier& verifier);
  // Removes a member announcing departure while votes are still collected.
  bool add_leave(const NodeId& node, Tick broadcast_at);
  Accept add_roster_signature(const NodeId& signer, const std::vector<NodeId>& voters, const Signature& sig,
                              Tick broadcast_at, const Verifier& verifier);

  // Returns true if the phase or signing epoch changed.
  bool advance(Tick now);

  // Valid once phase() == done.
  const RoundOutcome& outcome() const { return outcome_; }
  // Accepted rounds only.
  Block build_block(std::uint64_t height) const;

 private:
  void remove_member(const NodeId& node);
  void close(Tick now);
  void open_signing(Tick now);
  void finish(Tick now, RoundOutcome::Kind kind);

  std::uint64_t seq_;
  Transaction tx_;
  Tick tx_broadcast_at_;
  Hash prev_;
  std::vector<NodeId> initial_;
  std::vector<NodeId> roster_;
  Tick start_;
  ProtocolParams params_;

  Phase phase_ = Phase::collecting;
  VoteBoxSet votes_;
  std::vector<NodeId> not_participated_;
  std::vector<NodeId> equivocators_;
  std::vector<NodeId> leavers_;
  std::vector<Suspension> suspensions_;

  std::uint32_t epoch_ = 0;
  Tick closed_at_ = 0;
  Tick epoch_opened_ = 0;
  std::map<NodeId, Signature> signatures_;

  Tick finished_at_ = 0;
  RoundOutcome outcome_;
};

}  // namespace rdv::voter
