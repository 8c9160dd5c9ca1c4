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

#include "voter/round.hpp"

#include <algorithm>

#include "core/verify.hpp"
#include "ledger/ledger.hpp"

namespace rdv::voter {

namespace {

bool contains(const std::vector<NodeId>& v, const NodeId& n) { return std::binary_search(v.begin(), v.end(), n); }

void insert_sorted(std::vector<NodeId>& v, const NodeId& n) {
  auto it = std::lower_bound(v.begin(), v.end(), n);
  if (it == v.end() || *it != n) v.insert(it, n);
}

void erase_sorted(std::vector<NodeId>& v, const NodeId& n) {
  auto it = std::lower_bound(v.begin(), v.end(), n);
  if (it != v.end() && *it == n) v.erase(it);
}

void erase_vote(VoteBoxSet& set, const NodeId& voter) {
  std::erase_if(set.votes, [&](const Vote& v) { return v.voter == voter; });
}

}  // namespace

const char* to_string(Phase phase) {
  switch (phase) {
    case Phase::collecting:
      return "collecting";
    case Phase::signing_roster:
      return "signing-roster";
    case Phase::tallying:
      return "tallying";
    case Phase::done:
      return "done";
  }
  return "unknown";
}

const char* to_string(Accept a) {
  switch (a) {
    case Accept::counted:
      return "counted";
    case Accept::duplicate:
      return "duplicate";
    case Accept::bad_signature:
      return "bad-signature";
    case Accept::wrong_binding:
      return "wrong-binding";
    case Accept::not_member:
      return "not-member";
    case Accept::late:
      return "late";
    case Accept::equivocation:
      return "equivocation";
    case Accept::closed:
      return "closed";
  }
  return "unknown";
}

bool verify_tx(const Transaction& tx, Tick broadcast_at, const LedgerState& ledger, const ProtocolParams& params,
               const Verifier& verifier) {
  if (tx.id != tx.compute_id()) return false;
  if (verify_transaction_structure(tx)) return false;
  if (verify_transaction_signatures(tx, verifier)) return false;
  if (!priority::timestamp_plausible(tx, broadcast_at, params.clock)) return false;
  return !ledger::check_transaction(ledger, tx, params).has_value();
}

CastResult cast_vote(const VoterRecord& self, const KeyPair& key, const Transaction& tx, Tick broadcast_at,
                     const LedgerState& ledger, const priority::ConfirmedCoins& confirmed,
                     const priority::PriorityTable& table, const Hash& prev_hash, const ProtocolParams& params,
                     const Verifier& verifier) {
  CastResult out;
  if (tx.tsp <= self.registered_at) return out;
  if (priority::is_double_spent(tx, confirmed, table)) {
    out.kind = CastResult::Kind::double_spent;
    return out;
  }
  out.kind = CastResult::Kind::vote;
  const std::uint8_t value = verify_tx(tx, broadcast_at, ledger, params, verifier) ? 1 : 0;
  out.vote = make_vote(key, tx.id, prev_hash, value);
  return out;
}

RoundState::RoundState(std::uint64_t seq, Transaction tx, Tick tx_broadcast_at, Hash prev_hash,
                       std::vector<NodeId> roster, Tick start, const ProtocolParams& params)
    : seq_(seq),
      tx_(std::move(tx)),
      tx_broadcast_at_(tx_broadcast_at),
      prev_(prev_hash),
      initial_(std::move(roster)),
      start_(start),
      params_(params) {
  std::sort(initial_.begin(), initial_.end());
  initial_.erase(std::unique(initial_.begin(), initial_.end()), initial_.end());
  roster_ = initial_;
}

bool RoundState::is_member(const NodeId& node) const { return contains(roster_, node); }

std::optional<Tick> RoundState::next_deadline() const {
  switch (phase_) {
    case Phase::collecting:
      return vote_deadline() - 1 + params_.clock.m;
    case Phase::signing_roster:
      return epoch_opened_ + params_.delta - 1 + params_.clock.m;
    default:
      return std::nullopt;
  }
}

Accept RoundState::add_vote(const Vote& vote, Tick broadcast_at, const Verifier& verifier) {
  if (phase_ != Phase::collecting) return Accept::closed;
  if (vote.tx_id != tx_.id || vote.prev_block_hash != prev_) return Accept::wrong_binding;
  if (vote.value > 1) return Accept::wrong_binding;
  if (!verifier.verify(vote.voter, vote_signing_message(vote.tx_id, vote.voter, vote.prev_block_hash, vote.value),
                       vote.signature)) {
    return Accept::bad_signature;
  }
  if (contains(equivocators_, vote.voter)) return Accept::equivocation;
  if (!contains(roster_, vote.voter)) return Accept::not_member;
  if (broadcast_at >= vote_deadline()) return Accept::late;
  if (const Vote* prior = votes_.find(vote.voter)) {
    if (prior->value == vote.value) return Accept::duplicate;
    insert_sorted(equivocators_, vote.voter);
    remove_member(vote.voter);
    return Accept::equivocation;
  }
  auto it = std::lower_bound(votes_.votes.begin(), votes_.votes.end(), vote.voter,
                             [](const Vote& v, const NodeId& id) { return v.voter < id; });
  votes_.votes.insert(it, vote);
  return Accept::counted;
}

bool RoundState::add_leave(const NodeId& node, Tick broadcast_at) {
  if (phase_ != Phase::collecting || broadcast_at >= vote_deadline() || !contains(roster_, node)) return false;
  insert_sorted(leavers_, node);
  remove_member(node);
  return true;
}

Accept RoundState::add_roster_signature(const NodeId& signer, const std::vector<NodeId>& voters,
                                        const Signature& sig, Tick broadcast_at, const Verifier& verifier) {
  if (phase_ != Phase::signing_roster) return Accept::closed;
  if (voters != roster_) return Accept::wrong_binding;
  if (!contains(roster_, signer)) return Accept::not_member;
  if (broadcast_at < epoch_opened_ || broadcast_at >= epoch_opened_ + params_.delta) return Accept::late;
  if (!verifier.verify(signer, roster_signing_message(tx_.id, roster_, prev_), sig)) return Accept::bad_signature;
  if (!signatures_.emplace(signer, sig).second) return Accept::duplicate;
  return Accept::counted;
}

void RoundState::remove_member(const NodeId& node) {
  erase_sorted(roster_, node);
  erase_vote(votes_, node);
  signatures_.erase(node);
}

bool RoundState::advance(Tick now) {
  bool changed = false;
  if (phase_ == Phase::collecting) {
    const bool covered =
        std::all_of(roster_.begin(), roster_.end(), [&](const NodeId& n) { return votes_.find(n) != nullptr; });
    if (!covered && now < *next_deadline()) return false;
    close(now);
    changed = true;
  }
  while (phase_ == Phase::signing_roster) {
    const bool complete = signatures_.size() == roster_.size();
    if (!complete && now < *next_deadline()) break;
    if (complete) {
      phase_ = Phase::tallying;
      finish(now, votes_.ones() > votes_.zeros() ? RoundOutcome::Kind::accepted : RoundOutcome::Kind::rejected);
    } else {
      const Tick w = epoch_opened_ + params_.delta;
      for (const NodeId& n : std::vector<NodeId>(roster_)) {
        if (signatures_.count(n)) continue;
        not_participated_.push_back(n);
        suspensions_.push_back(Suspension{n, w, w + params_.pi});
        remove_member(n);
      }
      if (roster_.empty()) {
        finish(now, RoundOutcome::Kind::aborted);
      } else {
        open_signing(now);
      }
    }
    changed = true;
  }
  return changed;
}

void RoundState::close(Tick now) {
  closed_at_ = now;
  const Tick v = vote_deadline();
  for (const NodeId& n : std::vector<NodeId>(roster_)) {
    if (votes_.find(n) != nullptr) continue;
    not_participated_.push_back(n);
    suspensions_.push_back(Suspension{n, v, v + params_.pi});
    remove_member(n);
  }
  if (roster_.empty()) {
    finish(now, RoundOutcome::Kind::aborted);
    return;
  }
  open_signing(now);
}

void RoundState::open_signing(Tick now) {
  phase_ = Phase::signing_roster;
  epoch_opened_ = now;
  ++epoch_;
  signatures_.clear();
}

void RoundState::finish(Tick now, RoundOutcome::Kind kind) {
  phase_ = Phase::done;
  finished_at_ = now;
  RoundOutcome& o = outcome_;
  o.kind = kind;
  o.round = seq_;
  o.tx_id = tx_.id;
  o.prev_hash = prev_;
  o.started_at = start_;
  o.decided_at = now;
  o.participants = roster_;
  o.equivocators = equivocators_;
  o.suspensions = suspensions_;
  o.votes = votes_;
  o.tie = kind != RoundOutcome::Kind::aborted && votes_.ones() == votes_.zeros();
  const std::uint8_t winning = kind == RoundOutcome::Kind::accepted ? 1 : 0;
  if (kind != RoundOutcome::Kind::aborted) {
    for (const Vote& v : votes_.votes) (v.value == winning ? o.rewarded : o.penalized).push_back(v.voter);
  }
  for (const NodeId& n : equivocators_) o.penalized.push_back(n);
  std::sort(o.penalized.begin(), o.penalized.end());
  if (kind != RoundOutcome::Kind::aborted) {
    o.vote_rbox.tx_id = tx_.id;
    o.vote_rbox.voters = roster_;
    o.vote_rbox.prev_block_hash = prev_;
    for (const NodeId& n : roster_) o.vote_rbox.signatures.push_back(signatures_.at(n));
  }
}

Block RoundState::build_block(std::uint64_t height) const {
  if (phase_ != Phase::done || outcome_.kind != RoundOutcome::Kind::accepted) {
    throw Error("round " + std::to_string(seq_) + " did not accept its transaction");
  }
  Block b;
  b.height = height;
  b.prev_hash = prev_;
  b.tx = tx_;
  b.vote_boxes = votes_;
  b.vote_rbox = outcome_.vote_rbox;
  b.block_hash = b.compute_hash();
  return b;
}

}  // namespace rdv::voter
