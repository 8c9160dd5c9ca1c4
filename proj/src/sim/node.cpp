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

#include "sim/node.hpp"

#include <algorithm>

#include "core/serialize.hpp"
#include "core/verify.hpp"
#include "ledger/ledger.hpp"
#include "voter/registration.hpp"

namespace rdv::sim {

using nlohmann::json;
using voter::Phase;

std::uint64_t uniform_int(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
  if (hi <= lo) return lo;
  const std::uint64_t span = hi - lo + 1;
  if (span == 0) return rng();
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return lo + x % span;
}

bool chance(std::mt19937_64& rng, double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
}

namespace {

std::string short_hash(const Hash& h) { return h.hex().substr(0, 12); }

json ids(const std::vector<NodeId>& v) {
  json a = json::array();
  for (const auto& n : v) a.push_back(n.short_hex());
  return a;
}

}  // namespace

Node::Node(std::size_t index, KeyPair key, std::optional<VoterSpec> role, const Block& genesis,
           const ProtocolParams& params, std::uint64_t seed, Host& host, const std::set<NodeId>& adversarial)
    : index_(index),
      key_(std::move(key)),
      role_(role),
      params_(params),
      host_(host),
      adversarial_(adversarial),
      chain_(genesis),
      ledger_(ledger::genesis_state(genesis, params)) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), 0x5eedu};
  rng_.seed(seq);
  confirmed_.apply(genesis);
}

void Node::log(Tick now, json ev) {
  ev["t"] = now;
  host_.log(index_, std::move(ev));
}

void Node::deliver(Tick now, const Bytes& message) {
  Envelope env;
  try {
    env = decode_envelope(message);
  } catch (const DecodeError&) {
    ++stats_.bad_messages;
    return;
  }
  const Tick settle = std::max(now, env.broadcast_at + params_.clock.m);
  inbox_.emplace(std::make_pair(env.broadcast_at, message), std::move(env));
  host_.schedule(index_, settle);
}

void Node::on_timer(Tick now) {
  reinstate_due(now);
  const Tick horizon = now - params_.clock.m;
  while (!inbox_.empty() && inbox_.begin()->first.first <= horizon) {
    auto node = inbox_.extract(inbox_.begin());
    handle(now, node.mapped());
  }
  step(now);
}

void Node::reinstate_due(Tick now) {
  for (auto& [nid, rec] : ledger_.voters) {
    if (rec.status != voter::VoterStatus::suspended || !rec.suspended_until || *rec.suspended_until > now) continue;
    const Tick at = *rec.suspended_until;
    rec = voter::reinstate(rec, now);
    ++stats_.reinstatements;
    log(now, {{"ev", "reinstate"}, {"voter", nid.short_hex()}, {"at", at}});
  }
}

void Node::handle(Tick now, const Envelope& env) {
  switch (env.kind) {
    case WireKind::tx_broadcast:
    case WireKind::register_announce:
    case WireKind::leave_announce:
      handle_tx(now, std::get<Transaction>(env.payload), env.broadcast_at);
      return;
    case WireKind::vote_broadcast: {
      const Vote& v = std::get<Vote>(env.payload);
      if (!round_ || v.tx_id != round_->tx().id) return;
      const voter::Accept a = round_->add_vote(v, env.broadcast_at, host_.verifier());
      if (a == voter::Accept::equivocation) {
        ++stats_.equivocations;
        log(now, {{"ev", "equivocation"}, {"round", round_->seq()}, {"voter", v.voter.short_hex()}});
      } else if (a == voter::Accept::bad_signature || a == voter::Accept::wrong_binding) {
        ++stats_.bad_messages;
        log(now, {{"ev", "vote-discarded"}, {"voter", v.voter.short_hex()}, {"reason", voter::to_string(a)}});
      }
      return;
    }
    case WireKind::vote_rbox_signature: {
      const auto& s = std::get<RosterSignature>(env.payload);
      if (!round_ || s.tx_id != round_->tx().id || s.prev_block_hash != round_->prev_hash()) return;
      const voter::Accept a =
          round_->add_roster_signature(s.signer, s.voters, s.signature, env.broadcast_at, host_.verifier());
      if (a == voter::Accept::bad_signature) ++stats_.bad_messages;
      return;
    }
  }
}

void Node::handle_tx(Tick now, const Transaction& tx, Tick broadcast_at) {
  if (!seen_.insert(tx.id).second) return;
  if (tx.id != tx.compute_id() || verify_transaction_structure(tx) ||
      verify_transaction_signatures(tx, host_.verifier())) {
    ++stats_.bad_messages;
    log(now, {{"ev", "tx-discarded"}, {"tx", short_hash(tx.id)}});
    return;
  }
  table_.insert_and_sort(tx, now, [this](const NodeId& n) { return ledger_.ctr_of(n); }, broadcast_at);
  stats_.announced_at.emplace(tx.id, broadcast_at);
  if (tx.kind == TxKind::leave) {
    const auto* rec = ledger_.record(tx.sender);
    if (rec != nullptr && rec->is_voter()) {
      pending_leaves_.emplace(tx.sender, tx.id);
      if (round_ && round_->add_leave(tx.sender, broadcast_at)) {
        log(now, {{"ev", "leave-withdraw"}, {"round", round_->seq()}, {"voter", tx.sender.short_hex()}});
      }
    }
  }
}

void Node::step(Tick now) {
  for (;;) {
    if (round_) {
      const std::size_t before = round_->suspensions().size();
      const Phase phase_before = round_->phase();
      round_->advance(now);
      const auto& susp = round_->suspensions();
      for (std::size_t i = before; i < susp.size(); ++i) {
        const bool in_vote = phase_before == Phase::collecting && round_->closed_at() == now &&
                             susp[i].at == round_->vote_deadline();
        log(now, {{"ev", in_vote ? "delta-removal" : "signature-removal"},
                  {"round", round_->seq()},
                  {"voter", susp[i].node.short_hex()},
                  {"at", susp[i].at},
                  {"until", susp[i].until}});
        ++(in_vote ? stats_.delta_removals : stats_.signature_removals);
      }
      if (phase_before == Phase::collecting && round_->phase() != Phase::collecting) {
        log(now, {{"ev", "round-close"},
                  {"round", round_->seq()},
                  {"roster", ids(round_->roster())},
                  {"ones", round_->votes().ones()},
                  {"zeros", round_->votes().zeros()}});
      }
      if (round_->phase() == Phase::done) {
        finish_round(now);
        continue;
      }
      maybe_sign(now);
      host_.schedule(index_, *round_->next_deadline());
      return;
    }
    if (!try_start(now)) return;
  }
}

bool Node::try_start(Tick now) {
  while (!table_.empty()) {
    table_.resort(now, [this](const NodeId& n) { return ledger_.ctr_of(n); });
    const priority::Row head = *table_.head();
    const Transaction& tx = head.tx;
    if (priority::is_double_spent(tx, confirmed_, table_)) {
      stats_.flagged_double_spent.insert(tx.id);
      log(now, {{"ev", "double-spent"}, {"tx", short_hash(tx.id)}, {"sender", tx.sender.short_hex()}});
      resolve(tx, "double-spent", now);
      continue;
    }
    std::vector<NodeId> roster;
    std::optional<Tick> earliest;
    for (const auto& [nid, rec] : ledger_.voters) {
      if (!rec.is_voter() || rec.registered_at >= tx.tsp || pending_leaves_.count(nid)) continue;
      if (rec.suspended_at(now)) {
        earliest = earliest ? std::min(*earliest, *rec.suspended_until) : *rec.suspended_until;
        continue;
      }
      roster.push_back(nid);
    }
    if (roster.empty()) {
      if (earliest) {
        host_.schedule(index_, *earliest);
        return false;
      }
      resolve(tx, "no eligible voters", now);
      continue;
    }
    round_.emplace(round_seq_++, tx, head.announced_at, chain_.tip().block_hash, roster, now, params_);
    signed_epoch_ = 0;
    logged_suspensions_ = 0;
    ++stats_.rounds;
    std::size_t adversarial = 0;
    for (const auto& n : roster) adversarial += adversarial_.count(n);
    if (adversarial * 2 >= roster.size() && adversarial > 0) stats_.assumption_violated = true;
    log(now, {{"ev", "round-start"},
              {"round", round_->seq()},
              {"tx", short_hash(tx.id)},
              {"kind", to_string(tx.kind)},
              {"height", chain_.tip().height + 1},
              {"roster", ids(roster)}});
    host_.schedule(index_, *round_->next_deadline());
    if (round_->is_member(id())) cast(now);
    return true;
  }
  return false;
}

void Node::cast(Tick now) {
  const voter::VoterRecord* self = ledger_.record(id());
  if (self == nullptr) return;
  const VoterSpec spec = role_.value_or(VoterSpec{});
  const std::uint64_t nth = roster_rounds_++;
  if (spec.strategy == Strategy::abstainer && nth >= spec.silent_from && nth < spec.silent_from + spec.silent_rounds) {
    log(now, {{"ev", "abstain"}, {"round", round_->seq()}});
    return;
  }
  const auto res = voter::cast_vote(*self, key_, round_->tx(), round_->tx_broadcast_at(), ledger_, confirmed_, table_,
                                    round_->prev_hash(), params_, host_.verifier());
  if (res.kind != voter::CastResult::Kind::vote) return;
  std::uint8_t value = res.vote->value;
  switch (spec.strategy) {
    case Strategy::dissenter:
      if (chance(rng_, spec.flip_probability)) value ^= 1;
      break;
    case Strategy::fixed_vote:
      value = spec.value;
      break;
    default:
      break;
  }
  auto send = [&](std::uint8_t v) {
    Envelope env{WireKind::vote_broadcast, now, make_vote(key_, round_->tx().id, round_->prev_hash(), v)};
    host_.broadcast(index_, std::move(env));
  };
  if (spec.strategy == Strategy::equivocator) {
    send(1);
    send(0);
    log(now, {{"ev", "vote"}, {"round", round_->seq()}, {"value", "both"}});
    return;
  }
  send(value);
  log(now, {{"ev", "vote"}, {"round", round_->seq()}, {"value", value}});
}

void Node::maybe_sign(Tick now) {
  if (round_->phase() != Phase::signing_roster || !round_->is_member(id()) || signed_epoch_ == round_->epoch()) return;
  signed_epoch_ = round_->epoch();
  if (role_ && role_->withhold_signature) return;
  RosterSignature s{round_->tx().id, round_->roster(), round_->prev_hash(), id(),
                    sign_roster(key_, round_->tx().id, round_->roster(), round_->prev_hash())};
  host_.broadcast(index_, Envelope{WireKind::vote_rbox_signature, now, std::move(s)});
}

void Node::finish_round(Tick now) {
  RoundOutcome outcome = round_->outcome();
  const Transaction tx = round_->tx();
  const LedgerState before = ledger_;
  log(now, {{"ev", "round-end"},
            {"round", outcome.round},
            {"kind", ledger::to_string(outcome.kind)},
            {"tie", outcome.tie},
            {"penalized", ids(outcome.penalized)},
            {"rewarded", ids(outcome.rewarded)}});
  if (outcome.tie) ++stats_.ties;
  switch (outcome.kind) {
    case RoundOutcome::Kind::accepted: {
      Block block = round_->build_block(chain_.tip().height + 1);
      try {
        ledger_ = ledger::apply_block(ledger_, block, outcome, params_);
      } catch (const ledger::LedgerError& e) {
        ++stats_.blocks_refused;
        log(now, {{"ev", "block-refused"}, {"tx", short_hash(tx.id)}, {"reason", e.what()}});
        outcome.kind = RoundOutcome::Kind::aborted;
        outcome.penalized = outcome.equivocators;
        outcome.rewarded.clear();
        ledger_ = ledger::apply_outcome(ledger_, outcome, params_);
        resolve(tx, "refused by ledger", now);
        break;
      }
      if (block.height <= chain_.tip().height) ++stats_.forks;
      chain_.append(block);
      confirmed_.apply(block);
      ++stats_.accepted;
      stats_.confirmed_at.emplace(tx.id, now);
      log(now, {{"ev", "block"}, {"height", block.height}, {"hash", short_hash(block.block_hash)}, {"tx", short_hash(tx.id)}});
      resolve(tx, "", now);
      break;
    }
    case RoundOutcome::Kind::rejected:
      ++stats_.rejected;
      ledger_ = ledger::apply_outcome(ledger_, outcome, params_);
      resolve(tx, "rejected", now);
      break;
    case RoundOutcome::Kind::aborted:
      ++stats_.aborted;
      ledger_ = ledger::apply_outcome(ledger_, outcome, params_);
      break;
  }
  stats_.penalties += outcome.penalized.size();
  stats_.ctr_awarded += outcome.rewarded.size();
  for (const auto& s : outcome.suspensions) host_.schedule(index_, s.until);
  outcomes_.push_back(std::move(outcome));
  round_.reset();
  after_ledger_change(before, now);
}

void Node::resolve(const Transaction& tx, const std::string& reason, Tick now) {
  table_.erase(tx.id);
  resolved_.insert(tx.id);
  if (tx.kind == TxKind::leave) {
    auto it = pending_leaves_.find(tx.sender);
    if (it != pending_leaves_.end() && it->second == tx.id) pending_leaves_.erase(it);
  }
  if (tx.spender() == id()) {
    for (const auto& c : tx.coins) reserved_.erase(c);
  }
  if (!reason.empty()) {
    stats_.dropped.emplace(tx.id, reason);
    log(now, {{"ev", "tx-dropped"}, {"tx", short_hash(tx.id)}, {"reason", reason}});
  }
}

void Node::after_ledger_change(const LedgerState& before, Tick now) {
  for (const auto& [nid, rec] : ledger_.voters) {
    const auto* old = before.record(nid);
    if (rec.demoted && (old == nullptr || !old->demoted)) {
      ++stats_.demotions;
      log(now, {{"ev", "demoted"}, {"voter", nid.short_hex()}, {"penalties", rec.penalties}});
    }
  }
  if (auto why = ledger::check_conservation(ledger_)) {
    stats_.invariant_violations.push_back("t=" + std::to_string(now) + ": " + *why);
  }
}

std::vector<CoinId> Node::pick_coins(std::uint32_t n) const {
  std::vector<CoinId> out;
  for (const auto& c : ledger_.spendable_coins(id())) {
    if (out.size() == n) break;
    if (!reserved_.count(c)) out.push_back(c);
  }
  if (out.size() < n) out.clear();
  return out;
}

void Node::reserve(const Transaction& tx) {
  for (const auto& c : tx.coins) reserved_.insert(c);
}

}  // namespace rdv::sim
