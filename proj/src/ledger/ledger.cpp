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

#include "ledger/ledger.hpp"

#include <algorithm>

#include "core/serialize.hpp"
#include "voter/registration.hpp"

namespace rdv::ledger {

const char* to_string(RoundOutcome::Kind kind) {
  switch (kind) {
    case RoundOutcome::Kind::accepted:
      return "accepted";
    case RoundOutcome::Kind::rejected:
      return "rejected";
    case RoundOutcome::Kind::aborted:
      return "aborted";
  }
  return "unknown";
}

Balance LedgerState::balance_of(const NodeId& node) const {
  Balance b;
  for (const auto& [coin, entry] : coins) {
    if (entry.owner != node) continue;
    if (entry.state == CoinState::spendable) ++b.spendable;
    if (entry.state == CoinState::blocked) ++b.blocked;
  }
  if (const VoterRecord* rec = record(node)) b.deposited = rec->deposit();
  b.ctr = ctr_of(node);
  return b;
}

std::uint64_t LedgerState::ctr_of(const NodeId& node) const {
  auto it = ctr.find(node);
  return it == ctr.end() ? 0 : it->second;
}

const VoterRecord* LedgerState::record(const NodeId& node) const {
  auto it = voters.find(node);
  return it == voters.end() ? nullptr : &it->second;
}

VoterRecord* LedgerState::record(const NodeId& node) {
  auto it = voters.find(node);
  return it == voters.end() ? nullptr : &it->second;
}

bool LedgerState::can_spend(const NodeId& node, const CoinId& coin) const {
  auto it = coins.find(coin);
  return it != coins.end() && it->second.owner == node && it->second.state == CoinState::spendable;
}

std::vector<CoinId> LedgerState::spendable_coins(const NodeId& node) const {
  std::vector<CoinId> out;
  for (const auto& [coin, entry] : coins) {
    if (entry.owner == node && entry.state == CoinState::spendable) out.push_back(coin);
  }
  return out;
}

std::vector<CoinId> LedgerState::blocked_coins() const {
  std::vector<CoinId> out;
  for (const auto& [coin, entry] : coins) {
    if (entry.state == CoinState::blocked) out.push_back(coin);
  }
  return out;
}

std::vector<NodeId> LedgerState::voter_ids() const {
  std::vector<NodeId> out;
  for (const auto& [node, rec] : voters) {
    if (rec.is_voter()) out.push_back(node);
  }
  return out;
}

LedgerState genesis_state(const Block& genesis, const ProtocolParams& params) {
  if (genesis.tx.kind != TxKind::mint || !genesis.tx.mint) throw LedgerError("genesis block carries no mint payload");
  LedgerState s;
  const auto coins = minted_coins(genesis);
  std::size_t i = 0;
  for (const auto& a : genesis.tx.mint->allocations) {
    for (std::uint32_t k = 0; k < a.coins; ++k) s.coins[coins[i++]] = CoinEntry{a.owner, CoinState::spendable};
  }
  s.minted = coins.size();
  for (const auto& v : genesis.tx.mint->voters) {
    auto own = s.spendable_coins(v);
    if (own.size() < genesis.tx.mint->deposit) throw LedgerError("genesis voter " + v.short_hex() + " cannot cover deposit");
    own.resize(genesis.tx.mint->deposit);
    ProtocolParams p = params;
    p.deposit = genesis.tx.mint->deposit;
    voter::register_voter(s, v, own, p, genesis.tx.tsp, false);
  }
  s.height = 0;
  return s;
}

std::optional<std::string> check_transaction(const LedgerState& state, const Transaction& tx,
                                             const ProtocolParams& params) {
  switch (tx.kind) {
    case TxKind::mint:
      return "mint outside genesis";
    case TxKind::transfer:
      for (const auto& c : tx.coins) {
        if (!state.can_spend(tx.sender, c)) return "sender does not own spendable coin " + c.str();
      }
      return std::nullopt;
    case TxKind::ctr_exchange:
      if (!tx.exchange) return "missing exchange terms";
      if (state.ctr_of(tx.sender) < tx.exchange->ctr_units) return "insufficient CTR";
      for (const auto& c : tx.coins) {
        if (!state.can_spend(tx.receiver, c)) return "counterparty does not own spendable coin " + c.str();
      }
      return std::nullopt;
    case TxKind::reg: {
      if (const VoterRecord* rec = state.record(tx.sender)) {
        if (rec->is_voter()) return "already registered";
        if (rec->debt > 0) return "outstanding collateral debt";
      }
      if (tx.coins.empty()) {
        if (!params.allow_bootstrap_debt) return "insufficient balance for deposit";
        return std::nullopt;
      }
      if (tx.coins.size() != params.deposit) return "deposit must be exactly d coins";
      for (const auto& c : tx.coins) {
        if (!state.can_spend(tx.sender, c)) return "sender does not own spendable coin " + c.str();
      }
      return std::nullopt;
    }
    case TxKind::leave: {
      const VoterRecord* rec = state.record(tx.sender);
      if (rec == nullptr || !rec->is_voter()) return "not a registered voter";
      if (rec->debt > 0) return "outstanding collateral debt";
      return std::nullopt;
    }
  }
  return "unknown kind";
}

void credit_coin(LedgerState& state, const CoinId& coin, const NodeId& to) {
  CoinEntry& entry = state.coins.at(coin);
  entry.owner = to;
  entry.state = CoinState::spendable;
  VoterRecord* rec = state.record(to);
  if (rec == nullptr || rec->debt == 0) return;
  --rec->debt;
  if (rec->is_voter()) {
    entry.state = CoinState::locked;
    rec->locked.insert(std::lower_bound(rec->locked.begin(), rec->locked.end(), coin), coin);
  } else {
    entry.state = CoinState::blocked;
  }
}

LedgerState exchange_ctr(const LedgerState& state, const Transaction& tx, const Verifier& verifier) {
  if (tx.kind != TxKind::ctr_exchange || !tx.exchange) throw LedgerError("not a ctr-exchange transaction");
  if (!verifier.verify(tx.receiver, exchange_signing_message(tx.id), tx.exchange->counterparty_signature)) {
    throw LedgerError("missing counterparty signature");
  }
  if (state.ctr_of(tx.sender) < tx.exchange->ctr_units) throw LedgerError("insufficient CTR");
  for (const auto& c : tx.coins) {
    if (!state.can_spend(tx.receiver, c)) throw LedgerError("insufficient coins: counterparty cannot spend " + c.str());
  }
  LedgerState s = state;
  s.ctr[tx.sender] -= tx.exchange->ctr_units;
  s.ctr[tx.receiver] += tx.exchange->ctr_units;
  for (const auto& c : tx.coins) credit_coin(s, c, tx.sender);
  return s;
}

namespace {

void apply_round_effects(LedgerState& s, const RoundOutcome& outcome, const ProtocolParams& params) {
  for (const auto& n : outcome.participants) {
    if (VoterRecord* rec = s.record(n)) rec->last_participation = std::max(rec->last_participation, outcome.started_at);
  }
  for (const auto& n : outcome.penalized) voter::penalize(s, n, params);
  for (const auto& n : outcome.rewarded) ++s.ctr[n];
  for (const auto& susp : outcome.suspensions) voter::suspend(s, susp.node, susp.until);
}

void apply_transaction(LedgerState& s, const Transaction& tx, const ProtocolParams& params) {
  switch (tx.kind) {
    case TxKind::transfer:
      for (const auto& c : tx.coins) credit_coin(s, c, tx.receiver);
      break;
    case TxKind::ctr_exchange:
      s.ctr[tx.sender] -= tx.exchange->ctr_units;
      s.ctr[tx.receiver] += tx.exchange->ctr_units;
      for (const auto& c : tx.coins) credit_coin(s, c, tx.sender);
      break;
    case TxKind::reg:
      voter::register_voter(s, tx.sender, tx.coins, params, tx.tsp, params.allow_bootstrap_debt);
      break;
    case TxKind::leave:
      voter::leave(s, tx.sender);
      break;
    case TxKind::mint:
      throw LedgerError("mint outside genesis");
  }
}

}  // namespace

LedgerState apply_block(const LedgerState& state, const Block& block, const RoundOutcome& outcome,
                        const ProtocolParams& params) {
  if (block.height != state.height + 1) {
    throw LedgerError("block height " + std::to_string(block.height) + " does not follow ledger height " +
                      std::to_string(state.height));
  }
  if (outcome.kind != RoundOutcome::Kind::accepted || outcome.tx_id != block.tx.id) {
    throw LedgerError("outcome does not describe this block");
  }
  if (auto why = check_transaction(state, block.tx, params)) throw LedgerError("block rejected: " + *why);
  LedgerState s = state;
  apply_transaction(s, block.tx, params);
  apply_round_effects(s, outcome, params);
  s.height = block.height;
  return s;
}

LedgerState apply_outcome(const LedgerState& state, const RoundOutcome& outcome, const ProtocolParams& params) {
  if (outcome.kind == RoundOutcome::Kind::accepted) throw LedgerError("accepted rounds are applied with their block");
  LedgerState s = state;
  apply_round_effects(s, outcome, params);
  return s;
}

std::optional<std::string> check_conservation(const LedgerState& state) {
  std::uint64_t spendable = 0;
  std::uint64_t locked = 0;
  std::uint64_t blocked = 0;
  for (const auto& [coin, entry] : state.coins) {
    switch (entry.state) {
      case CoinState::spendable:
        ++spendable;
        break;
      case CoinState::locked:
        ++locked;
        break;
      case CoinState::blocked:
        ++blocked;
        break;
    }
  }
  if (spendable + locked + blocked != state.minted) {
    return "coin total " + std::to_string(spendable + locked + blocked) + " != minted " + std::to_string(state.minted);
  }
  std::uint64_t deposited = 0;
  for (const auto& [node, rec] : state.voters) {
    deposited += rec.locked.size();
    for (const auto& c : rec.locked) {
      auto it = state.coins.find(c);
      if (it == state.coins.end() || it->second.owner != node || it->second.state != CoinState::locked) {
        return "deposit coin " + c.str() + " of " + node.short_hex() + " is not locked to it";
      }
    }
    if (!rec.is_voter() && !rec.locked.empty()) return "departed voter " + node.short_hex() + " still holds a deposit";
  }
  if (deposited != locked) return "locked coins " + std::to_string(locked) + " != deposits " + std::to_string(deposited);
  return std::nullopt;
}

Bytes serialize_state(const LedgerState& state) {
  Writer w;
  w.u64(state.height);
  w.u64(state.minted);
  w.count(state.coins.size());
  for (const auto& [coin, entry] : state.coins) {
    encode(w, coin);
    w.raw(entry.owner.bytes);
    w.u8(static_cast<std::uint8_t>(entry.state));
  }
  w.count(state.voters.size());
  for (const auto& [node, rec] : state.voters) {
    w.raw(node.bytes);
    w.i64(rec.registered_at);
    w.i64(rec.last_participation);
    w.u8(rec.suspended_until ? 1 : 0);
    w.i64(rec.suspended_until.value_or(0));
    w.u8(static_cast<std::uint8_t>(rec.status));
    w.u8(rec.bootstrap ? 1 : 0);
    w.u8(rec.demoted ? 1 : 0);
    w.u64(rec.debt);
    w.u64(rec.penalties);
    w.count(rec.locked.size());
    for (const auto& c : rec.locked) encode(w, c);
  }
  w.count(state.ctr.size());
  for (const auto& [node, units] : state.ctr) {
    w.raw(node.bytes);
    w.u64(units);
  }
  return std::move(w).take();
}

nlohmann::json to_json(const LedgerState& state) {
  using nlohmann::json;
  std::map<NodeId, Balance> balances;
  for (const auto& [coin, entry] : state.coins) balances[entry.owner];
  for (const auto& [node, rec] : state.voters) balances[node];
  for (const auto& [node, units] : state.ctr) balances[node];
  json accounts = json::array();
  for (auto& [node, unused] : balances) {
    const Balance b = state.balance_of(node);
    json a = {{"node", node.hex()},
              {"spendable", b.spendable},
              {"deposited", b.deposited},
              {"blocked", b.blocked},
              {"ctr", b.ctr}};
    if (const VoterRecord* rec = state.record(node)) {
      a["voter"] = {{"status", voter::to_string(rec->status)},
                    {"registered_at", rec->registered_at},
                    {"last_participation", rec->last_participation},
                    {"suspended_until", rec->suspended_until ? json(*rec->suspended_until) : json(nullptr)},
                    {"bootstrap", rec->bootstrap},
                    {"demoted", rec->demoted},
                    {"debt", rec->debt},
                    {"penalties", rec->penalties}};
    }
    accounts.push_back(std::move(a));
  }
  json blocked = json::array();
  for (const auto& c : state.blocked_coins()) blocked.push_back(c.str());
  return {{"height", state.height}, {"minted", state.minted}, {"accounts", accounts}, {"blocked_coins", blocked}};
}

nlohmann::json to_json(const RoundOutcome& o) {
  using nlohmann::json;
  auto ids = [](const std::vector<NodeId>& v) {
    json a = json::array();
    for (const auto& n : v) a.push_back(n.short_hex());
    return a;
  };
  json susp = json::array();
  for (const auto& s : o.suspensions) susp.push_back({{"node", s.node.short_hex()}, {"at", s.at}, {"until", s.until}});
  return {{"round", o.round},
          {"kind", to_string(o.kind)},
          {"tx", o.tx_id.hex()},
          {"started_at", o.started_at},
          {"decided_at", o.decided_at},
          {"tie", o.tie},
          {"participants", ids(o.participants)},
          {"penalized", ids(o.penalized)},
          {"rewarded", ids(o.rewarded)},
          {"equivocators", ids(o.equivocators)},
          {"suspensions", susp}};
}

}  // namespace rdv::ledger
