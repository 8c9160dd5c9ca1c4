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

#include "voter/registration.hpp"

#include <algorithm>

#include "ledger/ledger.hpp"

namespace rdv::voter {

using ledger::CoinState;
using ledger::LedgerError;
using ledger::LedgerState;

const char* to_string(VoterStatus status) {
  switch (status) {
    case VoterStatus::active:
      return "active";
    case VoterStatus::suspended:
      return "suspended";
    case VoterStatus::left:
      return "left";
  }
  return "unknown";
}

void ProtocolParams::validate() const {
  if (delta <= 0) throw Error("params.delta: must be > 0");
  if (pi <= 0) throw Error("params.pi: must be > 0");
  if (deposit == 0) throw Error("params.deposit: must be > 0");
  if (penalty == 0 || penalty > deposit) throw Error("params.penalty: must satisfy 0 < penalty <= deposit");
  if (clock.m < 0) throw Error("params.m: must be >= 0");
  if (clock.slack < 0) throw Error("params.slack: must be >= 0");
}

VoterRecord register_voter(LedgerState& ledger, const NodeId& node, std::span<const CoinId> deposit_coins,
                           const ProtocolParams& params, Tick now, bool allow_debt) {
  if (const VoterRecord* existing = ledger.record(node)) {
    if (existing->is_voter()) throw LedgerError("node " + node.short_hex() + " is already registered");
    if (existing->debt > 0) throw LedgerError("node " + node.short_hex() + " still owes collateral");
  }
  VoterRecord rec;
  rec.node = node;
  rec.registered_at = now;
  rec.last_participation = now;
  rec.status = VoterStatus::active;
  if (deposit_coins.empty()) {
    if (!allow_debt) throw LedgerError("insufficient balance: deposit of " + std::to_string(params.deposit) + " required");
    rec.bootstrap = true;
    rec.debt = params.deposit;
  } else {
    if (deposit_coins.size() != params.deposit) {
      throw LedgerError("deposit must be exactly " + std::to_string(params.deposit) + " coins");
    }
    for (const auto& c : deposit_coins) {
      if (!ledger.can_spend(node, c)) throw LedgerError("insufficient balance: coin " + c.str() + " not spendable");
    }
    for (const auto& c : deposit_coins) {
      ledger.coins.at(c).state = CoinState::locked;
      rec.locked.push_back(c);
    }
    std::sort(rec.locked.begin(), rec.locked.end());
  }
  ledger.voters[node] = rec;
  return rec;
}

void leave(LedgerState& ledger, const NodeId& node) {
  VoterRecord* rec = ledger.record(node);
  if (rec == nullptr) throw LedgerError("node " + node.short_hex() + " never registered");
  if (!rec->is_voter()) throw LedgerError("node " + node.short_hex() + " already left");
  if (rec->debt > 0) throw LedgerError("node " + node.short_hex() + " still owes collateral");
  for (const auto& c : rec->locked) ledger.coins.at(c).state = CoinState::spendable;
  rec->locked.clear();
  rec->status = VoterStatus::left;
  rec->suspended_until.reset();
}

void penalize(LedgerState& ledger, const NodeId& node, const ProtocolParams& params) {
  VoterRecord* rec = ledger.record(node);
  if (rec == nullptr) throw LedgerError("cannot penalize unregistered node " + node.short_hex());
  std::uint32_t remaining = params.penalty;
  while (remaining > 0 && !rec->locked.empty()) {
    ledger.coins.at(rec->locked.back()).state = CoinState::blocked;
    rec->locked.pop_back();
    --remaining;
  }
  rec->debt += remaining;
  rec->penalties += params.penalty;
  if (rec->is_voter() && rec->penalties >= params.deposit) {
    for (const auto& c : rec->locked) ledger.coins.at(c).state = CoinState::spendable;
    rec->locked.clear();
    rec->status = VoterStatus::left;
    rec->demoted = true;
    rec->suspended_until.reset();
  }
}

void suspend(LedgerState& ledger, const NodeId& node, Tick until) {
  VoterRecord* rec = ledger.record(node);
  if (rec == nullptr || !rec->is_voter()) return;
  rec->status = VoterStatus::suspended;
  rec->suspended_until = until;
}

VoterRecord reinstate(const VoterRecord& record, Tick now) {
  VoterRecord out = record;
  if (out.status == VoterStatus::suspended && out.suspended_until && now >= *out.suspended_until) {
    out.status = VoterStatus::active;
    out.suspended_until.reset();
  }
  return out;
}

}  // namespace rdv::voter
