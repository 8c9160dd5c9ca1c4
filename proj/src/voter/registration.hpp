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

#include <span>

#include "ledger/state.hpp"
#include "voter/record.hpp"

// Registration lifecycle of a voter, operating directly on ledger state.

namespace rdv::voter {

// Locks `deposit_coins` (exactly d spendable coins of `node`) or, with an
// empty coin list and `allow_debt`, registers with a deposit of -d. Throws
// ledger::LedgerError on insufficient balance or duplicate registration.
VoterRecord register_voter(ledger::LedgerState& ledger, const NodeId& node, std::span<const CoinId> deposit_coins,
                           const ProtocolParams& params, Tick now, bool allow_debt);

// Returns the remaining deposit to spendable balance and marks the record
// left. Throws if `node` never registered, has already left, or still owes
// bootstrap collateral.
void leave(ledger::LedgerState& ledger, const NodeId& node);

// Carves `params.penalty` out of the deposit into blocked coins. Any shortfall
// becomes debt. Demotes the voter once accrued penalties reach d.
void penalize(ledger::LedgerState& ledger, const NodeId& node, const ProtocolParams& params);

void suspend(ledger::LedgerState& ledger, const NodeId& node, Tick until);

// Inclusive boundary: active again once now >= suspended-until. No-op for
// records that are not suspended.
VoterRecord reinstate(const VoterRecord& record, Tick now);

}  // namespace rdv::voter
