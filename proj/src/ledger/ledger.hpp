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

#include <optional>
#include <string>

#include "json.hpp"

#include "core/crypto.hpp"
#include "ledger/state.hpp"

namespace rdv::ledger {

// State right after genesis: minted coins allocated, initial voters holding
// their deposit.
LedgerState genesis_state(const Block& genesis, const ProtocolParams& params);

// Ledger-level validity of a transaction against `state`: ownership of
// spendable coins, CTR balance, registration rules. Signatures are checked
// elsewhere. Returns a reason on failure.
std::optional<std::string> check_transaction(const LedgerState& state, const Transaction& tx,
                                             const ProtocolParams& params);

// Applies an accepted round. Throws LedgerError if the block does not extend
// `state` or its transaction is not valid against it.
LedgerState apply_block(const LedgerState& state, const Block& block, const RoundOutcome& outcome,
                        const ProtocolParams& params);

// Applies a rejected or aborted round (no block).
LedgerState apply_outcome(const LedgerState& state, const RoundOutcome& outcome, const ProtocolParams& params);

// CTR for coins: the sender's `ctr_units` move to the receiver and the
// receiver's coins move to the sender, atomically.
LedgerState exchange_ctr(const LedgerState& state, const Transaction& tx, const Verifier& verifier);

// Coin conservation and coin-state/record agreement. Returns a description
// of the first inconsistency.
std::optional<std::string> check_conservation(const LedgerState& state);

// Moves `coin` to `to`, netting any outstanding collateral debt first.
void credit_coin(LedgerState& state, const CoinId& coin, const NodeId& to);

Bytes serialize_state(const LedgerState& state);
nlohmann::json to_json(const LedgerState& state);
nlohmann::json to_json(const RoundOutcome& outcome);

}  // namespace rdv::ledger
