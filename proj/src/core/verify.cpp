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

#include "core/verify.hpp"

#include <algorithm>
#include <map>
#include <memory>

namespace rdv {

namespace {

Violation fail(std::string check, std::string detail) { return Violation{std::move(check), std::move(detail)}; }

}  // namespace

std::optional<Violation> verify_transaction_structure(const Transaction& tx) {
  for (std::size_t i = 1; i < tx.coins.size(); ++i) {
    if (!(tx.coins[i - 1] < tx.coins[i])) return fail("tx-structure", "coins not strictly ascending / duplicated");
  }
  if (tx.mint) return fail("tx-structure", "mint payload outside genesis");
  if (tx.exchange.has_value() != (tx.kind == TxKind::ctr_exchange)) {
    return fail("tx-structure", "exchange terms present iff kind is ctr-exchange");
  }
  switch (tx.kind) {
    case TxKind::mint:
      return fail("tx-structure", "mint transaction outside genesis");
    case TxKind::transfer:
      if (tx.coins.empty()) return fail("tx-structure", "transfer without coins");
      break;
    case TxKind::ctr_exchange:
      if (tx.coins.empty()) return fail("tx-structure", "exchange without coins");
      if (tx.exchange->ctr_units == 0) return fail("tx-structure", "exchange of zero CTR units");
      if (tx.sender == tx.receiver) return fail("tx-structure", "exchange with self");
      break;
    case TxKind::reg:
      if (tx.receiver != tx.sender) return fail("tx-structure", "register receiver must be the sender");
      break;
    case TxKind::leave:
      if (tx.receiver != tx.sender) return fail("tx-structure", "leave receiver must be the sender");
      if (!tx.coins.empty()) return fail("tx-structure", "leave carries no coins");
      break;
  }
  return std::nullopt;
}

std::optional<Violation> verify_transaction_signatures(const Transaction& tx, const Verifier& verifier) {
  if (!verifier.verify(tx.sender, tx_signing_message(tx.id), tx.sender_signature)) {
    return fail("tx-signature", "sender signature does not verify");
  }
  if (tx.kind == TxKind::ctr_exchange &&
      (!tx.exchange || !verifier.verify(tx.receiver, exchange_signing_message(tx.id), tx.exchange->counterparty_signature))) {
    return fail("tx-counterparty-signature", "counterparty signature does not verify");
  }
  return std::nullopt;
}

std::optional<Violation> verify_block(const Block& block, const Block& prev, const RosterExpectation& roster,
                                      const Verifier& verifier) {
  if (block.height != prev.height + 1) {
    return fail("height", "height " + std::to_string(block.height) + " after " + std::to_string(prev.height));
  }
  if (block.prev_hash != prev.block_hash || prev.block_hash != prev.compute_hash()) {
    return fail("prev-hash", "does not link to the previous block");
  }
  if (block.block_hash != block.compute_hash()) return fail("block-hash", "stored hash does not match contents");

  const Transaction& tx = block.tx;
  if (tx.id != tx.compute_id()) return fail("tx-id", "transaction id does not match contents");
  if (auto v = verify_transaction_structure(tx)) return v;

  const VoteRBox& rbox = block.vote_rbox;
  if (rbox.tx_id != tx.id) return fail("vote-rbox-binding", "vote-rbox names a different transaction");
  if (rbox.prev_block_hash != block.prev_hash) return fail("vote-rbox-binding", "vote-rbox bound to another prev-hash");
  if (rbox.voters.empty()) return fail("vote-rbox-voters", "empty voter list");
  for (std::size_t i = 1; i < rbox.voters.size(); ++i) {
    if (!(rbox.voters[i - 1] < rbox.voters[i])) return fail("vote-rbox-voters", "voters not strictly ascending");
  }
  if (rbox.signatures.size() != rbox.voters.size()) {
    return fail("vote-rbox-signature-count", std::to_string(rbox.signatures.size()) + " signatures for " +
                                                 std::to_string(rbox.voters.size()) + " voters");
  }

  const auto& votes = block.vote_boxes.votes;
  for (const auto& v : votes) {
    if (v.tx_id != tx.id) return fail("vote-binding", "vote for another transaction");
    if (v.prev_block_hash != block.prev_hash) return fail("vote-binding", "vote bound to another prev-hash");
    if (v.value > 1) return fail("vote-binding", "vote value out of range");
  }
  if (votes.size() != rbox.voters.size()) return fail("vote-set", "vote count differs from vote-rbox voters");
  for (std::size_t i = 0; i < votes.size(); ++i) {
    if (votes[i].voter != rbox.voters[i]) return fail("vote-set", "votes do not match vote-rbox voters one-to-one");
  }
  if (block.vote_boxes.ones() <= block.vote_boxes.zeros()) return fail("majority", "ones do not outnumber zeros");

  switch (roster.mode) {
    case RosterExpectation::Mode::exact:
      if (rbox.voters != roster.voters) return fail("roster", "vote-rbox voters differ from the expected roster");
      break;
    case RosterExpectation::Mode::subset:
      for (const auto& v : rbox.voters) {
        auto it = std::lower_bound(roster.voters.begin(), roster.voters.end(), v);
        if (it == roster.voters.end() || *it != v) return fail("roster", "voter " + v.short_hex() + " is not registered");
        const auto idx = static_cast<std::size_t>(it - roster.voters.begin());
        if (idx < roster.registered_at.size() && roster.registered_at[idx] >= tx.tsp) {
          return fail("roster", "voter " + v.short_hex() + " registered after the transaction was sent");
        }
      }
      break;
    case RosterExpectation::Mode::any:
      break;
  }

  if (auto v = verify_transaction_signatures(tx, verifier)) return v;
  for (const auto& v : votes) {
    if (!verifier.verify(v.voter, vote_signing_message(v.tx_id, v.voter, v.prev_block_hash, v.value), v.signature)) {
      return fail("vote-signature", "vote of " + v.voter.short_hex() + " does not verify");
    }
  }
  const Bytes roster_msg = roster_signing_message(rbox.tx_id, rbox.voters, rbox.prev_block_hash);
  for (std::size_t i = 0; i < rbox.voters.size(); ++i) {
    if (!verifier.verify(rbox.voters[i], roster_msg, rbox.signatures[i])) {
      return fail("vote-rbox-signature", "signature of " + rbox.voters[i].short_hex() + " does not verify");
    }
  }
  return std::nullopt;
}

std::optional<Violation> verify_genesis(const Block& genesis, const std::optional<Hash>& expected_hash) {
  if (genesis.height != 0) return fail("genesis", "height is not 0");
  if (!genesis.prev_hash.is_zero()) return fail("genesis", "prev-hash is not all-zero");
  if (genesis.tx.kind != TxKind::mint || !genesis.tx.mint) return fail("genesis", "not a minting transaction");
  if (genesis.tx.id != genesis.tx.compute_id()) return fail("tx-id", "genesis transaction id does not match");
  if (!genesis.vote_boxes.votes.empty() || !genesis.vote_rbox.voters.empty() ||
      !genesis.vote_rbox.signatures.empty() || genesis.vote_rbox.tx_id != genesis.tx.id ||
      !genesis.vote_rbox.prev_block_hash.is_zero()) {
    return fail("genesis", "genesis carries votes");
  }
  if (genesis.block_hash != genesis.compute_hash()) return fail("block-hash", "stored hash does not match contents");
  if (expected_hash && genesis.block_hash != *expected_hash) return fail("genesis", "differs from configured genesis");
  return std::nullopt;
}

std::optional<ChainViolation> verify_chain(std::span<const Block> blocks, const RosterHistory& rosters,
                                           const Verifier& verifier, const std::optional<Hash>& expected_genesis) {
  if (blocks.empty()) return ChainViolation{0, fail("empty", "chain has no blocks")};
  if (auto v = verify_genesis(blocks[0], expected_genesis)) return ChainViolation{0, *v};
  for (std::size_t i = 1; i < blocks.size(); ++i) {
    const RosterExpectation expect = rosters ? rosters(i) : RosterExpectation{};
    if (auto v = verify_block(blocks[i], blocks[i - 1], expect, verifier)) return ChainViolation{i, *v};
  }
  return std::nullopt;
}

RosterHistory registered_roster_history(std::span<const Block> blocks) {
  auto per_height = std::make_shared<std::vector<RosterExpectation>>();
  std::map<NodeId, Tick> registered;
  if (!blocks.empty() && blocks[0].tx.mint) {
    for (const auto& v : blocks[0].tx.mint->voters) registered[v] = blocks[0].tx.tsp;
  }
  for (std::size_t h = 0; h <= blocks.size(); ++h) {
    RosterExpectation e;
    e.mode = RosterExpectation::Mode::subset;
    for (const auto& [node, at] : registered) {
      e.voters.push_back(node);
      e.registered_at.push_back(at);
    }
    per_height->push_back(std::move(e));
    if (h == 0 || h == blocks.size()) continue;
    const Transaction& tx = blocks[h].tx;
    if (tx.kind == TxKind::reg) registered[tx.sender] = tx.tsp;
    if (tx.kind == TxKind::leave) registered.erase(tx.sender);
  }
  return [per_height](std::uint64_t height) {
    if (height < per_height->size()) return (*per_height)[height];
    return per_height->back();
  };
}

}  // namespace rdv
