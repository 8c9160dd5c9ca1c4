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

#include "core/types.hpp"

#include <algorithm>

#include "core/serialize.hpp"

namespace rdv {

const char* to_string(TxKind kind) {
  switch (kind) {
    case TxKind::mint:
      return "mint";
    case TxKind::transfer:
      return "transfer";
    case TxKind::ctr_exchange:
      return "ctr-exchange";
    case TxKind::reg:
      return "register";
    case TxKind::leave:
      return "leave";
  }
  return "unknown";
}

Hash Transaction::compute_id() const {
  Writer w;
  w.tag("rdv/tx");
  encode_tx_body(w, *this);
  return sha256(w.bytes());
}

const Vote* VoteBoxSet::find(const NodeId& voter) const {
  auto it = std::lower_bound(votes.begin(), votes.end(), voter,
                             [](const Vote& v, const NodeId& id) { return v.voter < id; });
  return it != votes.end() && it->voter == voter ? &*it : nullptr;
}

std::size_t VoteBoxSet::ones() const {
  return static_cast<std::size_t>(std::count_if(votes.begin(), votes.end(), [](const Vote& v) { return v.value == 1; }));
}

std::size_t VoteBoxSet::zeros() const { return votes.size() - ones(); }

Hash Block::compute_hash() const {
  Writer w;
  w.tag("rdv/block");
  encode_block_body(w, *this);
  return sha256(w.bytes());
}

Chain::Chain(Block genesis) {
  if (genesis.height != 0) throw Error("genesis block must have height 0");
  blocks_.push_back(std::move(genesis));
}

void Chain::append(Block block) {
  if (block.height != tip().height + 1) {
    throw Error("block height " + std::to_string(block.height) + " does not extend tip height " +
                std::to_string(tip().height));
  }
  if (block.prev_hash != tip().block_hash) throw Error("block prev-hash does not match tip");
  blocks_.push_back(std::move(block));
}

Bytes tx_signing_message(const Hash& tx_id) {
  Writer w;
  w.tag("rdv/tx-sig");
  w.raw(tx_id.bytes);
  return std::move(w).take();
}

Bytes exchange_signing_message(const Hash& tx_id) {
  Writer w;
  w.tag("rdv/exchange-sig");
  w.raw(tx_id.bytes);
  return std::move(w).take();
}

Bytes vote_signing_message(const Hash& tx_id, const NodeId& voter, const Hash& prev, std::uint8_t value) {
  Writer w;
  w.tag("rdv/vote");
  w.raw(tx_id.bytes);
  w.raw(voter.bytes);
  w.raw(prev.bytes);
  w.u8(value);
  return std::move(w).take();
}

Bytes roster_signing_message(const Hash& tx_id, const std::vector<NodeId>& voters, const Hash& prev) {
  Writer w;
  w.tag("rdv/vote-rbox");
  w.raw(tx_id.bytes);
  w.count(voters.size());
  for (const auto& v : voters) w.raw(v.bytes);
  w.raw(prev.bytes);
  return std::move(w).take();
}

void seal(Transaction& tx, const KeyPair& sender) {
  std::sort(tx.coins.begin(), tx.coins.end());
  tx.id = tx.compute_id();
  tx.sender_signature = sender.sign(tx_signing_message(tx.id));
}

namespace {

Transaction base_tx(TxKind kind, const KeyPair& sender, const NodeId& receiver, std::vector<CoinId> coins, Tick tsp,
                    std::uint64_t ctr_snapshot) {
  Transaction tx;
  tx.kind = kind;
  tx.sender = sender.id();
  tx.receiver = receiver;
  tx.coins = std::move(coins);
  tx.tsp = tsp;
  tx.ctr_snapshot = ctr_snapshot;
  return tx;
}

}  // namespace

Transaction make_transfer(const KeyPair& sender, const NodeId& receiver, std::vector<CoinId> coins, Tick tsp,
                          std::uint64_t ctr_snapshot) {
  auto tx = base_tx(TxKind::transfer, sender, receiver, std::move(coins), tsp, ctr_snapshot);
  seal(tx, sender);
  return tx;
}

Transaction make_register(const KeyPair& sender, std::vector<CoinId> deposit_coins, Tick tsp,
                          std::uint64_t ctr_snapshot) {
  auto tx = base_tx(TxKind::reg, sender, sender.id(), std::move(deposit_coins), tsp, ctr_snapshot);
  seal(tx, sender);
  return tx;
}

Transaction make_leave(const KeyPair& sender, Tick tsp, std::uint64_t ctr_snapshot) {
  auto tx = base_tx(TxKind::leave, sender, sender.id(), {}, tsp, ctr_snapshot);
  seal(tx, sender);
  return tx;
}

Transaction make_ctr_exchange(const KeyPair& sender, const KeyPair& counterparty, std::vector<CoinId> coins,
                              std::uint64_t ctr_units, Tick tsp, std::uint64_t ctr_snapshot) {
  auto tx = base_tx(TxKind::ctr_exchange, sender, counterparty.id(), std::move(coins), tsp, ctr_snapshot);
  tx.exchange = ExchangeTerms{ctr_units, {}};
  seal(tx, sender);
  tx.exchange->counterparty_signature = counterparty.sign(exchange_signing_message(tx.id));
  return tx;
}

Block make_genesis(MintPayload payload) {
  std::sort(payload.voters.begin(), payload.voters.end());
  Block g;
  g.height = 0;
  g.tx.kind = TxKind::mint;
  g.tx.mint = std::move(payload);
  g.tx.id = g.tx.compute_id();
  g.vote_boxes = {};
  g.vote_rbox.tx_id = g.tx.id;
  g.block_hash = g.compute_hash();
  return g;
}

std::vector<CoinId> minted_coins(const Block& genesis) {
  std::vector<CoinId> out;
  if (!genesis.tx.mint) return out;
  std::uint32_t index = 0;
  for (const auto& a : genesis.tx.mint->allocations) {
    for (std::uint32_t i = 0; i < a.coins; ++i) out.push_back(CoinId{genesis.tx.id, index++});
  }
  return out;
}

Vote make_vote(const KeyPair& voter, const Hash& tx_id, const Hash& prev, std::uint8_t value) {
  Vote v;
  v.tx_id = tx_id;
  v.voter = voter.id();
  v.prev_block_hash = prev;
  v.value = value;
  v.signature = voter.sign(vote_signing_message(tx_id, v.voter, prev, value));
  return v;
}

Signature sign_roster(const KeyPair& voter, const Hash& tx_id, const std::vector<NodeId>& voters, const Hash& prev) {
  return voter.sign(roster_signing_message(tx_id, voters, prev));
}

}  // namespace rdv
