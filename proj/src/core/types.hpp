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
#include <optional>
#include <string>
#include <vector>

#include "core/bytes.hpp"
#include "core/crypto.hpp"

namespace rdv {

// A discrete coin: minted by the event `origin` as its `index`-th output.
struct CoinId {
  Hash origin;
  std::uint32_t index = 0;

  std::string str() const { return origin.hex().substr(0, 8) + ":" + std::to_string(index); }
  auto operator<=>(const CoinId&) const = default;
};

enum class TxKind : std::uint8_t {
  mint = 0,
  transfer = 1,
  ctr_exchange = 2,
  reg = 3,
  leave = 4,
};

const char* to_string(TxKind kind);

// CTR-for-coins swap terms. The sender gives `ctr_units` of CTR; the receiver
// gives the transaction's coins and co-signs the transaction id.
struct ExchangeTerms {
  std::uint64_t ctr_units = 0;
  Signature counterparty_signature;

  bool operator==(const ExchangeTerms&) const = default;
};

struct Allocation {
  NodeId owner;
  std::uint32_t coins = 0;

  bool operator==(const Allocation&) const = default;
};

// Genesis content: initial coin allocations and the initial voter set. Each
// initial voter locks `deposit` of its allocated coins.
struct MintPayload {
  std::vector<Allocation> allocations;
  std::vector<NodeId> voters;
  std::uint32_t deposit = 0;

  bool operator==(const MintPayload&) const = default;
};

struct Transaction {
  Hash id;
  TxKind kind = TxKind::transfer;
  NodeId sender;
  NodeId receiver;
  std::vector<CoinId> coins;  // strictly ascending
  Tick tsp = 0;
  std::uint64_t ctr_snapshot = 0;
  std::optional<ExchangeTerms> exchange;  // iff kind == ctr_exchange
  std::optional<MintPayload> mint;        // iff kind == mint
  Signature sender_signature;

  // Digest of every field except `id` and the signatures.
  Hash compute_id() const;
  // The identity whose coins this transaction moves or locks.
  const NodeId& spender() const { return kind == TxKind::ctr_exchange ? receiver : sender; }

  bool operator==(const Transaction&) const = default;
};

struct Vote {
  Hash tx_id;
  NodeId voter;
  Hash prev_block_hash;
  std::uint8_t value = 0;
  Signature signature;

  bool operator==(const Vote&) const = default;
};

// Votes of one round, kept sorted by voter.
struct VoteBoxSet {
  std::vector<Vote> votes;

  const Vote* find(const NodeId& voter) const;
  std::size_t ones() const;
  std::size_t zeros() const;

  bool operator==(const VoteBoxSet&) const = default;
};

// The final roster of one round, bound to the previous block hash and signed
// by every listed voter. signatures[i] belongs to voters[i].
struct VoteRBox {
  Hash tx_id;
  std::vector<NodeId> voters;  // strictly ascending
  Hash prev_block_hash;
  std::vector<Signature> signatures;

  bool operator==(const VoteRBox&) const = default;
};

struct Block {
  std::uint64_t height = 0;
  Hash prev_hash;
  Transaction tx;
  VoteBoxSet vote_boxes;
  VoteRBox vote_rbox;
  Hash block_hash;

  Hash compute_hash() const;

  bool operator==(const Block&) const = default;
};

// Append-only, hash-linked sequence of blocks starting at a genesis block.
class Chain {
 public:
  explicit Chain(Block genesis);

  // Throws Error unless `block` extends the tip (height and prev-hash link).
  void append(Block block);

  const Block& genesis() const { return blocks_.front(); }
  const Block& tip() const { return blocks_.back(); }
  std::size_t size() const { return blocks_.size(); }
  const std::vector<Block>& blocks() const { return blocks_; }
  const Block& operator[](std::size_t i) const { return blocks_[i]; }

  bool operator==(const Chain&) const = default;

 private:
  std::vector<Block> blocks_;
};

// Messages covered by signatures. Each starts with a distinct domain tag.
Bytes tx_signing_message(const Hash& tx_id);
Bytes exchange_signing_message(const Hash& tx_id);
Bytes vote_signing_message(const Hash& tx_id, const NodeId& voter, const Hash& prev, std::uint8_t value);
Bytes roster_signing_message(const Hash& tx_id, const std::vector<NodeId>& voters, const Hash& prev);

// Construction helpers. Each fills `id` and the signatures.
Transaction make_transfer(const KeyPair& sender, const NodeId& receiver, std::vector<CoinId> coins, Tick tsp,
                          std::uint64_t ctr_snapshot);
Transaction make_register(const KeyPair& sender, std::vector<CoinId> deposit_coins, Tick tsp,
                          std::uint64_t ctr_snapshot);
Transaction make_leave(const KeyPair& sender, Tick tsp, std::uint64_t ctr_snapshot);
Transaction make_ctr_exchange(const KeyPair& sender, const KeyPair& counterparty, std::vector<CoinId> coins,
                              std::uint64_t ctr_units, Tick tsp, std::uint64_t ctr_snapshot);
// Recomputes the id and signs it. Counterparty signature, if any, must be redone.
void seal(Transaction& tx, const KeyPair& sender);

Block make_genesis(MintPayload payload);
// Coins minted by a genesis block, in allocation order.
std::vector<CoinId> minted_coins(const Block& genesis);

Vote make_vote(const KeyPair& voter, const Hash& tx_id, const Hash& prev, std::uint8_t value);
Signature sign_roster(const KeyPair& voter, const Hash& tx_id, const std::vector<NodeId>& voters, const Hash& prev);

}  // namespace rdv
