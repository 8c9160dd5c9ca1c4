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

#include "core/serialize.hpp"

#include <algorithm>
#include <string_view>

namespace rdv {

namespace {

constexpr std::string_view kDumpMagic = "RDVCHAIN";
constexpr std::size_t kCoinSize = kHashSize + 4;
constexpr std::size_t kVoteSize = kHashSize * 2 + kNodeIdSize + 1 + kSignatureSize;

template <class T, class Key>
void require_strictly_ascending(const std::vector<T>& items, Key key, const char* what) {
  for (std::size_t i = 1; i < items.size(); ++i) {
    if (!(key(items[i - 1]) < key(items[i]))) {
      throw DecodeError(std::string(what) + " not in strictly ascending order at element " + std::to_string(i));
    }
  }
}

NodeId read_node(Reader& r) { return NodeId{r.raw<kNodeIdSize>()}; }
Hash read_hash(Reader& r) { return Hash{r.raw<kHashSize>()}; }
Signature read_sig(Reader& r) { return Signature{r.raw<kSignatureSize>()}; }

}  // namespace

void encode(Writer& w, const CoinId& coin) {
  w.raw(coin.origin.bytes);
  w.u32(coin.index);
}

void encode(Writer& w, const MintPayload& mint) {
  w.count(mint.allocations.size());
  for (const auto& a : mint.allocations) {
    w.raw(a.owner.bytes);
    w.u32(a.coins);
  }
  w.count(mint.voters.size());
  for (const auto& v : mint.voters) w.raw(v.bytes);
  w.u32(mint.deposit);
}

void encode_tx_body(Writer& w, const Transaction& tx) {
  w.u8(static_cast<std::uint8_t>(tx.kind));
  w.raw(tx.sender.bytes);
  w.raw(tx.receiver.bytes);
  w.count(tx.coins.size());
  for (const auto& c : tx.coins) encode(w, c);
  w.i64(tx.tsp);
  w.u64(tx.ctr_snapshot);
  if (tx.kind == TxKind::ctr_exchange) w.u64(tx.exchange ? tx.exchange->ctr_units : 0);
  if (tx.kind == TxKind::mint) encode(w, tx.mint ? *tx.mint : MintPayload{});
}

void encode(Writer& w, const Transaction& tx) {
  w.raw(tx.id.bytes);
  encode_tx_body(w, tx);
  w.raw(tx.sender_signature.bytes);
  if (tx.kind == TxKind::ctr_exchange) w.raw(tx.exchange ? tx.exchange->counterparty_signature.bytes : Signature{}.bytes);
}

void encode(Writer& w, const Vote& vote) {
  w.raw(vote.tx_id.bytes);
  w.raw(vote.voter.bytes);
  w.raw(vote.prev_block_hash.bytes);
  w.u8(vote.value);
  w.raw(vote.signature.bytes);
}

void encode(Writer& w, const VoteBoxSet& set) {
  w.count(set.votes.size());
  for (const auto& v : set.votes) encode(w, v);
}

void encode(Writer& w, const VoteRBox& rbox) {
  w.raw(rbox.tx_id.bytes);
  w.count(rbox.voters.size());
  for (const auto& v : rbox.voters) w.raw(v.bytes);
  w.raw(rbox.prev_block_hash.bytes);
  w.count(rbox.signatures.size());
  for (const auto& s : rbox.signatures) w.raw(s.bytes);
}

void encode_block_body(Writer& w, const Block& block) {
  w.u64(block.height);
  w.raw(block.prev_hash.bytes);
  encode(w, block.tx);
  encode(w, block.vote_boxes);
  encode(w, block.vote_rbox);
}

void encode(Writer& w, const Block& block) {
  encode_block_body(w, block);
  w.raw(block.block_hash.bytes);
}

CoinId decode_coin(Reader& r) {
  CoinId c;
  c.origin = read_hash(r);
  c.index = r.u32();
  return c;
}

MintPayload decode_mint(Reader& r) {
  MintPayload m;
  const auto na = r.count(kNodeIdSize + 4);
  m.allocations.reserve(na);
  for (std::uint32_t i = 0; i < na; ++i) {
    Allocation a;
    a.owner = read_node(r);
    a.coins = r.u32();
    m.allocations.push_back(a);
  }
  const auto nv = r.count(kNodeIdSize);
  m.voters.reserve(nv);
  for (std::uint32_t i = 0; i < nv; ++i) m.voters.push_back(read_node(r));
  require_strictly_ascending(m.voters, [](const NodeId& n) { return n; }, "genesis voters");
  m.deposit = r.u32();
  return m;
}

Transaction decode_transaction(Reader& r) {
  Transaction tx;
  tx.id = read_hash(r);
  const auto kind = r.u8();
  if (kind > static_cast<std::uint8_t>(TxKind::leave)) {
    throw DecodeError("unknown transaction kind " + std::to_string(kind));
  }
  tx.kind = static_cast<TxKind>(kind);
  tx.sender = read_node(r);
  tx.receiver = read_node(r);
  const auto nc = r.count(kCoinSize);
  tx.coins.reserve(nc);
  for (std::uint32_t i = 0; i < nc; ++i) tx.coins.push_back(decode_coin(r));
  require_strictly_ascending(tx.coins, [](const CoinId& c) { return c; }, "transaction coins");
  tx.tsp = r.i64();
  tx.ctr_snapshot = r.u64();
  if (tx.kind == TxKind::ctr_exchange) tx.exchange = ExchangeTerms{r.u64(), {}};
  if (tx.kind == TxKind::mint) tx.mint = decode_mint(r);
  tx.sender_signature = read_sig(r);
  if (tx.kind == TxKind::ctr_exchange) tx.exchange->counterparty_signature = read_sig(r);
  return tx;
}

Vote decode_vote(Reader& r) {
  Vote v;
  v.tx_id = read_hash(r);
  v.voter = read_node(r);
  v.prev_block_hash = read_hash(r);
  v.value = r.u8();
  if (v.value > 1) throw DecodeError("vote value must be 0 or 1, got " + std::to_string(v.value));
  v.signature = read_sig(r);
  return v;
}

VoteBoxSet decode_vote_box_set(Reader& r) {
  VoteBoxSet set;
  const auto n = r.count(kVoteSize);
  set.votes.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) set.votes.push_back(decode_vote(r));
  require_strictly_ascending(set.votes, [](const Vote& v) { return v.voter; }, "vote boxes");
  return set;
}

VoteRBox decode_vote_rbox(Reader& r) {
  VoteRBox rb;
  rb.tx_id = read_hash(r);
  const auto nv = r.count(kNodeIdSize);
  rb.voters.reserve(nv);
  for (std::uint32_t i = 0; i < nv; ++i) rb.voters.push_back(read_node(r));
  require_strictly_ascending(rb.voters, [](const NodeId& n) { return n; }, "vote-rbox voters");
  rb.prev_block_hash = read_hash(r);
  const auto ns = r.count(kSignatureSize);
  rb.signatures.reserve(ns);
  for (std::uint32_t i = 0; i < ns; ++i) rb.signatures.push_back(read_sig(r));
  return rb;
}

Block decode_block(Reader& r) {
  Block b;
  b.height = r.u64();
  b.prev_hash = read_hash(r);
  b.tx = decode_transaction(r);
  b.vote_boxes = decode_vote_box_set(r);
  b.vote_rbox = decode_vote_rbox(r);
  b.block_hash = read_hash(r);
  return b;
}

template <>
CoinId deserialize<CoinId>(ByteView bytes) {
  Reader r(bytes);
  auto v = decode_coin(r);
  r.expect_done();
  return v;
}

template <>
Transaction deserialize<Transaction>(ByteView bytes) {
  Reader r(bytes);
  auto v = decode_transaction(r);
  r.expect_done();
  return v;
}

template <>
Vote deserialize<Vote>(ByteView bytes) {
  Reader r(bytes);
  auto v = decode_vote(r);
  r.expect_done();
  return v;
}

template <>
VoteBoxSet deserialize<VoteBoxSet>(ByteView bytes) {
  Reader r(bytes);
  auto v = decode_vote_box_set(r);
  r.expect_done();
  return v;
}

template <>
VoteRBox deserialize<VoteRBox>(ByteView bytes) {
  Reader r(bytes);
  auto v = decode_vote_rbox(r);
  r.expect_done();
  return v;
}

template <>
Block deserialize<Block>(ByteView bytes) {
  Reader r(bytes);
  auto v = decode_block(r);
  r.expect_done();
  return v;
}

Bytes encode_chain_dump(const std::vector<Block>& blocks) {
  Writer w;
  w.tag(kDumpMagic);
  w.u32(kChainDumpVersion);
  for (const auto& b : blocks) {
    const Bytes rec = serialize(b);
    w.count(rec.size());
    w.raw(rec);
  }
  return std::move(w).take();
}

std::vector<Block> decode_chain_dump(ByteView bytes) {
  Reader r(bytes);
  const ByteView magic = r.take(kDumpMagic.size());
  if (!std::equal(magic.begin(), magic.end(), kDumpMagic.begin())) throw DecodeError("not a chain dump (bad magic)");
  const auto version = r.u32();
  if (version != kChainDumpVersion) throw DecodeError("unsupported chain dump version " + std::to_string(version));
  std::vector<Block> blocks;
  while (!r.done()) {
    const std::size_t at = r.offset();
    const auto len = r.u32();
    const ByteView rec = r.take(len);
    try {
      blocks.push_back(deserialize<Block>(rec));
    } catch (const DecodeError& e) {
      throw DecodeError("record " + std::to_string(blocks.size()) + " at offset " + std::to_string(at) + ": " +
                        e.what());
    }
  }
  if (blocks.empty()) throw DecodeError("chain dump contains no blocks");
  return blocks;
}

}  // namespace rdv
