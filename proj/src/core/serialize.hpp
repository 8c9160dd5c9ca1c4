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

#include <vector>

#include "core/bytes.hpp"
#include "core/types.hpp"

// Canonical binary encoding. Fields are written in declaration order,
// integers big-endian fixed width, lists as a u32 count followed by the
// elements. Decoders reject anything that is not the canonical encoding of
// some value (unsorted sets, out-of-range enums, trailing bytes), so
// encode(decode(b)) == b whenever decode succeeds.

namespace rdv {

void encode(Writer& w, const CoinId& coin);
void encode(Writer& w, const MintPayload& mint);
void encode_tx_body(Writer& w, const Transaction& tx);
void encode(Writer& w, const Transaction& tx);
void encode(Writer& w, const Vote& vote);
void encode(Writer& w, const VoteBoxSet& set);
void encode(Writer& w, const VoteRBox& rbox);
void encode_block_body(Writer& w, const Block& block);
void encode(Writer& w, const Block& block);

CoinId decode_coin(Reader& r);
MintPayload decode_mint(Reader& r);
Transaction decode_transaction(Reader& r);
Vote decode_vote(Reader& r);
VoteBoxSet decode_vote_box_set(Reader& r);
VoteRBox decode_vote_rbox(Reader& r);
Block decode_block(Reader& r);

template <class T>
Bytes serialize(const T& value) {
  Writer w;
  encode(w, value);
  return std::move(w).take();
}

template <class T>
T deserialize(ByteView bytes);

// On-disk chain dump: "RDVCHAIN", u32 format version, then one u32
// length-prefixed record per block in height order.
inline constexpr std::uint32_t kChainDumpVersion = 1;
Bytes encode_chain_dump(const std::vector<Block>& blocks);
std::vector<Block> decode_chain_dump(ByteView bytes);

}  // namespace rdv
