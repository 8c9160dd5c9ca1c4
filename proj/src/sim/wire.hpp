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
#include <variant>
#include <vector>

#include "core/types.hpp"

// Messages exchanged on the simulated network. Every message travels as its
// canonical encoding inside an envelope stamped with the broadcast tick.

namespace rdv::sim {

enum class WireKind : std::uint8_t {
  tx_broadcast = 0,
  vote_broadcast = 1,
  vote_rbox_signature = 2,
  register_announce = 3,
  leave_announce = 4,
};

const char* to_string(WireKind kind);

struct RosterSignature {
  Hash tx_id;
  std::vector<NodeId> voters;
  Hash prev_block_hash;
  NodeId signer;
  Signature signature;

  bool operator==(const RosterSignature&) const = default;
};

struct Envelope {
  WireKind kind = WireKind::tx_broadcast;
  Tick broadcast_at = 0;
  std::variant<Transaction, Vote, RosterSignature> payload;

  bool operator==(const Envelope&) const = default;
};

Bytes encode_envelope(const Envelope& env);
Envelope decode_envelope(ByteView bytes);

// Wire kind carrying a transaction of the given kind.
WireKind announce_kind(TxKind kind);

}  // namespace rdv::sim
