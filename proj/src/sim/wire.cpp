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

#include "sim/wire.hpp"

#include "core/serialize.hpp"

namespace rdv::sim {

const char* to_string(WireKind kind) {
  switch (kind) {
    case WireKind::tx_broadcast:
      return "TxBroadcast";
    case WireKind::vote_broadcast:
      return "VoteBroadcast";
    case WireKind::vote_rbox_signature:
      return "VoteRBoxSignature";
    case WireKind::register_announce:
      return "RegisterAnnounce";
    case WireKind::leave_announce:
      return "LeaveAnnounce";
  }
  return "unknown";
}

WireKind announce_kind(TxKind kind) {
  switch (kind) {
    case TxKind::reg:
      return WireKind::register_announce;
    case TxKind::leave:
      return WireKind::leave_announce;
    default:
      return WireKind::tx_broadcast;
  }
}

Bytes encode_envelope(const Envelope& env) {
  Writer w;
  w.u8(static_cast<std::uint8_t>(env.kind));
  w.i64(env.broadcast_at);
  if (const auto* tx = std::get_if<Transaction>(&env.payload)) {
    encode(w, *tx);
  } else if (const auto* vote = std::get_if<Vote>(&env.payload)) {
    encode(w, *vote);
  } else {
    const auto& s = std::get<RosterSignature>(env.payload);
    w.raw(s.tx_id.bytes);
    w.count(s.voters.size());
    for (const auto& v : s.voters) w.raw(v.bytes);
    w.raw(s.prev_block_hash.bytes);
    w.raw(s.signer.bytes);
    w.raw(s.signature.bytes);
  }
  return std::move(w).take();
}

Envelope decode_envelope(ByteView bytes) {
  Reader r(bytes);
  Envelope env;
  const std::uint8_t kind = r.u8();
  if (kind > static_cast<std::uint8_t>(WireKind::leave_announce)) throw DecodeError("unknown wire kind");
  env.kind = static_cast<WireKind>(kind);
  env.broadcast_at = r.i64();
  switch (env.kind) {
    case WireKind::tx_broadcast:
    case WireKind::register_announce:
    case WireKind::leave_announce: {
      Transaction tx = decode_transaction(r);
      if (announce_kind(tx.kind) != env.kind) throw DecodeError("wire kind does not match transaction kind");
      env.payload = std::move(tx);
      break;
    }
    case WireKind::vote_broadcast:
      env.payload = decode_vote(r);
      break;
    case WireKind::vote_rbox_signature: {
      RosterSignature s;
      s.tx_id = Hash{r.raw<kHashSize>()};
      const std::uint32_t n = r.count(kNodeIdSize);
      for (std::uint32_t i = 0; i < n; ++i) s.voters.push_back(NodeId{r.raw<kNodeIdSize>()});
      s.prev_block_hash = Hash{r.raw<kHashSize>()};
      s.signer = NodeId{r.raw<kNodeIdSize>()};
      s.signature = Signature{r.raw<kSignatureSize>()};
      env.payload = std::move(s);
      break;
    }
  }
  r.expect_done();
  return env;
}

}  // namespace rdv::sim
