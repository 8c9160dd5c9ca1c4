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

#include "core/crypto.hpp"

#include <sodium.h>

#include <algorithm>

namespace rdv {

namespace {

void ensure_sodium() {
  static const bool ready = [] { return sodium_init() >= 0; }();
  if (!ready) throw Error("libsodium initialisation failed");
}

template <std::size_t N>
std::array<std::uint8_t, N> fixed_from_hex(std::string_view hex, const char* what) {
  const Bytes raw = from_hex(hex);
  if (raw.size() != N) throw DecodeError(std::string(what) + ": expected " + std::to_string(N * 2) + " hex digits");
  std::array<std::uint8_t, N> out{};
  std::copy(raw.begin(), raw.end(), out.begin());
  return out;
}

}  // namespace

bool Hash::is_zero() const {
  return std::all_of(bytes.begin(), bytes.end(), [](std::uint8_t b) { return b == 0; });
}

Hash Hash::from_hex(std::string_view hex) { return Hash{fixed_from_hex<kHashSize>(hex, "hash")}; }

NodeId NodeId::from_hex(std::string_view hex) { return NodeId{fixed_from_hex<kNodeIdSize>(hex, "node id")}; }

Hash sha256(ByteView data) {
  ensure_sodium();
  Hash h;
  crypto_hash_sha256(h.bytes.data(), data.data(), data.size());
  return h;
}

KeyPair KeyPair::derive(std::uint64_t seed, std::uint64_t index) {
  ensure_sodium();
  Writer w;
  w.tag("rdv/key");
  w.u64(seed);
  w.u64(index);
  const Hash key_seed = sha256(w.bytes());
  KeyPair kp;
  crypto_sign_seed_keypair(kp.id_.bytes.data(), kp.secret_.data(), key_seed.bytes.data());
  return kp;
}

Signature KeyPair::sign(ByteView message) const {
  ensure_sodium();
  Signature sig;
  crypto_sign_detached(sig.bytes.data(), nullptr, message.data(), message.size(), secret_.data());
  return sig;
}

bool verify_signature(const NodeId& signer, ByteView message, const Signature& sig) {
  ensure_sodium();
  return crypto_sign_verify_detached(sig.bytes.data(), message.data(), message.size(), signer.bytes.data()) == 0;
}

bool Verifier::verify(const NodeId& signer, ByteView message, const Signature& sig) const {
  if (!memoize_) {
    std::lock_guard lock(mu_);
    ++full_checks_;
    return verify_signature(signer, message, sig);
  }
  Writer w;
  w.raw(signer.bytes);
  w.raw(sig.bytes);
  w.raw(message);
  const Hash key = sha256(w.bytes());
  {
    std::lock_guard lock(mu_);
    if (good_.contains(key)) return true;
  }
  const bool ok = verify_signature(signer, message, sig);
  std::lock_guard lock(mu_);
  ++full_checks_;
  if (ok) good_.insert(key);
  return ok;
}

std::uint64_t Verifier::full_checks() const {
  std::lock_guard lock(mu_);
  return full_checks_;
}

}  // namespace rdv
