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

#include <array>
#include <compare>
#include <cstdint>
#include <mutex>
#include <set>
#include <string>

#include "core/bytes.hpp"

namespace rdv {

inline constexpr std::size_t kHashSize = 32;
inline constexpr std::size_t kNodeIdSize = 32;
inline constexpr std::size_t kSignatureSize = 64;

// SHA-256 digest over a canonical encoding.
struct Hash {
  std::array<std::uint8_t, kHashSize> bytes{};

  bool is_zero() const;
  std::string hex() const { return to_hex(bytes); }
  static Hash from_hex(std::string_view hex);

  auto operator<=>(const Hash&) const = default;
};

// A node's Ed25519 public key; also the coin address.
struct NodeId {
  std::array<std::uint8_t, kNodeIdSize> bytes{};

  std::string hex() const { return to_hex(bytes); }
  std::string short_hex() const { return hex().substr(0, 8); }
  static NodeId from_hex(std::string_view hex);

  auto operator<=>(const NodeId&) const = default;
};

struct Signature {
  std::array<std::uint8_t, kSignatureSize> bytes{};

  std::string hex() const { return to_hex(bytes); }
  auto operator<=>(const Signature&) const = default;
};

Hash sha256(ByteView data);

// Ed25519 key pair. Keys are derived deterministically from (seed, index) so
// that every run of a scenario sees the same identities.
class KeyPair {
 public:
  static KeyPair derive(std::uint64_t seed, std::uint64_t index);

  const NodeId& id() const { return id_; }
  Signature sign(ByteView message) const;

 private:
  KeyPair() = default;

  NodeId id_;
  std::array<std::uint8_t, 64> secret_{};
};

bool verify_signature(const NodeId& signer, ByteView message, const Signature& sig);

// Signature verification with a memo of successful checks. Verification is a
// pure function of (signer, message, signature), so a hit returns the same
// answer a fresh check would. Thread-safe.
class Verifier {
 public:
  explicit Verifier(bool memoize = true) : memoize_(memoize) {}
  Verifier(const Verifier&) = delete;
  Verifier& operator=(const Verifier&) = delete;

  bool verify(const NodeId& signer, ByteView message, const Signature& sig) const;
  std::uint64_t full_checks() const;

 private:
  bool memoize_;
  mutable std::mutex mu_;
  mutable std::set<Hash> good_;
  mutable std::uint64_t full_checks_ = 0;
};

}  // namespace rdv
