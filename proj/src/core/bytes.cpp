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

#include "core/bytes.hpp"

#include <limits>

namespace rdv {

void Writer::count(std::size_t n) {
  if (n > std::numeric_limits<std::uint32_t>::max()) throw Error("list too long to encode");
  u32(static_cast<std::uint32_t>(n));
}

void Reader::need(std::size_t n) const {
  if (remaining() < n) {
    throw DecodeError("truncated input at offset " + std::to_string(pos_) + " (need " + std::to_string(n) +
                      " bytes, have " + std::to_string(remaining()) + ")");
  }
}

std::uint8_t Reader::u8() {
  need(1);
  return data_[pos_++];
}

std::uint32_t Reader::u32() {
  need(4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v = (v << 8) | data_[pos_++];
  return v;
}

std::uint64_t Reader::u64() {
  need(8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | data_[pos_++];
  return v;
}

ByteView Reader::take(std::size_t n) {
  need(n);
  ByteView out = data_.subspan(pos_, n);
  pos_ += n;
  return out;
}

std::uint32_t Reader::count(std::size_t min_element_size) {
  const std::size_t at = pos_;
  const std::uint32_t n = u32();
  if (min_element_size > 0 && n > remaining() / min_element_size) {
    throw DecodeError("list length " + std::to_string(n) + " at offset " + std::to_string(at) +
                      " exceeds remaining input");
  }
  return n;
}

void Reader::expect_done() const {
  if (!done()) throw DecodeError(std::to_string(remaining()) + " trailing bytes at offset " + std::to_string(pos_));
}

std::string to_hex(ByteView bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  if (hex.size() % 2 != 0) throw DecodeError("odd-length hex string");
  Bytes out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    const int hi = nibble(hex[i]);
    const int lo = nibble(hex[i + 1]);
    if (hi < 0 || lo < 0) throw DecodeError("invalid hex digit");
    out.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
  }
  return out;
}

}  // namespace rdv
