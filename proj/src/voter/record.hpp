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

#include "core/types.hpp"
#include "priority/priority.hpp"

namespace rdv::voter {

enum class VoterStatus : std::uint8_t { active = 0, suspended = 1, left = 2 };

const char* to_string(VoterStatus status);

struct VoterRecord {
  NodeId node;
  Tick registered_at = 0;
  Tick last_participation = 0;
  std::optional<Tick> suspended_until;
  VoterStatus status = VoterStatus::active;
  bool bootstrap = false;  // registered with a negative initial deposit
  bool demoted = false;    // forced out after penalties consumed the deposit
  std::uint64_t debt = 0;  // collateral still owed
  std::uint64_t penalties = 0;
  std::vector<CoinId> locked;  // sorted

  // Collateral held minus collateral owed; negative during bootstrap.
  std::int64_t deposit() const { return static_cast<std::int64_t>(locked.size()) - static_cast<std::int64_t>(debt); }
  bool is_voter() const { return status != VoterStatus::left; }
  bool suspended_at(Tick now) const { return suspended_until.has_value() && *suspended_until > now; }

  bool operator==(const VoterRecord&) const = default;
};

struct ProtocolParams {
  Tick delta = 20;           // participation window
  Tick pi = 100;             // suspension length
  std::uint32_t deposit = 4;  // d, in coins
  std::uint32_t penalty = 1;  // p, in coins; 0 < p <= d
  priority::ClockParams clock{5, 0};
  bool allow_bootstrap_debt = false;

  // Throws Error naming the offending field.
  void validate() const;
};

}  // namespace rdv::voter
