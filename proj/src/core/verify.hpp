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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/types.hpp"

namespace rdv {

// First failed check of a structural verification. `check` is a stable
// identifier (e.g. "prev-hash", "vote-rbox-signature") that callers use to
// classify tamper modes.
struct Violation {
  std::string check;
  std::string detail;
};

// What the VoteRBox voter list of a block is checked against.
struct RosterExpectation {
  enum class Mode {
    exact,   // voters must equal `voters`
    subset,  // voters must be drawn from `voters`, each registered before tx.tsp
    any,
  };
  Mode mode = Mode::any;
  std::vector<NodeId> voters;           // sorted
  std::vector<Tick> registered_at;      // parallel to voters; subset mode only
};

using RosterHistory = std::function<RosterExpectation(std::uint64_t height)>;

std::optional<Violation> verify_transaction_structure(const Transaction& tx);
std::optional<Violation> verify_transaction_signatures(const Transaction& tx, const Verifier& verifier);

// Checks, in order: height, prev-hash link, block hash, transaction id,
// structure and signatures, VoteRBox binding and ordering, vote set against
// the VoteRBox, majority of ones, roster, vote signatures, VoteRBox
// signatures. Returns the first failure.
std::optional<Violation> verify_block(const Block& block, const Block& prev, const RosterExpectation& roster,
                                      const Verifier& verifier);

std::optional<Violation> verify_genesis(const Block& genesis, const std::optional<Hash>& expected_hash);

struct ChainViolation {
  std::uint64_t height = 0;
  Violation violation;
};

std::optional<ChainViolation> verify_chain(std::span<const Block> blocks, const RosterHistory& rosters,
                                           const Verifier& verifier,
                                           const std::optional<Hash>& expected_genesis = std::nullopt);

// Registered voter set per height rebuilt from the genesis voters and the
// on-chain register/leave transactions. Voters suspended for inactivity or
// demoted by penalties are not visible on chain, so this is a subset check.
RosterHistory registered_roster_history(std::span<const Block> blocks);

}  // namespace rdv
