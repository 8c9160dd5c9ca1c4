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
#include <map>
#include <optional>
#include <vector>

#include "core/types.hpp"

namespace rdv::priority {

struct ClockParams {
  Tick m = 0;      // bound on information propagation delay
  Tick slack = 0;  // tolerated clock disagreement
};

// Priority Point: waiting time plus the sender's CTR balance.
std::int64_t priority_point(const Transaction& tx, Tick now, std::uint64_t sender_ctr);

// A transaction claiming to be older than the propagation bound, or dated in
// the future beyond the slack, is implausible. `now` is the time the
// transaction was first broadcast as observed by the network.
bool timestamp_plausible(const Transaction& tx, Tick now, const ClockParams& clock);

using CtrLookup = std::function<std::uint64_t(const NodeId&)>;

class ReplayError : public Error {
 public:
  using Error::Error;
};

struct Row {
  Transaction tx;
  std::int64_t priority = 0;
  Tick announced_at = 0;  // network broadcast time of the transaction
};

// Strict ordering used by the table: priority descending, then older tsp,
// then smaller id.
bool ranks_before(const Row& a, const Row& b);

// The txBox: pending transactions ordered by Priority Point.
class PriorityTable {
 public:
  // Inserts and re-sorts every row with priorities recomputed at `now`.
  // Throws ReplayError if the id is already present.
  void insert_and_sort(Transaction tx, Tick now, const CtrLookup& ctr, Tick announced_at = 0);
  void resort(Tick now, const CtrLookup& ctr);

  // Highest-ranked row, or nullptr when the table is empty.
  const Row* head() const { return rows_.empty() ? nullptr : &rows_.front(); }
  bool erase(const Hash& id);
  bool contains(const Hash& id) const;
  const Row* find(const Hash& id) const;

  const std::vector<Row>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

 private:
  std::vector<Row> rows_;
};

// Eq. (2) predicate: two distinct transactions referencing the same coin from
// the same spending address.
bool same_coin_same_address(const Transaction& a, const Transaction& b);

// Confirmed coin history needed for double-spend detection: which coins have
// ever changed hands on chain and who holds each one now.
class ConfirmedCoins {
 public:
  static ConfirmedCoins from_chain(const Chain& chain);
  void apply(const Block& block);

  std::optional<NodeId> owner(const CoinId& coin) const;
  bool ever_transferred(const CoinId& coin) const;
  // Spenders that have moved `coin` away at some point.
  bool spent_by(const CoinId& coin, const NodeId& spender) const;

 private:
  struct Entry {
    NodeId owner;
    bool transferred = false;
    std::vector<NodeId> past_spenders;
  };
  std::map<CoinId, Entry> coins_;
};

// True iff some coin of `tx` is (a) referenced with the same spender by
// another pending transaction, or (b) has already changed hands on chain
// and `tx`'s spender is not its current owner.
bool is_double_spent(const Transaction& tx, const ConfirmedCoins& confirmed, const PriorityTable& pending);
bool is_double_spent(const Transaction& tx, const Chain& confirmed, const PriorityTable& pending);

}  // namespace rdv::priority
