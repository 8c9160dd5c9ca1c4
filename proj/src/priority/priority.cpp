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

#include "priority/priority.hpp"

#include <algorithm>

namespace rdv::priority {

std::int64_t priority_point(const Transaction& tx, Tick now, std::uint64_t sender_ctr) {
  return (now - tx.tsp) + static_cast<std::int64_t>(sender_ctr);
}

bool timestamp_plausible(const Transaction& tx, Tick now, const ClockParams& clock) {
  return now - (clock.m + clock.slack) <= tx.tsp && tx.tsp <= now + clock.slack;
}

bool ranks_before(const Row& a, const Row& b) {
  if (a.priority != b.priority) return a.priority > b.priority;
  if (a.tx.tsp != b.tx.tsp) return a.tx.tsp < b.tx.tsp;
  return a.tx.id < b.tx.id;
}

void PriorityTable::insert_and_sort(Transaction tx, Tick now, const CtrLookup& ctr, Tick announced_at) {
  if (contains(tx.id)) throw ReplayError("transaction " + tx.id.hex().substr(0, 12) + " already queued");
  rows_.push_back(Row{std::move(tx), 0, announced_at});
  resort(now, ctr);
}

void PriorityTable::resort(Tick now, const CtrLookup& ctr) {
  for (auto& row : rows_) row.priority = priority_point(row.tx, now, ctr ? ctr(row.tx.sender) : 0);
  std::sort(rows_.begin(), rows_.end(), ranks_before);
}

bool PriorityTable::erase(const Hash& id) {
  auto it = std::find_if(rows_.begin(), rows_.end(), [&](const Row& r) { return r.tx.id == id; });
  if (it == rows_.end()) return false;
  rows_.erase(it);
  return true;
}

bool PriorityTable::contains(const Hash& id) const { return find(id) != nullptr; }

const Row* PriorityTable::find(const Hash& id) const {
  auto it = std::find_if(rows_.begin(), rows_.end(), [&](const Row& r) { return r.tx.id == id; });
  return it == rows_.end() ? nullptr : &*it;
}

bool same_coin_same_address(const Transaction& a, const Transaction& b) {
  if (a.id == b.id || a.spender() != b.spender()) return false;
  for (const auto& c : a.coins) {
    if (std::binary_search(b.coins.begin(), b.coins.end(), c)) return true;
  }
  return false;
}

ConfirmedCoins ConfirmedCoins::from_chain(const Chain& chain) {
  ConfirmedCoins out;
  for (const auto& b : chain.blocks()) out.apply(b);
  return out;
}

void ConfirmedCoins::apply(const Block& block) {
  const Transaction& tx = block.tx;
  switch (tx.kind) {
    case TxKind::mint: {
      const auto coins = minted_coins(block);
      std::size_t i = 0;
      for (const auto& a : tx.mint->allocations) {
        for (std::uint32_t k = 0; k < a.coins; ++k) coins_[coins[i++]].owner = a.owner;
      }
      break;
    }
    case TxKind::transfer:
    case TxKind::ctr_exchange: {
      const NodeId& from = tx.spender();
      const NodeId& to = tx.kind == TxKind::transfer ? tx.receiver : tx.sender;
      for (const auto& c : tx.coins) {
        auto& e = coins_[c];
        e.owner = to;
        e.transferred = true;
        e.past_spenders.push_back(from);
      }
      break;
    }
    case TxKind::reg:
    case TxKind::leave:
      break;
  }
}

std::optional<NodeId> ConfirmedCoins::owner(const CoinId& coin) const {
  auto it = coins_.find(coin);
  if (it == coins_.end()) return std::nullopt;
  return it->second.owner;
}

bool ConfirmedCoins::ever_transferred(const CoinId& coin) const {
  auto it = coins_.find(coin);
  return it != coins_.end() && it->second.transferred;
}

bool ConfirmedCoins::spent_by(const CoinId& coin, const NodeId& spender) const {
  auto it = coins_.find(coin);
  if (it == coins_.end()) return false;
  const auto& s = it->second.past_spenders;
  return std::find(s.begin(), s.end(), spender) != s.end();
}

bool is_double_spent(const Transaction& tx, const ConfirmedCoins& confirmed, const PriorityTable& pending) {
  for (const auto& row : pending.rows()) {
    if (same_coin_same_address(tx, row.tx)) return true;
  }
  const NodeId& spender = tx.spender();
  for (const auto& c : tx.coins) {
    if (confirmed.ever_transferred(c) && confirmed.owner(c) != spender) return true;
  }
  return false;
}

bool is_double_spent(const Transaction& tx, const Chain& confirmed, const PriorityTable& pending) {
  return is_double_spent(tx, ConfirmedCoins::from_chain(confirmed), pending);
}

}  // namespace rdv::priority
