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

// Independent reference implementations used by the unit and acceptance
// tests. None of these call into the code they check.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"

#include "core/types.hpp"
#include "ledger/state.hpp"
#include "sim/simulation.hpp"

namespace oracle {

using rdv::Hash;
using rdv::NodeId;
using rdv::Tick;
using rdv::Transaction;

// Full re-sort by (now - tsp + ctr desc, tsp asc, id asc).
inline std::vector<Hash> sorted_ids(const std::vector<Transaction>& txs, Tick now,
                                    const std::map<NodeId, std::uint64_t>& ctr) {
  std::vector<std::tuple<std::int64_t, Tick, Hash>> keys;
  for (const auto& tx : txs) {
    auto it = ctr.find(tx.sender);
    const std::int64_t c = it == ctr.end() ? 0 : static_cast<std::int64_t>(it->second);
    keys.emplace_back(-((now - tx.tsp) + c), tx.tsp, tx.id);
  }
  std::sort(keys.begin(), keys.end());
  std::vector<Hash> out;
  for (const auto& k : keys) out.push_back(std::get<2>(k));
  return out;
}

// Unsigned transfer with a fresh id; enough for ordering checks.
inline Transaction synthetic_tx(std::mt19937_64& rng, const std::vector<NodeId>& senders, Tick tsp) {
  Transaction tx;
  tx.kind = rdv::TxKind::transfer;
  tx.sender = senders[rng() % senders.size()];
  tx.receiver = senders[rng() % senders.size()];
  rdv::CoinId c;
  for (auto& b : c.origin.bytes) b = static_cast<std::uint8_t>(rng());
  c.index = static_cast<std::uint32_t>(rng() % 64);
  tx.coins = {c};
  tx.tsp = tsp;
  tx.id = tx.compute_id();
  return tx;
}

// Per-identity balances as plain counts.
struct Account {
  std::int64_t spendable = 0;
  std::int64_t locked = 0;
  std::int64_t blocked = 0;
  std::int64_t debt = 0;
  std::int64_t ctr = 0;
  std::int64_t penalties = 0;
  bool voter = false;
};

struct FoldResult {
  std::map<NodeId, Account> accounts;
  std::vector<std::string> problems;  // per-round checks that failed
};

// Replays the observer's round history from genesis with counts only: coins
// move as amounts, a penalty shifts p from deposit to blocked (shortfall is
// debt), incoming coins repay debt first, a voter whose penalties reach d
// gets its remaining deposit back and stops voting.
inline FoldResult fold(const rdv::sim::RunResult& r) {
  const auto& params = r.config.params;
  const std::int64_t d = params.deposit;
  const std::int64_t p = params.penalty;
  FoldResult out;
  auto& acc = out.accounts;
  const rdv::Chain& chain = r.chains[r.observer];
  const auto& mint = *chain.genesis().tx.mint;
  for (const auto& a : mint.allocations) acc[a.owner].spendable += a.coins;
  for (const auto& v : mint.voters) {
    acc[v].spendable -= mint.deposit;
    acc[v].locked += mint.deposit;
    acc[v].voter = true;
  }
  std::map<Hash, const rdv::Block*> by_tx;
  for (const auto& b : chain.blocks()) by_tx[b.tx.id] = &b;

  auto receive = [&](const NodeId& n, std::int64_t k) {
    Account& a = acc[n];
    for (std::int64_t i = 0; i < k; ++i) {
      if (a.debt > 0) {
        --a.debt;
        (a.voter ? a.locked : a.blocked) += 1;
      } else {
        ++a.spendable;
      }
    }
  };

  for (const auto& o : r.outcomes) {
    using Kind = rdv::ledger::RoundOutcome::Kind;
    // Who should lose and win, from the votes alone.
    std::vector<NodeId> losers;
    std::vector<NodeId> winners;
    if (o.kind != Kind::aborted) {
      const std::uint8_t winning = o.kind == Kind::accepted ? 1 : 0;
      for (const auto& v : o.votes.votes) (v.value == winning ? winners : losers).push_back(v.voter);
    }
    for (const auto& e : o.equivocators) losers.push_back(e);
    std::sort(losers.begin(), losers.end());
    std::sort(winners.begin(), winners.end());
    auto penalized = o.penalized;
    auto rewarded = o.rewarded;
    std::sort(penalized.begin(), penalized.end());
    std::sort(rewarded.begin(), rewarded.end());
    if (penalized != losers) out.problems.push_back("round " + std::to_string(o.round) + ": penalized set differs");
    if (rewarded != winners) out.problems.push_back("round " + std::to_string(o.round) + ": rewarded set differs");
    const std::size_t ones = o.votes.ones();
    const std::size_t zeros = o.votes.zeros();
    if (o.kind == Kind::accepted && !(ones > zeros)) out.problems.push_back("accepted without majority");
    if (o.kind == Kind::rejected && ones > zeros) out.problems.push_back("rejected with majority");

    if (o.kind == Kind::accepted) {
      auto it = by_tx.find(o.tx_id);
      if (it == by_tx.end()) {
        out.problems.push_back("accepted round without block");
        continue;
      }
      const Transaction& tx = it->second->tx;
      const auto k = static_cast<std::int64_t>(tx.coins.size());
      switch (tx.kind) {
        case rdv::TxKind::transfer:
          acc[tx.sender].spendable -= k;
          receive(tx.receiver, k);
          break;
        case rdv::TxKind::ctr_exchange:
          acc[tx.sender].ctr -= static_cast<std::int64_t>(tx.exchange->ctr_units);
          acc[tx.receiver].ctr += static_cast<std::int64_t>(tx.exchange->ctr_units);
          acc[tx.receiver].spendable -= k;
          receive(tx.sender, k);
          break;
        case rdv::TxKind::reg: {
          Account& a = acc[tx.sender];
          a.voter = true;
          a.penalties = 0;
          if (k == 0) {
            a.debt += d;
          } else {
            a.spendable -= k;
            a.locked += k;
          }
          break;
        }
        case rdv::TxKind::leave: {
          Account& a = acc[tx.sender];
          a.spendable += a.locked;
          a.locked = 0;
          a.voter = false;
          break;
        }
        case rdv::TxKind::mint:
          out.problems.push_back("mint after genesis");
          break;
      }
    }
    for (const auto& n : o.penalized) {
      Account& a = acc[n];
      const std::int64_t take = std::min(p, a.locked);
      a.locked -= take;
      a.blocked += take;
      a.debt += p - take;
      a.penalties += p;
      if (a.voter && a.penalties >= d) {
        a.spendable += a.locked;
        a.locked = 0;
        a.voter = false;
      }
    }
    for (const auto& n : o.rewarded) acc[n].ctr += 1;
  }
  return out;
}

// Differences between the fold and the simulator's final ledger.
inline std::vector<std::string> compare_fold(const rdv::sim::RunResult& r, const FoldResult& f) {
  std::vector<std::string> diffs = f.problems;
  for (const auto& [node, a] : f.accounts) {
    const auto b = r.ledger.balance_of(node);
    const std::string who = node.short_hex();
    if (static_cast<std::int64_t>(b.spendable) != a.spendable) {
      diffs.push_back(who + " spendable " + std::to_string(b.spendable) + " vs " + std::to_string(a.spendable));
    }
    if (b.deposited != a.locked - a.debt) {
      diffs.push_back(who + " deposited " + std::to_string(b.deposited) + " vs " + std::to_string(a.locked - a.debt));
    }
    if (static_cast<std::int64_t>(b.blocked) != a.blocked) {
      diffs.push_back(who + " blocked " + std::to_string(b.blocked) + " vs " + std::to_string(a.blocked));
    }
    if (static_cast<std::int64_t>(b.ctr) != a.ctr) {
      diffs.push_back(who + " ctr " + std::to_string(b.ctr) + " vs " + std::to_string(a.ctr));
    }
  }
  std::int64_t total = 0;
  for (const auto& [node, a] : f.accounts) total += a.spendable + a.locked + a.blocked;
  if (total != static_cast<std::int64_t>(r.ledger.minted)) diffs.push_back("fold does not conserve coins");
  return diffs;
}

// Δ-removals and reinstatements as seen in the observer's event log.
struct LogScan {
  std::uint64_t delta_removals = 0;
  std::uint64_t reinstatements = 0;
  std::vector<std::string> boundary_errors;
};

inline LogScan scan_log(const rdv::sim::RunResult& r) {
  LogScan s;
  const auto delta = r.config.params.delta;
  const auto pi = r.config.params.pi;
  std::map<std::uint64_t, Tick> round_start;
  std::map<std::string, Tick> suspended_until;
  for (const auto& line : r.events) {
    const auto e = nlohmann::json::parse(line);
    if (!e.contains("node") || e["node"].get<std::size_t>() != r.observer) continue;
    const std::string ev = e["ev"];
    if (ev == "round-start") {
      round_start[e["round"].get<std::uint64_t>()] = e["t"].get<Tick>();
    } else if (ev == "delta-removal") {
      ++s.delta_removals;
      const Tick at = e["at"];
      const Tick until = e["until"];
      const Tick start = round_start.at(e["round"].get<std::uint64_t>());
      if (at != start + delta) s.boundary_errors.push_back("removal at " + std::to_string(at) + ", window closed " +
                                                           std::to_string(start + delta));
      if (until != at + pi) s.boundary_errors.push_back("suspended until " + std::to_string(until));
      suspended_until[e["voter"]] = until;
    } else if (ev == "reinstate") {
      ++s.reinstatements;
      auto it = suspended_until.find(e["voter"]);
      if (it == suspended_until.end()) {
        s.boundary_errors.push_back("reinstated a voter that was never removed");
      } else if (e["t"].get<Tick>() != it->second) {
        s.boundary_errors.push_back("reinstated at " + std::to_string(e["t"].get<Tick>()) + " instead of " +
                                    std::to_string(it->second));
      }
    }
  }
  return s;
}

}  // namespace oracle
