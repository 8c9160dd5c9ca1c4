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

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

#include "ledger/ledger.hpp"
#include "voter/registration.hpp"

using namespace rdv;
using ledger::LedgerError;
using ledger::LedgerState;
using ledger::RoundOutcome;

namespace {

// A and B are voters with 10 coins each; C is ordinary with 10.
struct Books {
  KeyPair a = KeyPair::derive(41, 0);
  KeyPair b = KeyPair::derive(41, 1);
  KeyPair c = KeyPair::derive(41, 2);
  voter::ProtocolParams params;
  Block genesis;
  LedgerState state;
  Verifier verifier;

  Books() {
    params.deposit = 4;
    params.penalty = 1;
    genesis = make_genesis(MintPayload{{{a.id(), 10}, {b.id(), 10}, {c.id(), 10}}, {a.id(), b.id()}, 4});
    state = ledger::genesis_state(genesis, params);
  }

  Block block_of(Transaction tx) const {
    Block blk;
    blk.height = state.height + 1;
    blk.prev_hash = genesis.block_hash;
    blk.tx = std::move(tx);
    blk.block_hash = blk.compute_hash();
    return blk;
  }

  RoundOutcome accepted(const Block& blk, std::vector<NodeId> penalized = {}, std::vector<NodeId> rewarded = {}) const {
    RoundOutcome o;
    o.kind = RoundOutcome::Kind::accepted;
    o.tx_id = blk.tx.id;
    o.penalized = std::move(penalized);
    o.rewarded = std::move(rewarded);
    return o;
  }
};

}  // namespace

TEST_SUITE("ledger") {
  TEST_CASE("genesis allocates coins and locks voter deposits") {
    Books k;
    CHECK(k.state.minted == 30);
    CHECK(k.state.balance_of(k.a.id()) == ledger::Balance{6, 4, 0, 0});
    CHECK(k.state.balance_of(k.c.id()) == ledger::Balance{10, 0, 0, 0});
    CHECK(k.state.voter_ids().size() == 2);
    CHECK(ledger::check_conservation(k.state) == std::nullopt);
  }

  TEST_CASE("balance of an unknown node is all zeros") {
    Books k;
    CHECK(k.state.balance_of(KeyPair::derive(41, 9).id()) == ledger::Balance{});
  }

  TEST_CASE("transfer moves ownership") {
    Books k;
    const auto coins = k.state.spendable_coins(k.c.id());
    const Block blk = k.block_of(make_transfer(k.c, k.a.id(), {coins[3]}, 5, 0));
    const LedgerState next = ledger::apply_block(k.state, blk, k.accepted(blk), k.params);
    CHECK(next.coins.at(coins[3]).owner == k.a.id());
    CHECK(next.height == 1);
    CHECK(next.balance_of(k.c.id()).spendable == 9);
    CHECK(next.balance_of(k.a.id()).spendable == 7);
  }

  TEST_CASE("a 0-voter in an accepted round loses p to blocked coins") {
    Books k;
    const auto coins = k.state.spendable_coins(k.c.id());
    const Block blk = k.block_of(make_transfer(k.c, k.a.id(), {coins[0]}, 5, 0));
    const LedgerState next = ledger::apply_block(k.state, blk, k.accepted(blk, {k.b.id()}, {k.a.id()}), k.params);
    CHECK(next.balance_of(k.b.id()) == ledger::Balance{6, 3, 1, 0});
    CHECK(next.balance_of(k.a.id()).ctr == 1);
    CHECK(next.blocked_coins().size() == 1);
    CHECK(ledger::check_conservation(next) == std::nullopt);
  }

  TEST_CASE("blocks spending unowned or blocked coins are refused") {
    Books k;
    const auto a_coins = k.state.spendable_coins(k.a.id());
    const Block theft = k.block_of(make_transfer(k.c, k.c.id(), {a_coins[0]}, 5, 0));
    CHECK_THROWS_AS(ledger::apply_block(k.state, theft, k.accepted(theft), k.params), LedgerError);

    const auto c_coins = k.state.spendable_coins(k.c.id());
    const Block pay = k.block_of(make_transfer(k.c, k.a.id(), {c_coins[0]}, 5, 0));
    LedgerState s = ledger::apply_block(k.state, pay, k.accepted(pay, {k.b.id()}), k.params);
    const CoinId blocked = s.blocked_coins().at(0);
    Books later;
    later.state = s;
    const Block reuse = later.block_of(make_transfer(k.b, k.a.id(), {blocked}, 6, 0));
    CHECK_THROWS_AS(ledger::apply_block(s, reuse, later.accepted(reuse), k.params), LedgerError);
  }

  TEST_CASE("rejected rounds move deposits and CTR without a block") {
    Books k;
    RoundOutcome o;
    o.kind = RoundOutcome::Kind::rejected;
    o.penalized = {k.a.id()};
    o.rewarded = {k.b.id()};
    const LedgerState next = ledger::apply_outcome(k.state, o, k.params);
    CHECK(next.height == 0);
    CHECK(next.balance_of(k.a.id()) == ledger::Balance{6, 3, 1, 0});
    CHECK(next.ctr_of(k.b.id()) == 1);
  }

  TEST_CASE("CTR exchange") {
    Books k;
    k.state.ctr[k.a.id()] = 5;
    const CoinId coin9 = k.state.spendable_coins(k.c.id())[9];
    const Transaction ok = make_ctr_exchange(k.a, k.c, {coin9}, 2, 5, 5);
    const LedgerState next = ledger::exchange_ctr(k.state, ok, k.verifier);
    CHECK(next.ctr_of(k.a.id()) == 3);
    CHECK(next.ctr_of(k.c.id()) == 2);
    CHECK(next.coins.at(coin9).owner == k.a.id());
    CHECK(next.balance_of(k.c.id()).spendable == 9);

    Transaction unsigned_tx = ok;
    unsigned_tx.exchange->counterparty_signature = Signature{};
    CHECK_THROWS_AS(ledger::exchange_ctr(k.state, unsigned_tx, k.verifier), LedgerError);

    k.state.ctr[k.a.id()] = 1;
    CHECK_THROWS_AS(ledger::exchange_ctr(k.state, ok, k.verifier), LedgerError);
  }

  TEST_CASE("incoming coins repay bootstrap debt first") {
    Books k;
    const KeyPair d = KeyPair::derive(41, 3);
    k.params.allow_bootstrap_debt = true;
    voter::register_voter(k.state, d.id(), {}, k.params, 1, true);
    CHECK(k.state.balance_of(d.id()).deposited == -4);
    const auto coins = k.state.spendable_coins(k.c.id());
    for (int i = 0; i < 5; ++i) ledger::credit_coin(k.state, coins[i], d.id());
    const auto b = k.state.balance_of(d.id());
    CHECK(b.deposited == 4);
    CHECK(b.spendable == 1);
    CHECK(ledger::check_conservation(k.state) == std::nullopt);
  }

  TEST_CASE("replay is deterministic") {
    const auto& r = fixture::bundled("dissenter");
    const auto& chain = r.chains[r.observer];
    auto replay = [&] {
      LedgerState s = ledger::genesis_state(chain.genesis(), r.config.params);
      std::size_t h = 1;
      for (const auto& o : r.outcomes) {
        s = o.kind == RoundOutcome::Kind::accepted ? ledger::apply_block(s, chain[h++], o, r.config.params)
                                                    : ledger::apply_outcome(s, o, r.config.params);
      }
      return s;
    };
    const LedgerState x = replay();
    CHECK(ledger::serialize_state(x) == ledger::serialize_state(replay()));
    CHECK(x == r.ledger);
  }

  TEST_CASE("bundled scenarios match the fold-from-genesis oracle") {
    for (const char* name : {"honest3", "dissenter", "bootstrap", "exchange", "leave", "equivocator", "abstainer"}) {
      CAPTURE(name);
      const auto& r = fixture::bundled(name);
      const auto diffs = oracle::compare_fold(r, oracle::fold(r));
      CHECK(diffs.empty());
      for (const auto& d : diffs) MESSAGE(d);
    }
  }

  TEST_CASE("a departed voter holds all its coins again") {
    const auto& r = fixture::bundled("leave");
    const auto* rec = r.ledger.record(r.node_ids[3]);
    REQUIRE(rec != nullptr);
    CHECK(rec->status == voter::VoterStatus::left);
    const auto b = r.ledger.balance_of(r.node_ids[3]);
    CHECK(b.spendable + b.blocked == r.config.initial_coins[3]);
  }
}
