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

#include <algorithm>

#include "doctest.h"

#include "ledger/ledger.hpp"
#include "voter/registration.hpp"
#include "voter/round.hpp"

using namespace rdv;
using ledger::LedgerError;
using ledger::LedgerState;
using ledger::RoundOutcome;
using voter::Accept;
using voter::Phase;
using voter::ProtocolParams;
using voter::RoundState;

namespace {

// Nodes 0..2 are genesis voters, 3 holds coins, 4 holds nothing.
struct World {
  std::vector<KeyPair> keys;
  ProtocolParams params;
  Block genesis;
  LedgerState ledger;
  Verifier verifier;

  World() {
    for (int i = 0; i < 5; ++i) keys.push_back(KeyPair::derive(31, i));
    params.delta = 20;
    params.pi = 100;
    params.deposit = 4;
    params.penalty = 1;
    params.clock = {5, 0};
    MintPayload mint;
    for (int i = 0; i < 4; ++i) mint.allocations.push_back({keys[i].id(), 10});
    mint.voters = {keys[0].id(), keys[1].id(), keys[2].id()};
    mint.deposit = 4;
    genesis = make_genesis(mint);
    ledger = ledger::genesis_state(genesis, params);
  }

  const NodeId& id(int i) const { return keys[i].id(); }

  std::vector<CoinId> coins_of(int i, std::size_t n) const {
    auto c = ledger.spendable_coins(id(i));
    c.resize(n);
    return c;
  }
};

// A round over voters 0..n-1 starting at S = 100, so the vote window closes
// at V = 120 and collection is settled at V - 1 + m = 124.
struct Round {
  World& w;
  Transaction tx;
  RoundState round;
  std::map<NodeId, int> index;

  Round(World& world, int n)
      : w(world),
        tx(make_transfer(world.keys[3], world.id(0), world.coins_of(3, 1), 95, 0)),
        round(0, tx, 95, world.genesis.block_hash, roster(world, n), 100, world.params) {
    for (int i = 0; i < 5; ++i) index[w.id(i)] = i;
  }

  static std::vector<NodeId> roster(const World& w, int n) {
    std::vector<NodeId> r;
    for (int i = 0; i < n; ++i) r.push_back(w.id(i));
    return r;
  }

  Accept vote(int i, std::uint8_t value, Tick at) {
    return round.add_vote(make_vote(w.keys[i], tx.id, w.genesis.block_hash, value), at, w.verifier);
  }

  void sign_all(Tick at) {
    const auto members = round.roster();
    for (const auto& m : members) {
      const Signature s = sign_roster(w.keys[index.at(m)], tx.id, members, w.genesis.block_hash);
      REQUIRE(round.add_roster_signature(m, members, s, at, w.verifier) == Accept::counted);
    }
  }
};

std::vector<NodeId> sorted(std::vector<NodeId> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_SUITE("voter") {
  TEST_CASE("register locks d coins") {
    World w;
    const auto rec = voter::register_voter(w.ledger, w.id(3), w.coins_of(3, 4), w.params, 50, false);
    CHECK(rec.registered_at == 50);
    const auto b = w.ledger.balance_of(w.id(3));
    CHECK(b.spendable == 6);
    CHECK(b.deposited == 4);
    CHECK(ledger::check_conservation(w.ledger) == std::nullopt);
  }

  TEST_CASE("register with debt starts at -d") {
    World w;
    voter::register_voter(w.ledger, w.id(4), {}, w.params, 50, true);
    CHECK(w.ledger.balance_of(w.id(4)).deposited == -4);
    CHECK(w.ledger.record(w.id(4))->bootstrap);
  }

  TEST_CASE("register errors") {
    World w;
    CHECK_THROWS_AS(voter::register_voter(w.ledger, w.id(4), {}, w.params, 50, false), LedgerError);
    CHECK_THROWS_AS(voter::register_voter(w.ledger, w.id(0), w.coins_of(0, 4), w.params, 50, false), LedgerError);
    CHECK_THROWS_AS(voter::register_voter(w.ledger, w.id(3), w.coins_of(3, 3), w.params, 50, false), LedgerError);
  }

  TEST_CASE("leave returns what is left of the deposit") {
    World w;
    voter::leave(w.ledger, w.id(0));
    CHECK(w.ledger.balance_of(w.id(0)).spendable == 10);
    CHECK(w.ledger.record(w.id(0))->status == voter::VoterStatus::left);

    voter::penalize(w.ledger, w.id(1), w.params);
    voter::leave(w.ledger, w.id(1));
    const auto b = w.ledger.balance_of(w.id(1));
    CHECK(b.spendable == 9);
    CHECK(b.blocked == 1);

    voter::suspend(w.ledger, w.id(2), 500);
    voter::leave(w.ledger, w.id(2));
    CHECK(w.ledger.balance_of(w.id(2)).spendable == 10);

    CHECK_THROWS_AS(voter::leave(w.ledger, w.id(3)), LedgerError);
    CHECK_THROWS_AS(voter::leave(w.ledger, w.id(0)), LedgerError);
    CHECK(ledger::check_conservation(w.ledger) == std::nullopt);
  }

  TEST_CASE("penalties exhaust the deposit and demote") {
    World w;
    for (int i = 0; i < 3; ++i) voter::penalize(w.ledger, w.id(0), w.params);
    CHECK(w.ledger.record(w.id(0))->is_voter());
    CHECK(w.ledger.balance_of(w.id(0)).deposited == 1);
    voter::penalize(w.ledger, w.id(0), w.params);
    const auto* rec = w.ledger.record(w.id(0));
    CHECK_FALSE(rec->is_voter());
    CHECK(rec->demoted);
    CHECK(w.ledger.balance_of(w.id(0)).blocked == 4);
    CHECK(w.ledger.balance_of(w.id(0)).spendable == 6);
  }

  TEST_CASE("reinstatement boundary is inclusive") {
    voter::VoterRecord rec;
    rec.status = voter::VoterStatus::suspended;
    rec.suspended_until = 60;
    CHECK(voter::reinstate(rec, 59).status == voter::VoterStatus::suspended);
    CHECK(voter::reinstate(rec, 60).status == voter::VoterStatus::active);
    CHECK(rec.suspended_at(59));
    CHECK_FALSE(rec.suspended_at(60));
    voter::VoterRecord active;
    CHECK(voter::reinstate(active, 1000) == active);
  }

  TEST_CASE("suspend, reinstate, suspend again") {
    World w;
    voter::suspend(w.ledger, w.id(1), 60);
    auto rec = *w.ledger.record(w.id(1));
    CHECK(rec.suspended_at(30));
    rec = voter::reinstate(rec, 60);
    CHECK(rec.status == voter::VoterStatus::active);
    w.ledger.voters[w.id(1)] = rec;
    voter::suspend(w.ledger, w.id(1), 200);
    CHECK(w.ledger.record(w.id(1))->suspended_at(199));
    CHECK(voter::reinstate(*w.ledger.record(w.id(1)), 200).status == voter::VoterStatus::active);
  }

  TEST_CASE("cast_vote outcomes") {
    World w;
    const auto self = *w.ledger.record(w.id(0));
    priority::ConfirmedCoins confirmed;
    confirmed.apply(w.genesis);
    priority::PriorityTable table;
    const Hash prev = w.genesis.block_hash;
    auto cast = [&](const Transaction& tx, const voter::VoterRecord& r) {
      return voter::cast_vote(r, w.keys[0], tx, tx.tsp, w.ledger, confirmed, table, prev, w.params, w.verifier);
    };

    const Transaction good = make_transfer(w.keys[3], w.id(1), w.coins_of(3, 2), 10, 0);
    auto r = cast(good, self);
    REQUIRE(r.kind == voter::CastResult::Kind::vote);
    CHECK(r.vote->value == 1);
    CHECK(verify_signature(w.id(0), vote_signing_message(good.id, w.id(0), prev, 1), r.vote->signature));

    const Transaction stolen = make_transfer(w.keys[3], w.id(1), w.coins_of(1, 1), 10, 0);
    r = cast(stolen, self);
    REQUIRE(r.kind == voter::CastResult::Kind::vote);
    CHECK(r.vote->value == 0);

    auto late_voter = self;
    late_voter.registered_at = 10;
    CHECK(cast(good, late_voter).kind == voter::CastResult::Kind::abstain);

    const Transaction twin = make_transfer(w.keys[3], w.id(2), good.coins, 11, 0);
    table.insert_and_sort(good, 12, [](const NodeId&) { return std::uint64_t{0}; });
    table.insert_and_sort(twin, 12, [](const NodeId&) { return std::uint64_t{0}; });
    CHECK(cast(good, self).kind == voter::CastResult::Kind::double_spent);
  }

  TEST_CASE("all voters within the window") {
    World w;
    Round r(w, 3);
    CHECK(r.vote(0, 1, 101) == Accept::counted);
    CHECK(r.vote(1, 1, 102) == Accept::counted);
    CHECK_FALSE(r.round.advance(106));
    CHECK(r.vote(2, 1, 103) == Accept::counted);
    CHECK(r.round.advance(108));
    CHECK(r.round.phase() == Phase::signing_roster);
    CHECK(r.round.roster().size() == 3);
    r.sign_all(108);
    CHECK(r.round.advance(113));
    REQUIRE(r.round.phase() == Phase::done);
    const auto& o = r.round.outcome();
    CHECK(o.kind == RoundOutcome::Kind::accepted);
    CHECK(o.suspensions.empty());
    CHECK(o.rewarded.size() == 3);
    CHECK(o.vote_rbox.signatures.size() == 3);
    const Block b = r.round.build_block(1);
    CHECK(b.vote_rbox.voters == sorted(Round::roster(w, 3)));
  }

  TEST_CASE("vote window boundary is exact") {
    World w;
    Round r(w, 2);
    CHECK(r.round.vote_deadline() == 120);
    CHECK(r.vote(0, 1, 119) == Accept::counted);
    CHECK(r.vote(1, 1, 120) == Accept::late);
  }

  TEST_CASE("a silent voter is removed at the window and suspended for Π") {
    World w;
    Round r(w, 3);
    r.vote(0, 1, 101);
    r.vote(1, 1, 110);
    CHECK(r.round.next_deadline() == 124);
    CHECK_FALSE(r.round.advance(123));
    CHECK(r.round.phase() == Phase::collecting);
    CHECK(r.round.advance(124));
    REQUIRE(r.round.suspensions().size() == 1);
    CHECK(r.round.suspensions()[0] == ledger::Suspension{w.id(2), 120, 220});
    CHECK(r.round.not_participated() == std::vector<NodeId>{w.id(2)});
    r.sign_all(124);
    r.round.advance(129);
    REQUIRE(r.round.phase() == Phase::done);
    CHECK(r.round.outcome().kind == RoundOutcome::Kind::accepted);
    CHECK(r.round.outcome().participants.size() == 2);
  }

  TEST_CASE("everyone silent aborts the round") {
    World w;
    Round r(w, 3);
    CHECK(r.round.advance(124));
    REQUIRE(r.round.phase() == Phase::done);
    CHECK(r.round.outcome().kind == RoundOutcome::Kind::aborted);
    CHECK(r.round.outcome().suspensions.size() == 3);
    CHECK(r.round.outcome().participants.empty());
  }

  TEST_CASE("a missing roster signature removes the signer") {
    World w;
    Round r(w, 3);
    for (int i = 0; i < 3; ++i) r.vote(i, 1, 101);
    r.round.advance(106);
    const auto members = r.round.roster();
    for (int i = 0; i < 2; ++i) {
      const Signature s = sign_roster(w.keys[i], r.tx.id, members, w.genesis.block_hash);
      r.round.add_roster_signature(w.id(i), members, s, 106, w.verifier);
    }
    // W = 106 + 20; settled at W - 1 + m.
    CHECK(r.round.next_deadline() == 130);
    CHECK_FALSE(r.round.advance(129));
    CHECK(r.round.advance(130));
    CHECK(r.round.phase() == Phase::signing_roster);
    CHECK(r.round.epoch() == 2);
    CHECK(r.round.suspensions().back() == ledger::Suspension{w.id(2), 126, 226});
    r.sign_all(130);
    r.round.advance(135);
    REQUIRE(r.round.phase() == Phase::done);
    CHECK(r.round.outcome().participants.size() == 2);
  }

  TEST_CASE("tally: [1,1,0] accepts and penalizes the dissenter") {
    World w;
    Round r(w, 3);
    r.vote(0, 1, 101);
    r.vote(1, 1, 101);
    r.vote(2, 0, 101);
    r.round.advance(106);
    r.sign_all(106);
    r.round.advance(111);
    const auto& o = r.round.outcome();
    CHECK(o.kind == RoundOutcome::Kind::accepted);
    CHECK(o.penalized == std::vector<NodeId>{w.id(2)});
    CHECK(sorted(o.rewarded) == sorted({w.id(0), w.id(1)}));
  }

  TEST_CASE("tally: [0,0,1] rejects and penalizes the 1-voter") {
    World w;
    Round r(w, 3);
    r.vote(0, 0, 101);
    r.vote(1, 0, 101);
    r.vote(2, 1, 101);
    r.round.advance(106);
    r.sign_all(106);
    r.round.advance(111);
    const auto& o = r.round.outcome();
    CHECK(o.kind == RoundOutcome::Kind::rejected);
    CHECK(o.penalized == std::vector<NodeId>{w.id(2)});
    CHECK(sorted(o.rewarded) == sorted({w.id(0), w.id(1)}));
    CHECK_FALSE(o.tie);
  }

  TEST_CASE("tally: a tie is a rejection") {
    World w;
    Round r(w, 2);
    r.vote(0, 1, 101);
    r.vote(1, 0, 101);
    r.round.advance(106);
    r.sign_all(106);
    r.round.advance(111);
    const auto& o = r.round.outcome();
    CHECK(o.kind == RoundOutcome::Kind::rejected);
    CHECK(o.tie);
    CHECK(o.penalized == std::vector<NodeId>{w.id(0)});
    CHECK(o.rewarded == std::vector<NodeId>{w.id(1)});
  }

  TEST_CASE("bad votes are discarded") {
    World w;
    Round r(w, 3);
    Vote forged = make_vote(w.keys[0], r.tx.id, w.genesis.block_hash, 1);
    forged.signature.bytes[3] ^= 1;
    CHECK(r.round.add_vote(forged, 101, w.verifier) == Accept::bad_signature);
    Hash other = w.genesis.block_hash;
    other.bytes[0] ^= 1;
    CHECK(r.round.add_vote(make_vote(w.keys[0], r.tx.id, other, 1), 101, w.verifier) == Accept::wrong_binding);
    CHECK(r.vote(3, 1, 101) == Accept::not_member);
    CHECK(r.vote(0, 1, 101) == Accept::counted);
    CHECK(r.vote(0, 1, 102) == Accept::duplicate);
    CHECK(r.round.votes().votes.size() == 1);
  }

  TEST_CASE("conflicting votes remove and penalize the voter") {
    World w;
    Round r(w, 3);
    r.vote(0, 1, 101);
    r.vote(1, 1, 101);
    r.vote(2, 1, 101);
    CHECK(r.vote(2, 0, 102) == Accept::equivocation);
    CHECK_FALSE(r.round.is_member(w.id(2)));
    r.round.advance(107);
    r.sign_all(107);
    r.round.advance(112);
    const auto& o = r.round.outcome();
    CHECK(o.kind == RoundOutcome::Kind::accepted);
    CHECK(o.equivocators == std::vector<NodeId>{w.id(2)});
    CHECK(std::count(o.penalized.begin(), o.penalized.end(), w.id(2)) == 1);
    CHECK(std::count(o.rewarded.begin(), o.rewarded.end(), w.id(2)) == 0);
  }

  TEST_CASE("a leave during collection drops the member and its vote") {
    World w;
    Round r(w, 3);
    r.vote(0, 1, 101);
    r.vote(1, 1, 101);
    CHECK(r.round.add_leave(w.id(1), 105));
    CHECK(r.round.votes().find(w.id(1)) == nullptr);
    CHECK_FALSE(r.round.add_leave(w.id(2), 120));
    r.vote(2, 1, 110);
    r.round.advance(115);
    CHECK(r.round.roster() == sorted({w.id(0), w.id(2)}));
    CHECK(r.round.leavers() == std::vector<NodeId>{w.id(1)});
  }
}
