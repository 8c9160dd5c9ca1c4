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

#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

#include "core/serialize.hpp"
#include "sim/config.hpp"
#include "sim/simulation.hpp"
#include "sim/states.hpp"
#include "sim/sweep.hpp"
#include "sim/tamper.hpp"

using namespace rdv;
using namespace rdv::sim;
using nlohmann::json;

namespace {

ScenarioConfig from_json(const json& j) { return parse_scenario(j.dump(2), "test"); }

json base_scenario() {
  return {{"seed", 1},
          {"voters", 3},
          {"ordinary_nodes", 2},
          {"params", {{"delta", 20}, {"pi", 100}, {"deposit", 4}, {"penalty", 1}, {"m", 5}, {"slack", 0}}},
          {"delay", {{"model", "uniform"}, {"min", 1}, {"max", 5}}},
          {"duration", 3000}};
}

bool chains_agree(const RunResult& r) {
  for (const auto& c : r.chains) {
    if (!(c == r.chains.front())) return false;
  }
  return true;
}

std::string config_error(const std::string& text) {
  try {
    parse_scenario(text, "bad.json");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("simnet") {
  TEST_CASE("honest run: five blocks, identical chains") {
    const auto& r = fixture::bundled("honest3");
    CHECK(r.passed());
    CHECK(r.metrics.blocks == 5);
    CHECK(chains_agree(r));
    CHECK(r.metrics.forks == 0);
  }

  TEST_CASE("same config and seed reproduce the run exactly") {
    const ScenarioConfig cfg = load_scenario(fixture::scenario_path("abstainer"));
    const RunResult a = run(cfg);
    const RunResult b = run(cfg);
    CHECK(a.events == b.events);
    CHECK(a.chains == b.chains);
    CHECK(a.report() == b.report());
  }

  TEST_CASE("different seeds reorder deliveries but not the chain") {
    json j = base_scenario();
    j["transactions"] = json::array({json{{"at", 10}, {"sender", 3}, {"receiver", 4}, {"coins", 2}},
                                     json{{"at", 12}, {"sender", 4}, {"receiver", 0}, {"coins", 1}},
                                     json{{"at", 40}, {"sender", 0}, {"receiver", 3}, {"coins", 1}}});
    ScenarioConfig cfg = from_json(j);
    const RunResult a = run(cfg);
    cfg.seed = 2;
    const RunResult b = run(cfg);
    CHECK(a.events != b.events);
    CHECK(a.chains[a.observer] == b.chains[b.observer]);
    CHECK(a.passed());
    CHECK(b.passed());
  }

  TEST_CASE("double spender is caught") {
    const auto& r = fixture::bundled("double_spend");
    CHECK(r.passed());
    CHECK(r.metrics.double_spends_attempted == 1);
    CHECK(r.metrics.double_spends_detected == 1);
    CHECK(r.metrics.double_spends_confirmed == 0);
    REQUIRE(r.double_spends.size() == 1);
    CHECK_FALSE((r.double_spends[0].vendor_confirmed && r.double_spends[0].collider_confirmed));
  }

  TEST_CASE("double spend after the first payment settled is rejected") {
    json j = base_scenario();
    j["voters"] = 5;
    j["ordinary_nodes"] = 3;
    j["adversaries"] = json::array(
        {json{{"type", "double_spender"}, {"node", 5}, {"at", 20}, {"stagger", 60}, {"vendor", 6}, {"collider", 7}}});
    const RunResult r = run(from_json(j));
    CHECK(r.passed());
    CHECK(r.metrics.double_spends_confirmed == 0);
    CHECK(r.metrics.double_spends_detected == 1);
  }

  TEST_CASE("a sole adversarial voter is labeled") {
    json j = base_scenario();
    j["voters"] = 1;
    j["ordinary_nodes"] = 3;
    j["adversaries"] = json::array(
        {json{{"type", "double_spender"}, {"node", 0}, {"at", 20}, {"stagger", 0}, {"vendor", 1}, {"collider", 2}}});
    const RunResult r = run(from_json(j));
    CHECK(r.metrics.assumption_violated);
  }

  TEST_CASE("forged timestamps: accepted iff backdate <= m + slack") {
    for (int slack : {0, 2}) {
      for (Tick backdate = 0; backdate <= 10; ++backdate) {
        CAPTURE(slack);
        CAPTURE(backdate);
        json j = base_scenario();
        j["params"]["slack"] = slack;
        j["adversaries"] = json::array(
            {json{{"type", "timestamp_forger"}, {"node", 3}, {"at", 50}, {"backdate", backdate}, {"receiver", 4}}});
        const RunResult r = run(from_json(j));
        REQUIRE(r.forgeries.size() == 1);
        CHECK(r.forgeries[0].confirmed == (backdate <= 5 + slack));
        CHECK(r.passed());
      }
    }
  }

  TEST_CASE("abstainer: removal and reinstatement agree with the log") {
    const auto& r = fixture::bundled("abstainer");
    const auto scan = oracle::scan_log(r);
    CHECK(scan.delta_removals == r.metrics.delta_removals);
    CHECK(scan.reinstatements == r.metrics.reinstatements);
    CHECK(scan.delta_removals == 1);
    CHECK(scan.boundary_errors.empty());
    for (const auto& e : scan.boundary_errors) MESSAGE(e);
  }

  TEST_CASE("an abstainer is never removed while nothing is pending") {
    json j = base_scenario();
    j["voters"] = json::array({"honest", "honest", "honest",
                               json{{"strategy", "abstainer"}, {"silent_from", 1}, {"silent_rounds", 100}}});
    j["ordinary_nodes"] = 1;
    j["params"]["pi"] = 50;
    j["transactions"] = json::array({json{{"at", 10}, {"sender", 4}, {"receiver", 0}, {"coins", 1}},
                                     json{{"at", 600}, {"sender", 4}, {"receiver", 1}, {"coins", 1}}});
    const RunResult r = run(from_json(j));
    CHECK(r.passed());
    // Silent through hundreds of idle ticks, removed only in the second round.
    CHECK(r.metrics.delta_removals == 1);
    bool removed_early = false;
    Tick removed_at = 0;
    for (const auto& line : r.events) {
      const auto e = json::parse(line);
      if (e["ev"] == "delta-removal" && e["node"] == r.observer) {
        removed_at = e["at"];
        removed_early = removed_at < 600;
      }
    }
    CHECK_FALSE(removed_early);
    const auto scan = oracle::scan_log(r);
    CHECK(scan.boundary_errors.empty());
    CHECK(scan.reinstatements == r.metrics.reinstatements);
  }

  TEST_CASE("dissenters lose their deposits and are demoted") {
    const auto& r = fixture::bundled("dissenter");
    CHECK(r.metrics.demotions == 2);
    CHECK(r.metrics.blocks == 6);
    for (std::size_t i = 3; i < 5; ++i) {
      const auto* rec = r.ledger.record(r.node_ids[i]);
      REQUIRE(rec);
      CHECK(rec->demoted);
      CHECK(r.ledger.balance_of(r.node_ids[i]).blocked == r.config.params.deposit);
    }
    CHECK(oracle::compare_fold(r, oracle::fold(r)).empty());
  }

  TEST_CASE("a dissenting minority of two cannot block honest transactions") {
    json j = base_scenario();
    j["voters"] = json::array({"honest", "honest", "honest", json{{"strategy", "dissenter"}, {"flip_probability", 1.0}},
                               json{{"strategy", "dissenter"}, {"flip_probability", 1.0}}});
    j["params"]["deposit"] = 12;
    j["initial_coins"] = 20;
    j["tx_generator"] = {{"count", 10}, {"start", 5}, {"min_gap", 1}, {"max_gap", 10}};
    const RunResult r = run(from_json(j));
    CHECK(r.passed());
    CHECK(r.metrics.txs_confirmed == 10);
    CHECK(r.metrics.rejected == 0);
  }

  TEST_CASE("equivocation is detected by everyone") {
    const auto& r = fixture::bundled("equivocator");
    CHECK(r.passed());
    CHECK(r.metrics.equivocations == 2);
    CHECK(chains_agree(r));
  }

  TEST_CASE("correctness states for n = 1..4") {
    for (std::uint32_t n = 1; n <= 4; ++n) {
      CAPTURE(n);
      const StateTable t = enumerate_correctness_states(n);
      std::size_t combos = 1;
      for (std::uint32_t i = 0; i < n; ++i) combos *= 3;
      CHECK(t.cases.size() == combos);
      CHECK(t.passed());
    }
    CHECK_THROWS(enumerate_correctness_states(0));
    CHECK_THROWS(enumerate_correctness_states(5));
  }

  TEST_CASE("state labels") {
    using B = Behavior;
    CHECK(classify({B::vote1, B::vote1, B::vote1}) == "state1");
    CHECK(classify({B::vote1, B::vote0, B::vote1}) == "state2");
    CHECK(classify({B::vote1, B::vote1, B::abstain}) == "state3");
    CHECK(classify({B::abstain, B::abstain, B::abstain}) == "state_n");
    CHECK(classify({B::abstain}) == "state_n");
    CHECK(classify({B::vote0}) == "state1");
    const auto o = reference_outcome({B::vote1, B::vote1, B::abstain});
    CHECK(o.kind == "accepted");
    CHECK(o.blocks == 1);
    CHECK(o.suspended == std::vector<bool>{false, false, true});
  }

  TEST_CASE("tamper harness: empty and voter-list modes") {
    const auto& blocks = fixture::chain_of("long_chain").blocks();
    REQUIRE(blocks.size() >= 21);
    const TamperReport none = run_tamper(blocks, 0, 1, TamperMode::all);
    CHECK(none.trials == 0);
    CHECK(none.complete());
    const TamperReport voters = run_tamper(blocks, 200, 3, TamperMode::voters);
    CHECK(voters.trials == 200);
    CHECK(voters.complete());
    const TamperReport bytes = run_tamper(blocks, 200, 4, TamperMode::bytes);
    CHECK(bytes.complete());
  }

  TEST_CASE("seed sweep over a bundled scenario") {
    SweepOptions o;
    o.first_seed = 10;
    o.count = 4;
    o.threads = 2;
    const auto report = run_sweep(load_scenario(fixture::scenario_path("honest3")), o);
    CHECK(report.passed());
    REQUIRE(report.entries.size() == 4);
    for (const auto& e : report.entries) CHECK(e.deterministic);
  }

  TEST_CASE("random scenarios stay within the requested shape") {
    for (std::uint64_t s = 0; s < 50; ++s) {
      const ScenarioConfig c = random_scenario(s);
      CHECK(c.voters.size() >= 3);
      CHECK(c.voters.size() <= 9);
      REQUIRE(c.generator);
      CHECK(c.generator->count >= 10);
      CHECK(c.generator->count <= 50);
      CHECK(c.delay.kind == DelayModel::Kind::uniform);
      CHECK(c.delay.max <= c.params.clock.m);
    }
  }

  TEST_CASE("scenario diagnostics name the line and field") {
    const std::string malformed = "{\n  \"voters\": 3,\n  \"seed\": ,\n}\n";
    const std::string e1 = config_error(malformed);
    CHECK(e1.find("bad.json:3") != std::string::npos);

    const std::string unknown = "{\n  \"voters\": 3,\n  \"params\": {\"delta\": 20, \"colour\": 1}\n}\n";
    const std::string e2 = config_error(unknown);
    CHECK(e2.find("bad.json:3") != std::string::npos);
    CHECK(e2.find("params.colour") != std::string::npos);

    const std::string slow = "{\n  \"voters\": 3,\n  \"params\": {\"m\": 3},\n  \"delay\": {\"model\": \"fixed\", \"ticks\": 4}\n}\n";
    const std::string e3 = config_error(slow);
    CHECK(e3.find("delay") != std::string::npos);

    const std::string bad_node = "{\n  \"voters\": 2,\n  \"transactions\": [{\"at\": 1, \"sender\": 9, \"receiver\": 0}]\n}\n";
    CHECK(config_error(bad_node).find("sender") != std::string::npos);
  }

  TEST_CASE("scenario round trip through JSON") {
    const ScenarioConfig c = load_scenario(fixture::scenario_path("dissenter"));
    const ScenarioConfig again = parse_scenario(to_json(c).dump(), "again");
    CHECK(to_json(again) == to_json(c));
  }

  TEST_CASE("artifacts are written") {
    const auto& r = fixture::bundled("honest3");
    const std::string dir = std::string(RDV_BINARY_DIR) + "/unit-artifacts";
    write_artifacts(r, dir);
    for (const char* f : {"chain.rdv", "ledger.bin", "ledger.json", "events.jsonl", "report.json", "summary.txt"}) {
      CHECK(std::filesystem::exists(std::filesystem::path(dir) / f));
    }
    std::ifstream in(std::filesystem::path(dir) / "chain.rdv", std::ios::binary);
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(decode_chain_dump(ByteView(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size())) ==
          r.chains[r.observer].blocks());
  }
}
