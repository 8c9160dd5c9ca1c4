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

#include "sim/states.hpp"

#include <algorithm>
#include <sstream>

#include "sim/simulation.hpp"

namespace rdv::sim {

using nlohmann::json;

char to_char(Behavior b) {
  switch (b) {
    case Behavior::vote1:
      return '1';
    case Behavior::vote0:
      return '0';
    case Behavior::abstain:
      return 'A';
  }
  return '?';
}

json StateOutcome::to_json() const {
  return {{"kind", kind},   {"blocks", blocks},       {"penalties", penalties},
          {"ctr", ctr},     {"on_roster", on_roster}, {"suspended", suspended}};
}

StateOutcome reference_outcome(const std::vector<Behavior>& behaviors) {
  const std::size_t n = behaviors.size();
  StateOutcome o;
  o.penalties.assign(n, 0);
  o.ctr.assign(n, 0);
  o.on_roster.assign(n, false);
  o.suspended.assign(n, false);
  int ones = 0;
  int zeros = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (behaviors[i] == Behavior::abstain) {
      o.suspended[i] = true;
    } else {
      o.on_roster[i] = true;
      (behaviors[i] == Behavior::vote1 ? ones : zeros) += 1;
    }
  }
  if (ones + zeros == 0) {
    o.kind = "aborted";
    return o;
  }
  const bool accept = ones > zeros;
  o.kind = accept ? "accepted" : "rejected";
  o.blocks = accept ? 1 : 0;
  const Behavior winner = accept ? Behavior::vote1 : Behavior::vote0;
  for (std::size_t i = 0; i < n; ++i) {
    if (behaviors[i] == Behavior::abstain) continue;
    if (behaviors[i] == winner) {
      o.ctr[i] = 1;
    } else {
      o.penalties[i] = 1;
    }
  }
  return o;
}

std::string classify(const std::vector<Behavior>& behaviors) {
  std::size_t abstained = 0;
  bool saw1 = false;
  bool saw0 = false;
  for (Behavior b : behaviors) {
    abstained += b == Behavior::abstain;
    saw1 = saw1 || b == Behavior::vote1;
    saw0 = saw0 || b == Behavior::vote0;
  }
  if (abstained == behaviors.size()) return "state_n";
  if (abstained > 0) return "state" + std::to_string(abstained + 2);
  return saw1 && saw0 ? "state2" : "state1";
}

namespace {

std::string observed_label(const RunResult& r, std::size_t n) {
  if (r.outcomes.empty()) return "none";
  const auto& last = r.outcomes.back();
  const std::size_t removed = n - last.participants.size();
  if (removed == n) return "state_n";
  if (removed > 0) return "state" + std::to_string(removed + 2);
  return last.votes.ones() > 0 && last.votes.zeros() > 0 ? "state2" : "state1";
}

}  // namespace

StateTable enumerate_correctness_states(std::uint32_t n) {
  if (n < 1 || n > 4) throw Error("n must be within [1, 4]");
  StateTable table;
  table.n = n;
  std::size_t combos = 1;
  for (std::uint32_t i = 0; i < n; ++i) combos *= 3;
  for (std::size_t code = 0; code < combos; ++code) {
    StateCase c;
    std::size_t rest = code;
    ScenarioConfig cfg;
    cfg.name = "states";
    cfg.seed = code;
    for (std::uint32_t i = 0; i < n; ++i) {
      const auto b = static_cast<Behavior>(rest % 3);
      rest /= 3;
      c.behaviors.push_back(b);
      VoterSpec v;
      if (b == Behavior::abstain) {
        v.strategy = Strategy::abstainer;
        v.silent_rounds = 1;
      } else {
        v.strategy = Strategy::fixed_vote;
        v.value = b == Behavior::vote1 ? 1 : 0;
      }
      cfg.voters.push_back(v);
    }
    cfg.ordinary_nodes = 1;
    cfg.params.delta = 20;
    cfg.params.pi = 1000;
    cfg.params.deposit = 4;
    cfg.params.penalty = 1;
    cfg.params.clock = {5, 0};
    cfg.initial_coins.assign(n + 1, 8);
    cfg.delay = {DelayModel::Kind::uniform, 1, 5};
    cfg.transactions.push_back(TxSpec{10, TxKind::transfer, n, 0, 1, 0, false});
    cfg.duration = 400;

    const RunResult r = run(cfg);
    c.label = classify(c.behaviors);
    c.expected = reference_outcome(c.behaviors);
    StateOutcome& o = c.observed;
    o.kind = r.outcomes.empty() ? "none" : ledger::to_string(r.outcomes.back().kind);
    o.blocks = r.metrics.blocks;
    for (std::uint32_t i = 0; i < n; ++i) {
      const NodeId& id = r.node_ids[i];
      const auto* rec = r.ledger.record(id);
      o.penalties.push_back(rec ? rec->penalties : 0);
      o.ctr.push_back(r.ledger.ctr_of(id));
      const auto& roster = r.outcomes.empty() ? std::vector<NodeId>{} : r.outcomes.back().participants;
      o.on_roster.push_back(std::find(roster.begin(), roster.end(), id) != roster.end());
      o.suspended.push_back(rec != nullptr && rec->status == voter::VoterStatus::suspended);
    }
    c.consistent = r.passed() && observed_label(r, n) == c.label;
    table.cases.push_back(std::move(c));
  }
  return table;
}

bool StateTable::passed() const {
  return !cases.empty() && std::all_of(cases.begin(), cases.end(), [](const StateCase& c) { return c.matches(); });
}

json StateTable::to_json() const {
  json rows = json::array();
  std::size_t matched = 0;
  for (const auto& c : cases) {
    std::string b;
    for (Behavior x : c.behaviors) b += to_char(x);
    matched += c.matches();
    rows.push_back({{"behaviors", b},
                    {"state", c.label},
                    {"match", c.matches()},
                    {"expected", c.expected.to_json()},
                    {"observed", c.observed.to_json()}});
  }
  return {{"n", n}, {"combinations", cases.size()}, {"matched", matched}, {"result", passed() ? "PASS" : "FAIL"},
          {"cases", rows}};
}

std::string StateTable::render() const {
  std::ostringstream os;
  os << "behaviors  state    outcome    blocks  penalties  match\n";
  for (const auto& c : cases) {
    std::string b;
    for (Behavior x : c.behaviors) b += to_char(x);
    std::string pen;
    for (auto p : c.observed.penalties) pen += std::to_string(p);
    os << b << std::string(11 - std::min<std::size_t>(b.size(), 10), ' ') << c.label
       << std::string(9 - std::min<std::size_t>(c.label.size(), 8), ' ') << c.observed.kind
       << std::string(11 - std::min<std::size_t>(c.observed.kind.size(), 10), ' ') << c.observed.blocks
       << "       " << pen << std::string(11 - std::min<std::size_t>(pen.size(), 10), ' ')
       << (c.matches() ? "yes" : "NO") << "\n";
  }
  os << cases.size() << " combinations, " << (passed() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

}  // namespace rdv::sim
