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

#include "sim/simulation.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <memory>
#include <queue>
#include <random>
#include <set>
#include <sstream>

#include "core/serialize.hpp"
#include "core/verify.hpp"
#include "ledger/ledger.hpp"
#include "sim/node.hpp"

namespace rdv::sim {

using nlohmann::json;

namespace {

enum class EventClass : std::uint8_t { deliver = 0, action = 1, timer = 2 };

struct Action {
  enum class Kind : std::uint8_t { scheduled, generated, double_spend_first, double_spend_second, forge };
  Kind kind = Kind::scheduled;
  TxSpec tx;
  std::size_t adversary = 0;
  std::size_t attempt = 0;
};

struct Event {
  Tick at = 0;
  EventClass cls = EventClass::timer;
  std::uint64_t seq = 0;
  std::size_t node = 0;
  std::shared_ptr<const Bytes> message;
  std::size_t action = 0;
};

struct Later {
  bool operator()(const Event& a, const Event& b) const {
    if (a.at != b.at) return a.at > b.at;
    if (a.cls != b.cls) return a.cls > b.cls;
    return a.seq > b.seq;
  }
};

class Simulation final : public Host {
 public:
  explicit Simulation(const ScenarioConfig& config);

  RunResult execute();

  void broadcast(std::size_t from, Envelope env) override;
  void schedule(std::size_t node, Tick at) override;
  void log(std::size_t node, json event) override;
  const Verifier& verifier() const override { return verifier_; }

 private:
  void push(Event e);
  void run_action(const Action& a);
  void send_tx(std::size_t from, const Transaction& tx, const char* origin);
  std::optional<Transaction> build_tx(const TxSpec& spec);
  std::size_t pick_observer() const;

  ScenarioConfig config_;
  Verifier verifier_;
  std::vector<KeyPair> keys_;
  std::set<NodeId> adversarial_;
  std::vector<std::unique_ptr<Node>> nodes_;
  std::vector<std::set<Tick>> timers_;
  std::vector<Action> actions_;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::uint64_t seq_ = 0;
  Tick now_ = 0;
  std::mt19937_64 net_rng_;
  std::mt19937_64 gen_rng_;
  std::vector<std::string> events_;
  std::vector<DoubleSpendAttempt> attempts_;
  std::vector<std::pair<std::size_t, CoinId>> attempt_coins_;
  std::vector<ForgeryResult> forgeries_;
  std::uint64_t txs_broadcast_ = 0;
};

Simulation::Simulation(const ScenarioConfig& config) : config_(config) {
  config_.validate();
  std::seed_seq net{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32), 0x6e6574u};
  std::seed_seq gen{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32), 0x67656eu};
  net_rng_.seed(net);
  gen_rng_.seed(gen);

  const std::size_t n = config_.node_count();
  for (std::size_t i = 0; i < n; ++i) keys_.push_back(KeyPair::derive(config_.key_seed, i));
  for (std::size_t i = 0; i < config_.voters.size(); ++i) {
    if (config_.voters[i].strategy != Strategy::honest) adversarial_.insert(keys_[i].id());
  }
  for (const auto& a : config_.adversaries) adversarial_.insert(keys_[a.node].id());

  MintPayload mint;
  for (std::size_t i = 0; i < n; ++i) {
    if (config_.initial_coins[i] > 0) mint.allocations.push_back(Allocation{keys_[i].id(), config_.initial_coins[i]});
  }
  for (std::size_t i = 0; i < config_.voters.size(); ++i) mint.voters.push_back(keys_[i].id());
  mint.deposit = config_.params.deposit;
  const Block genesis = make_genesis(std::move(mint));

  timers_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::optional<VoterSpec> role;
    if (i < config_.voters.size()) role = config_.voters[i];
    nodes_.push_back(
        std::make_unique<Node>(i, keys_[i], role, genesis, config_.params, config_.seed, *this, adversarial_));
  }

  for (const auto& t : config_.transactions) actions_.push_back(Action{Action::Kind::scheduled, t, 0, 0});
  if (config_.generator) {
    std::vector<std::size_t> senders;
    for (std::size_t i = 0; i < n; ++i) {
      if (!adversarial_.count(keys_[i].id())) senders.push_back(i);
    }
    if (senders.empty() || n < 2) senders.clear();
    Tick at = config_.generator->start;
    for (std::uint32_t k = 0; k < config_.generator->count && !senders.empty(); ++k) {
      TxSpec s;
      s.at = at;
      s.sender = static_cast<std::uint32_t>(senders[uniform_int(gen_rng_, 0, senders.size() - 1)]);
      s.receiver = static_cast<std::uint32_t>(uniform_int(gen_rng_, 0, n - 2));
      if (s.receiver >= s.sender) ++s.receiver;
      s.coins = static_cast<std::uint32_t>(uniform_int(gen_rng_, 1, config_.generator->max_coins));
      actions_.push_back(Action{Action::Kind::generated, s, 0, 0});
      at += static_cast<Tick>(uniform_int(gen_rng_, static_cast<std::uint64_t>(config_.generator->min_gap),
                                          static_cast<std::uint64_t>(config_.generator->max_gap)));
    }
  }
  for (std::size_t i = 0; i < config_.adversaries.size(); ++i) {
    const auto& a = config_.adversaries[i];
    TxSpec s;
    s.at = a.at;
    s.sender = a.node;
    if (a.kind == AdversarySpec::Kind::double_spender) {
      actions_.push_back(Action{Action::Kind::double_spend_first, s, i, 0});
    } else {
      actions_.push_back(Action{Action::Kind::forge, s, i, 0});
    }
  }
  for (std::size_t i = 0; i < actions_.size(); ++i) {
    Event e;
    e.at = actions_[i].tx.at;
    e.cls = EventClass::action;
    e.action = i;
    push(std::move(e));
  }
}

void Simulation::push(Event e) {
  e.seq = seq_++;
  queue_.push(std::move(e));
}

void Simulation::broadcast(std::size_t from, Envelope env) {
  env.broadcast_at = now_;
  auto bytes = std::make_shared<const Bytes>(encode_envelope(env));
  (void)from;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    Tick delay = config_.delay.min;
    if (config_.delay.kind == DelayModel::Kind::uniform) {
      delay = static_cast<Tick>(uniform_int(net_rng_, static_cast<std::uint64_t>(config_.delay.min),
                                            static_cast<std::uint64_t>(config_.delay.max)));
    }
    Event e;
    e.at = now_ + delay;
    e.cls = EventClass::deliver;
    e.node = i;
    e.message = bytes;
    push(std::move(e));
  }
}

void Simulation::schedule(std::size_t node, Tick at) {
  at = std::max(at, now_);
  if (!timers_[node].insert(at).second) return;
  Event e;
  e.at = at;
  e.cls = EventClass::timer;
  e.node = node;
  push(std::move(e));
}

void Simulation::log(std::size_t node, json event) {
  event["node"] = node;
  events_.push_back(event.dump());
}

std::optional<Transaction> Simulation::build_tx(const TxSpec& spec) {
  Node& sender = *nodes_[spec.sender];
  const std::uint64_t ctr = sender.ledger().ctr_of(sender.id());
  switch (spec.kind) {
    case TxKind::transfer: {
      auto coins = sender.pick_coins(spec.coins);
      if (coins.empty()) return std::nullopt;
      return make_transfer(sender.key(), keys_[spec.receiver].id(), std::move(coins), now_, ctr);
    }
    case TxKind::reg: {
      std::vector<CoinId> coins;
      if (!spec.debt) {
        coins = sender.pick_coins(config_.params.deposit);
        if (coins.empty()) return std::nullopt;
      }
      return make_register(sender.key(), std::move(coins), now_, ctr);
    }
    case TxKind::leave:
      return make_leave(sender.key(), now_, ctr);
    case TxKind::ctr_exchange: {
      Node& counterparty = *nodes_[spec.receiver];
      auto coins = counterparty.pick_coins(spec.coins);
      if (coins.empty()) return std::nullopt;
      auto tx = make_ctr_exchange(sender.key(), counterparty.key(), std::move(coins), spec.units, now_, ctr);
      counterparty.reserve(tx);
      return tx;
    }
    case TxKind::mint:
      break;
  }
  return std::nullopt;
}

void Simulation::send_tx(std::size_t from, const Transaction& tx, const char* origin) {
  nodes_[from]->reserve(tx);
  ++txs_broadcast_;
  log(from, {{"t", now_},
             {"ev", "tx-broadcast"},
             {"origin", origin},
             {"tx", tx.id.hex().substr(0, 12)},
             {"kind", to_string(tx.kind)},
             {"tsp", tx.tsp},
             {"coins", tx.coins.size()}});
  broadcast(from, Envelope{announce_kind(tx.kind), now_, tx});
}

void Simulation::run_action(const Action& a) {
  switch (a.kind) {
    case Action::Kind::scheduled:
    case Action::Kind::generated: {
      auto tx = build_tx(a.tx);
      if (!tx) {
        log(a.tx.sender, {{"t", now_}, {"ev", "tx-skipped"}, {"reason", "insufficient spendable coins"}});
        return;
      }
      send_tx(a.tx.sender, *tx, a.kind == Action::Kind::scheduled ? "schedule" : "generator");
      return;
    }
    case Action::Kind::double_spend_first: {
      const auto& adv = config_.adversaries[a.adversary];
      Node& self = *nodes_[adv.node];
      auto coins = self.pick_coins(1);
      if (coins.empty()) {
        log(adv.node, {{"t", now_}, {"ev", "tx-skipped"}, {"reason", "double spender owns no coin"}});
        return;
      }
      const auto tx = make_transfer(self.key(), keys_[adv.vendor].id(), coins, now_, self.ledger().ctr_of(self.id()));
      attempts_.push_back(DoubleSpendAttempt{tx.id, {}, false, false, false});
      attempt_coins_.emplace_back(adv.node, coins.front());
      send_tx(adv.node, tx, "double-spender");
      Event e;
      e.at = now_ + adv.stagger;
      e.cls = EventClass::action;
      actions_.push_back(Action{Action::Kind::double_spend_second, a.tx, a.adversary, attempts_.size() - 1});
      e.action = actions_.size() - 1;
      push(std::move(e));
      return;
    }
    case Action::Kind::double_spend_second: {
      const auto& adv = config_.adversaries[a.adversary];
      Node& self = *nodes_[adv.node];
      const CoinId coin = attempt_coins_[a.attempt].second;
      const auto tx = make_transfer(self.key(), keys_[adv.collider.value_or(adv.node)].id(), {coin}, now_,
                                    self.ledger().ctr_of(self.id()));
      attempts_[a.attempt].collider_tx = tx.id;
      send_tx(adv.node, tx, "double-spender");
      return;
    }
    case Action::Kind::forge: {
      const auto& adv = config_.adversaries[a.adversary];
      Node& self = *nodes_[adv.node];
      auto coins = self.pick_coins(1);
      if (coins.empty()) {
        log(adv.node, {{"t", now_}, {"ev", "tx-skipped"}, {"reason", "forger owns no coin"}});
        return;
      }
      const auto tx = make_transfer(self.key(), keys_[adv.receiver].id(), std::move(coins), now_ - adv.backdate,
                                    self.ledger().ctr_of(self.id()));
      forgeries_.push_back(ForgeryResult{adv.backdate, tx.id, false});
      send_tx(adv.node, tx, "timestamp-forger");
      return;
    }
  }
}

std::size_t Simulation::pick_observer() const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (i < config_.voters.size() && !adversarial_.count(keys_[i].id())) return i;
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!adversarial_.count(keys_[i].id())) return i;
  }
  return 0;
}

RunResult Simulation::execute() {
  while (!queue_.empty()) {
    Event e = queue_.top();
    if (e.at > config_.duration) break;
    queue_.pop();
    now_ = e.at;
    switch (e.cls) {
      case EventClass::deliver:
        nodes_[e.node]->deliver(now_, *e.message);
        break;
      case EventClass::action: {
        const Action a = actions_[e.action];
        run_action(a);
        break;
      }
      case EventClass::timer:
        timers_[e.node].erase(now_);
        nodes_[e.node]->on_timer(now_);
        break;
    }
  }

  RunResult r;
  r.config = config_;
  r.observer = pick_observer();
  const Node& obs = *nodes_[r.observer];
  for (const auto& n : nodes_) {
    r.node_ids.push_back(n->id());
    r.chains.push_back(n->chain());
    for (const auto& v : n->stats().invariant_violations) {
      r.invariant_violations.push_back("node " + std::to_string(n->index()) + ": " + v);
    }
  }
  r.ledger = obs.ledger();
  r.outcomes = obs.outcomes();
  r.events = std::move(events_);

  const NodeStats& s = obs.stats();
  Metrics& m = r.metrics;
  m.blocks = obs.chain().size() - 1;
  m.rounds = s.rounds;
  m.accepted = s.accepted;
  m.rejected = s.rejected;
  m.aborted = s.aborted;
  m.ties = s.ties;
  m.delta_removals = s.delta_removals;
  m.signature_removals = s.signature_removals;
  m.reinstatements = s.reinstatements;
  m.penalties = s.penalties;
  m.coins_blocked = r.ledger.blocked_coins().size();
  m.ctr_awarded = s.ctr_awarded;
  m.demotions = s.demotions;
  m.equivocations = s.equivocations;
  m.bad_messages = s.bad_messages;
  m.blocks_refused = s.blocks_refused;
  m.txs_broadcast = txs_broadcast_;
  m.txs_confirmed = s.confirmed_at.size();
  m.txs_dropped = s.dropped.size();
  m.txs_pending = obs.table().size();
  m.double_spent_flags = s.flagged_double_spent.size();
  m.assumption_violated = s.assumption_violated;
  for (const auto& [id, at] : s.confirmed_at) {
    auto it = s.announced_at.find(id);
    if (it != s.announced_at.end()) m.latencies.push_back(at - it->second);
  }
  if (!m.latencies.empty()) {
    double sum = 0;
    for (Tick l : m.latencies) sum += static_cast<double>(l);
    m.latency_mean = sum / static_cast<double>(m.latencies.size());
    m.latency_max = *std::max_element(m.latencies.begin(), m.latencies.end());
  }
  for (const auto& n : nodes_) {
    m.chain_lengths.push_back(n->chain().size());
    m.forks += n->stats().forks;
  }
  // Two different blocks at one height anywhere in the network count as forks.
  std::size_t longest = 0;
  for (const auto& c : r.chains) longest = std::max(longest, c.size());
  for (std::size_t h = 0; h < longest; ++h) {
    std::set<Hash> at_height;
    for (const auto& c : r.chains) {
      if (h < c.size()) at_height.insert(c[h].block_hash);
    }
    m.forks += at_height.size() - 1;
  }

  for (auto& a : attempts_) {
    a.detected = s.flagged_double_spent.count(a.vendor_tx) || s.flagged_double_spent.count(a.collider_tx);
    a.vendor_confirmed = s.confirmed_at.count(a.vendor_tx) > 0;
    a.collider_confirmed = s.confirmed_at.count(a.collider_tx) > 0;
    ++m.double_spends_attempted;
    m.double_spends_detected += a.detected;
    m.double_spends_confirmed += a.vendor_confirmed && a.collider_confirmed;
  }
  r.double_spends = attempts_;
  for (auto& f : forgeries_) f.confirmed = s.confirmed_at.count(f.tx_id) > 0;
  r.forgeries = forgeries_;

  // Built-in assertions.
  bool agree = true;
  for (const auto& c : r.chains) agree = agree && c == r.chains[r.observer];
  r.verdicts.push_back({"agreement", agree, agree ? "all nodes hold identical chains" : "chains differ across nodes"});
  r.verdicts.push_back({"no-fork", m.forks == 0, "fork counter " + std::to_string(m.forks)});
  r.verdicts.push_back({"conservation", r.invariant_violations.empty(),
                        r.invariant_violations.empty() ? "coins conserved at every round"
                                                       : r.invariant_violations.front()});
  {
    const auto& blocks = obs.chain().blocks();
    const auto v = verify_chain(blocks, registered_roster_history(blocks), verifier_, blocks.front().block_hash);
    r.verdicts.push_back({"chain-verifies", !v.has_value(),
                          v ? "height " + std::to_string(v->height) + ": " + v->violation.check : "ok"});
  }
  {
    const bool safe = m.double_spends_confirmed == 0 && m.double_spends_detected == m.double_spends_attempted;
    std::string detail = std::to_string(m.double_spends_attempted) + " attempted, " +
                         std::to_string(m.double_spends_detected) + " detected, " +
                         std::to_string(m.double_spends_confirmed) + " confirmed";
    if (m.assumption_violated) detail += " (honest-majority assumption violated)";
    r.verdicts.push_back({"double-spend-safety", safe || m.assumption_violated, detail});
  }
  const json mj = m.to_json();
  for (const auto& [key, expected] : config_.expect.items()) {
    if (!mj.contains(key)) {
      r.verdicts.push_back({"expect." + key, false, "unknown metric"});
      continue;
    }
    const bool ok = mj.at(key) == expected;
    r.verdicts.push_back({"expect." + key, ok, "expected " + expected.dump() + ", got " + mj.at(key).dump()});
  }
  return r;
}

}  // namespace

json Metrics::to_json() const {
  return {{"blocks", blocks},
          {"rounds", rounds},
          {"accepted_rounds", accepted},
          {"rejected_rounds", rejected},
          {"aborted_rounds", aborted},
          {"tie_rounds", ties},
          {"delta_removals", delta_removals},
          {"signature_removals", signature_removals},
          {"reinstatements", reinstatements},
          {"penalties", penalties},
          {"coins_blocked", coins_blocked},
          {"ctr_awarded", ctr_awarded},
          {"demotions", demotions},
          {"equivocations", equivocations},
          {"bad_messages", bad_messages},
          {"blocks_refused", blocks_refused},
          {"txs_broadcast", txs_broadcast},
          {"txs_confirmed", txs_confirmed},
          {"txs_dropped", txs_dropped},
          {"txs_pending", txs_pending},
          {"double_spends_attempted", double_spends_attempted},
          {"double_spends_detected", double_spends_detected},
          {"double_spends_confirmed", double_spends_confirmed},
          {"double_spent_flags", double_spent_flags},
          {"forks", forks},
          {"latency_mean", latency_mean},
          {"latency_max", latency_max},
          {"chain_lengths", chain_lengths},
          {"assumption_violated", assumption_violated}};
}

bool RunResult::passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.passed; });
}

json RunResult::report() const {
  json verdict_list = json::array();
  for (const auto& v : verdicts) verdict_list.push_back({{"name", v.name}, {"passed", v.passed}, {"detail", v.detail}});
  json tips = json::array();
  for (std::size_t i = 0; i < chains.size(); ++i) {
    tips.push_back({{"node", i},
                    {"id", node_ids[i].short_hex()},
                    {"height", chains[i].tip().height},
                    {"tip", chains[i].tip().block_hash.hex()}});
  }
  json forged = json::array();
  for (const auto& f : forgeries) {
    forged.push_back({{"backdate", f.backdate}, {"tx", f.tx_id.hex().substr(0, 12)}, {"confirmed", f.confirmed}});
  }
  json ds = json::array();
  for (const auto& a : double_spends) {
    ds.push_back({{"vendor_tx", a.vendor_tx.hex().substr(0, 12)},
                  {"collider_tx", a.collider_tx.hex().substr(0, 12)},
                  {"detected", a.detected},
                  {"vendor_confirmed", a.vendor_confirmed},
                  {"collider_confirmed", a.collider_confirmed}});
  }
  return {{"scenario", config.name},
          {"seed", config.seed},
          {"result", passed() ? "PASS" : "FAIL"},
          {"observer", observer},
          {"verdicts", verdict_list},
          {"metrics", metrics.to_json()},
          {"chain_tips", tips},
          {"forgeries", forged},
          {"double_spends", ds}};
}

std::string summarize(const json& report) {
  std::ostringstream os;
  const json& m = report.at("metrics");
  os << report.at("scenario").get<std::string>() << " (seed " << report.at("seed").get<std::uint64_t>()
     << "): " << report.at("result").get<std::string>() << ", " << m.at("blocks").get<std::uint64_t>()
     << " blocks\n";
  os << "  rounds: " << m.at("rounds") << " (accepted " << m.at("accepted_rounds") << ", rejected "
     << m.at("rejected_rounds") << ", aborted " << m.at("aborted_rounds") << ", ties " << m.at("tie_rounds") << ")\n";
  os << "  delta-removals: " << m.at("delta_removals") << ", reinstatements: " << m.at("reinstatements")
     << ", penalties: " << m.at("penalties") << ", CTR awarded: " << m.at("ctr_awarded") << "\n";
  os << "  double-spends attempted: " << m.at("double_spends_attempted")
     << ", detected: " << m.at("double_spends_detected") << ", confirmed: " << m.at("double_spends_confirmed")
     << "\n";
  os << "  txs: " << m.at("txs_broadcast") << " broadcast, " << m.at("txs_confirmed") << " confirmed, "
     << m.at("txs_dropped") << " dropped, " << m.at("txs_pending") << " pending; latency mean "
     << m.at("latency_mean").get<double>() << " max " << m.at("latency_max") << "\n";
  os << "  forks: " << m.at("forks");
  if (m.at("assumption_violated").get<bool>()) os << "  [assumption-violated]";
  os << "\n";
  for (const auto& v : report.at("verdicts")) {
    os << "  " << (v.at("passed").get<bool>() ? "ok   " : "FAIL ") << v.at("name").get<std::string>() << ": "
       << v.at("detail").get<std::string>() << "\n";
  }
  return os.str();
}

RunResult run(const ScenarioConfig& config) {
  Simulation sim(config);
  return sim.execute();
}

void write_artifacts(const RunResult& result, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  auto write = [&](const char* name, const std::string& data) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw Error("cannot write " + (dir / name).string());
    out << data;
  };
  const Bytes dump = encode_chain_dump(result.chains[result.observer].blocks());
  write("chain.rdv", std::string(dump.begin(), dump.end()));
  const Bytes state = ledger::serialize_state(result.ledger);
  write("ledger.bin", std::string(state.begin(), state.end()));
  json ledger = ledger::to_json(result.ledger);
  json rounds = json::array();
  for (const auto& o : result.outcomes) rounds.push_back(ledger::to_json(o));
  ledger["rounds"] = rounds;
  write("ledger.json", ledger.dump(2) + "\n");
  std::string log;
  for (const auto& e : result.events) log += e + "\n";
  write("events.jsonl", log);
  const json report = result.report();
  write("report.json", report.dump(2) + "\n");
  write("summary.txt", summarize(report));
}

}  // namespace rdv::sim
