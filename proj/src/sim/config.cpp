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

#include "sim/config.hpp"

#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace rdv::sim {

using nlohmann::json;

namespace {

std::string display_path(const std::string& pointer) {
  if (pointer.empty()) return "<root>";
  std::string out;
  std::size_t i = 1;
  while (i <= pointer.size()) {
    const std::size_t j = pointer.find('/', i);
    const std::string part = pointer.substr(i, j == std::string::npos ? std::string::npos : j - i);
    const bool index = !part.empty() && part.find_first_not_of("0123456789") == std::string::npos;
    if (index) {
      out += "[" + part + "]";
    } else {
      if (!out.empty()) out += ".";
      out += part;
    }
    if (j == std::string::npos) break;
    i = j + 1;
  }
  return out;
}

std::string format_error(const std::string& pointer, int line, const std::string& message) {
  std::string out;
  if (line > 0) out = "line " + std::to_string(line) + ": ";
  return out + display_path(pointer) + ": " + message;
}

[[noreturn]] void fail(const std::string& pointer, const std::string& message) {
  throw ConfigError(pointer, 0, format_error(pointer, 0, message));
}

// Typed access to one JSON object; rejects keys that were never read.
class Fields {
 public:
  Fields(const json& obj, std::string pointer) : obj_(obj), ptr_(std::move(pointer)) {
    if (!obj_.is_object()) fail(ptr_, "expected an object");
  }

  bool has(const std::string& key) {
    used_.insert(key);
    return obj_.contains(key);
  }

  const json& at(const std::string& key) {
    used_.insert(key);
    if (!obj_.contains(key)) fail(ptr_ + "/" + key, "required field missing");
    return obj_.at(key);
  }

  std::string child(const std::string& key) const { return ptr_ + "/" + key; }

  std::int64_t integer(const std::string& key, std::optional<std::int64_t> def = std::nullopt,
                       std::int64_t lo = std::numeric_limits<std::int64_t>::min(),
                       std::int64_t hi = std::numeric_limits<std::int64_t>::max()) {
    if (!has(key)) {
      if (!def) fail(child(key), "required field missing");
      return *def;
    }
    const json& v = obj_.at(key);
    if (!v.is_number_integer()) fail(child(key), "expected an integer");
    std::int64_t x = 0;
    if (v.is_number_unsigned()) {
      const auto u = v.get<std::uint64_t>();
      if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) fail(child(key), "out of range");
      x = static_cast<std::int64_t>(u);
    } else {
      x = v.get<std::int64_t>();
    }
    if (x < lo) fail(child(key), "must be >= " + std::to_string(lo));
    if (x > hi) fail(child(key), "must be <= " + std::to_string(hi));
    return x;
  }

  std::uint64_t u64(const std::string& key, std::uint64_t def) {
    if (!has(key)) return def;
    const json& v = obj_.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      fail(child(key), "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  double number(const std::string& key, double def, double lo, double hi) {
    if (!has(key)) return def;
    const json& v = obj_.at(key);
    if (!v.is_number()) fail(child(key), "expected a number");
    const double x = v.get<double>();
    if (x < lo || x > hi) fail(child(key), "must be within [" + fmt(lo) + ", " + fmt(hi) + "]");
    return x;
  }

  bool boolean(const std::string& key, bool def) {
    if (!has(key)) return def;
    const json& v = obj_.at(key);
    if (!v.is_boolean()) fail(child(key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key, std::optional<std::string> def = std::nullopt) {
    if (!has(key)) {
      if (!def) fail(child(key), "required field missing");
      return *def;
    }
    const json& v = obj_.at(key);
    if (!v.is_string()) fail(child(key), "expected a string");
    return v.get<std::string>();
  }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!used_.count(key)) fail(child(key), "unknown field");
    }
  }

 private:
  static std::string fmt(double d) {
    std::ostringstream os;
    os << d;
    return os.str();
  }

  const json& obj_;
  std::string ptr_;
  std::set<std::string> used_;
};

Strategy parse_strategy(const std::string& s, const std::string& pointer) {
  if (s == "honest") return Strategy::honest;
  if (s == "dissenter") return Strategy::dissenter;
  if (s == "abstainer") return Strategy::abstainer;
  if (s == "equivocator") return Strategy::equivocator;
  if (s == "fixed_vote") return Strategy::fixed_vote;
  fail(pointer, "unknown strategy '" + s + "' (honest, dissenter, abstainer, equivocator, fixed_vote)");
}

TxKind parse_kind(const std::string& s, const std::string& pointer) {
  if (s == "transfer") return TxKind::transfer;
  if (s == "register") return TxKind::reg;
  if (s == "leave") return TxKind::leave;
  if (s == "ctr_exchange") return TxKind::ctr_exchange;
  fail(pointer, "unknown kind '" + s + "' (transfer, register, leave, ctr_exchange)");
}

const char* kind_name(TxKind k) {
  switch (k) {
    case TxKind::reg:
      return "register";
    case TxKind::leave:
      return "leave";
    case TxKind::ctr_exchange:
      return "ctr_exchange";
    default:
      return "transfer";
  }
}

VoterSpec parse_voter(const json& j, const std::string& ptr) {
  VoterSpec v;
  if (j.is_string()) {
    v.strategy = parse_strategy(j.get<std::string>(), ptr);
    return v;
  }
  Fields f(j, ptr);
  v.strategy = parse_strategy(f.string("strategy", "honest"), f.child("strategy"));
  v.flip_probability = f.number("flip_probability", v.strategy == Strategy::dissenter ? 1.0 : 0.0, 0.0, 1.0);
  v.silent_rounds = static_cast<std::uint32_t>(
      f.integer("silent_rounds", v.strategy == Strategy::abstainer ? 1 : 0, 0, std::numeric_limits<std::uint32_t>::max()));
  v.silent_from = static_cast<std::uint32_t>(f.integer("silent_from", 0, 0, std::numeric_limits<std::uint32_t>::max()));
  v.value = static_cast<std::uint8_t>(f.integer("value", 1, 0, 1));
  v.withhold_signature = f.boolean("withhold_signature", false);
  f.finish();
  return v;
}

std::uint32_t node_index(Fields& f, const std::string& key) {
  return static_cast<std::uint32_t>(f.integer(key, std::nullopt, 0, std::numeric_limits<std::uint32_t>::max()));
}

ScenarioConfig parse_document(const json& doc) {
  ScenarioConfig c;
  Fields root(doc, "");
  c.name = root.string("name", "");
  c.seed = root.u64("seed", 0);
  c.key_seed = root.u64("key_seed", 0);

  const json& voters = root.at("voters");
  if (voters.is_number_integer()) {
    const auto n = root.integer("voters", std::nullopt, 1, 1000);
    c.voters.assign(static_cast<std::size_t>(n), VoterSpec{});
  } else if (voters.is_array()) {
    for (std::size_t i = 0; i < voters.size(); ++i) c.voters.push_back(parse_voter(voters[i], "/voters/" + std::to_string(i)));
  } else {
    fail("/voters", "expected a count or a list of voter strategies");
  }
  c.ordinary_nodes = static_cast<std::uint32_t>(root.integer("ordinary_nodes", 0, 0, 1000));

  if (root.has("params")) {
    Fields p(doc.at("params"), "/params");
    c.params.delta = p.integer("delta", c.params.delta);
    c.params.pi = p.integer("pi", c.params.pi);
    c.params.deposit = static_cast<std::uint32_t>(p.integer("deposit", c.params.deposit, 0, 1 << 20));
    const std::int64_t default_penalty = std::max<std::int64_t>(1, c.params.deposit / 4);
    c.params.penalty = static_cast<std::uint32_t>(p.integer("penalty", default_penalty, 0, 1 << 20));
    c.params.clock.m = p.integer("m", c.params.clock.m);
    c.params.clock.slack = p.integer("slack", c.params.clock.slack);
    c.params.allow_bootstrap_debt = p.boolean("allow_bootstrap_debt", false);
    p.finish();
  }

  const std::size_t nodes = c.node_count();
  if (root.has("initial_coins")) {
    const json& ic = doc.at("initial_coins");
    if (ic.is_array()) {
      if (ic.size() != nodes) fail("/initial_coins", "expected one entry per node (" + std::to_string(nodes) + ")");
      for (std::size_t i = 0; i < ic.size(); ++i) {
        if (!ic[i].is_number_integer() || ic[i].get<std::int64_t>() < 0 || ic[i].get<std::int64_t>() > 100000) {
          fail("/initial_coins/" + std::to_string(i), "expected an integer in [0, 100000]");
        }
        c.initial_coins.push_back(ic[i].get<std::uint32_t>());
      }
    } else {
      const auto n = root.integer("initial_coins", std::nullopt, 0, 100000);
      c.initial_coins.assign(nodes, static_cast<std::uint32_t>(n));
    }
  } else {
    c.initial_coins.assign(nodes, 10);
  }

  if (root.has("delay")) {
    Fields d(doc.at("delay"), "/delay");
    const std::string model = d.string("model", "fixed");
    if (model == "fixed") {
      c.delay.kind = DelayModel::Kind::fixed;
      c.delay.min = c.delay.max = d.integer("ticks", 1);
    } else if (model == "uniform") {
      c.delay.kind = DelayModel::Kind::uniform;
      c.delay.min = d.integer("min", 1);
      c.delay.max = d.integer("max");
    } else {
      fail("/delay/model", "unknown delay model '" + model + "' (fixed, uniform)");
    }
    d.finish();
  } else {
    c.delay.min = 1;
    c.delay.max = c.params.clock.m;
    c.delay.kind = DelayModel::Kind::uniform;
  }

  if (root.has("transactions")) {
    const json& txs = doc.at("transactions");
    if (!txs.is_array()) fail("/transactions", "expected a list");
    for (std::size_t i = 0; i < txs.size(); ++i) {
      Fields t(txs[i], "/transactions/" + std::to_string(i));
      TxSpec s;
      s.at = t.integer("at", std::nullopt, 0);
      s.kind = parse_kind(t.string("kind", "transfer"), t.child("kind"));
      s.sender = node_index(t, "sender");
      s.receiver = s.kind == TxKind::transfer || s.kind == TxKind::ctr_exchange ? node_index(t, "receiver") : s.sender;
      s.coins = static_cast<std::uint32_t>(t.integer("coins", 1, 1, 100000));
      s.units = s.kind == TxKind::ctr_exchange ? static_cast<std::uint64_t>(t.integer("units", std::nullopt, 1)) : 0;
      s.debt = s.kind == TxKind::reg && t.boolean("debt", false);
      t.finish();
      c.transactions.push_back(s);
    }
  }

  if (root.has("tx_generator")) {
    Fields g(doc.at("tx_generator"), "/tx_generator");
    GeneratorSpec s;
    s.count = static_cast<std::uint32_t>(g.integer("count", std::nullopt, 0, 1000000));
    s.start = g.integer("start", 1, 1);
    s.min_gap = g.integer("min_gap", 1, 0);
    s.max_gap = g.integer("max_gap", 10, 0);
    if (s.max_gap < s.min_gap) fail("/tx_generator/max_gap", "must be >= min_gap");
    s.max_coins = static_cast<std::uint32_t>(g.integer("max_coins", 1, 1, 1000));
    g.finish();
    c.generator = s;
  }

  c.duration = root.integer("duration", c.duration, 1);

  if (root.has("adversaries")) {
    const json& adv = doc.at("adversaries");
    if (!adv.is_array()) fail("/adversaries", "expected a list");
    for (std::size_t i = 0; i < adv.size(); ++i) {
      Fields a(adv[i], "/adversaries/" + std::to_string(i));
      AdversarySpec s;
      const std::string type = a.string("type");
      s.node = node_index(a, "node");
      s.at = a.integer("at", std::nullopt, 0);
      if (type == "double_spender") {
        s.kind = AdversarySpec::Kind::double_spender;
        s.stagger = a.integer("stagger", 0, 0);
        s.vendor = node_index(a, "vendor");
        if (a.has("collider")) s.collider = node_index(a, "collider");
      } else if (type == "timestamp_forger") {
        s.kind = AdversarySpec::Kind::timestamp_forger;
        s.backdate = a.integer("backdate", std::nullopt, 0);
        s.receiver = node_index(a, "receiver");
      } else {
        fail(a.child("type"), "unknown adversary '" + type + "' (double_spender, timestamp_forger)");
      }
      a.finish();
      c.adversaries.push_back(s);
    }
  }

  if (root.has("expect")) {
    const json& e = doc.at("expect");
    if (!e.is_object()) fail("/expect", "expected an object of metric name to value");
    c.expect = e;
  }
  root.finish();
  c.validate();
  return c;
}

struct PointerScanner {
  std::string_view text;
  std::size_t pos = 0;
  int line = 1;
  std::vector<std::pair<std::string, int>> out;

  void ws() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\r' || text[pos] == '\n')) {
      if (text[pos] == '\n') ++line;
      ++pos;
    }
  }

  std::string str() {
    std::string s;
    ++pos;
    while (pos < text.size() && text[pos] != '"') {
      if (text[pos] == '\\' && pos + 1 < text.size()) {
        s += text[pos + 1];
        pos += 2;
        continue;
      }
      if (text[pos] == '\n') ++line;
      s += text[pos++];
    }
    ++pos;
    return s;
  }

  void value(const std::string& ptr) {
    ws();
    if (pos >= text.size()) return;
    out.emplace_back(ptr, line);
    const char ch = text[pos];
    if (ch == '{') {
      ++pos;
      for (;;) {
        ws();
        if (pos >= text.size()) return;
        if (text[pos] == '}') {
          ++pos;
          return;
        }
        if (text[pos] == ',') {
          ++pos;
          continue;
        }
        if (text[pos] != '"') return;
        const std::string key = str();
        ws();
        if (pos < text.size() && text[pos] == ':') ++pos;
        value(ptr + "/" + key);
      }
    } else if (ch == '[') {
      ++pos;
      std::size_t index = 0;
      for (;;) {
        ws();
        if (pos >= text.size()) return;
        if (text[pos] == ']') {
          ++pos;
          return;
        }
        if (text[pos] == ',') {
          ++pos;
          continue;
        }
        value(ptr + "/" + std::to_string(index++));
      }
    } else if (ch == '"') {
      str();
    } else {
      while (pos < text.size() && std::string_view(",]} \t\r\n").find(text[pos]) == std::string_view::npos) ++pos;
    }
  }
};

int line_of(const std::vector<std::pair<std::string, int>>& lines, std::string pointer) {
  for (;;) {
    for (const auto& [p, l] : lines) {
      if (p == pointer) return l;
    }
    if (pointer.empty()) return 0;
    pointer = pointer.substr(0, pointer.rfind('/'));
  }
}

}  // namespace

ConfigError::ConfigError(std::string path, int line, const std::string& message)
    : Error(message), path_(std::move(path)), line_(line) {}

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::honest:
      return "honest";
    case Strategy::dissenter:
      return "dissenter";
    case Strategy::abstainer:
      return "abstainer";
    case Strategy::equivocator:
      return "equivocator";
    case Strategy::fixed_vote:
      return "fixed_vote";
  }
  return "unknown";
}

void ScenarioConfig::validate() const {
  try {
    params.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    const std::string msg = e.what();
    const std::string field = msg.substr(0, msg.find(':'));
    fail("/" + std::string(field).replace(field.find('.'), 1, "/"), msg.substr(msg.find(':') + 2));
  }
  if (voters.empty()) fail("/voters", "at least one voter is required");
  if (params.clock.m < 1) fail("/params/m", "must be >= 1 in simulation (deliveries take at least one tick)");
  if (delay.min < 1) fail("/delay/min", "must be >= 1");
  if (delay.max < delay.min) fail("/delay/max", "must be >= min");
  if (delay.max > params.clock.m) {
    fail("/delay/max", "must be <= params.m (" + std::to_string(params.clock.m) + ")");
  }
  const std::size_t n = node_count();
  if (initial_coins.size() != n) fail("/initial_coins", "expected one entry per node");
  for (std::size_t i = 0; i < voters.size(); ++i) {
    if (initial_coins[i] < params.deposit) {
      fail("/initial_coins", "voter " + std::to_string(i) + " needs at least the deposit of " +
                                 std::to_string(params.deposit) + " coins");
    }
  }
  auto check_node = [&](std::uint32_t idx, const std::string& ptr) {
    if (idx >= n) fail(ptr, "node index " + std::to_string(idx) + " out of range (" + std::to_string(n) + " nodes)");
  };
  for (std::size_t i = 0; i < transactions.size(); ++i) {
    const std::string p = "/transactions/" + std::to_string(i);
    check_node(transactions[i].sender, p + "/sender");
    check_node(transactions[i].receiver, p + "/receiver");
    if (transactions[i].kind == TxKind::ctr_exchange && transactions[i].sender == transactions[i].receiver) {
      fail(p + "/receiver", "exchange counterparty must differ from the sender");
    }
    if (transactions[i].debt && !params.allow_bootstrap_debt) {
      fail(p + "/debt", "requires params.allow_bootstrap_debt");
    }
  }
  for (std::size_t i = 0; i < adversaries.size(); ++i) {
    const std::string p = "/adversaries/" + std::to_string(i);
    const auto& a = adversaries[i];
    check_node(a.node, p + "/node");
    if (a.kind == AdversarySpec::Kind::double_spender) {
      check_node(a.vendor, p + "/vendor");
      const std::uint32_t collider = a.collider.value_or(a.node);
      check_node(collider, p + "/collider");
      if (collider == a.vendor) fail(p + "/collider", "must differ from vendor");
    } else {
      check_node(a.receiver, p + "/receiver");
    }
  }
  if (duration < 1) fail("/duration", "must be >= 1");
}

ScenarioConfig parse_scenario(std::string_view text, std::string_view source) {
  const std::string src(source);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t at = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    int line = 1;
    for (std::size_t i = 0; i < at; ++i) line += text[i] == '\n';
    std::string what = e.what();
    const auto colon = what.find("parse error");
    if (colon != std::string::npos) what = what.substr(colon);
    throw ConfigError("", line, src + ":" + std::to_string(line) + ": malformed JSON: " + what);
  }
  try {
    ScenarioConfig c = parse_document(doc);
    return c;
  } catch (const ConfigError& e) {
    const int line = line_of(json_pointer_lines(text), e.path());
    const std::string msg = e.what();
    throw ConfigError(e.path(), line,
                      src + ":" + std::to_string(line) + ": " + display_path(e.path()) + ": " +
                          msg.substr(msg.find(": ") + 2));
  }
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", 0, path + ": cannot open scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  ScenarioConfig c = parse_scenario(buf.str(), path);
  if (c.name.empty()) {
    const auto slash = path.find_last_of('/');
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    c.name = base.substr(0, base.rfind('.'));
  }
  return c;
}

std::vector<std::pair<std::string, int>> json_pointer_lines(std::string_view text) {
  PointerScanner s{text, 0, 1, {}};
  s.value("");
  return std::move(s.out);
}

json to_json(const ScenarioConfig& c) {
  json voters = json::array();
  for (const auto& v : c.voters) {
    json j = {{"strategy", to_string(v.strategy)}};
    if (v.strategy == Strategy::dissenter) j["flip_probability"] = v.flip_probability;
    if (v.strategy == Strategy::abstainer) {
      j["silent_rounds"] = v.silent_rounds;
      j["silent_from"] = v.silent_from;
    }
    if (v.strategy == Strategy::fixed_vote) j["value"] = v.value;
    if (v.withhold_signature) j["withhold_signature"] = true;
    voters.push_back(j);
  }
  json txs = json::array();
  for (const auto& t : c.transactions) {
    json j = {{"at", t.at}, {"kind", kind_name(t.kind)}, {"sender", t.sender}};
    if (t.kind == TxKind::transfer || t.kind == TxKind::ctr_exchange) {
      j["receiver"] = t.receiver;
      j["coins"] = t.coins;
    }
    if (t.kind == TxKind::ctr_exchange) j["units"] = t.units;
    if (t.debt) j["debt"] = true;
    txs.push_back(j);
  }
  json adv = json::array();
  for (const auto& a : c.adversaries) {
    if (a.kind == AdversarySpec::Kind::double_spender) {
      json j = {{"type", "double_spender"}, {"node", a.node}, {"at", a.at}, {"stagger", a.stagger}, {"vendor", a.vendor}};
      if (a.collider) j["collider"] = *a.collider;
      adv.push_back(j);
    } else {
      adv.push_back({{"type", "timestamp_forger"},
                     {"node", a.node},
                     {"at", a.at},
                     {"backdate", a.backdate},
                     {"receiver", a.receiver}});
    }
  }
  json out = {
      {"name", c.name},
      {"seed", c.seed},
      {"key_seed", c.key_seed},
      {"voters", voters},
      {"ordinary_nodes", c.ordinary_nodes},
      {"params",
       {{"delta", c.params.delta},
        {"pi", c.params.pi},
        {"deposit", c.params.deposit},
        {"penalty", c.params.penalty},
        {"m", c.params.clock.m},
        {"slack", c.params.clock.slack},
        {"allow_bootstrap_debt", c.params.allow_bootstrap_debt}}},
      {"initial_coins", c.initial_coins},
      {"delay", c.delay.kind == DelayModel::Kind::fixed
                    ? json{{"model", "fixed"}, {"ticks", c.delay.min}}
                    : json{{"model", "uniform"}, {"min", c.delay.min}, {"max", c.delay.max}}},
      {"transactions", txs},
      {"duration", c.duration},
      {"adversaries", adv},
      {"expect", c.expect},
  };
  if (c.generator) {
    out["tx_generator"] = {{"count", c.generator->count},
                           {"start", c.generator->start},
                           {"min_gap", c.generator->min_gap},
                           {"max_gap", c.generator->max_gap},
                           {"max_coins", c.generator->max_coins}};
  }
  return out;
}

}  // namespace rdv::sim
