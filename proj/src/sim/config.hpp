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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "core/types.hpp"
#include "voter/record.hpp"

namespace rdv::sim {

using voter::ProtocolParams;

// Scenario problem located in the source document. `line` is 0 when the
// location is unknown.
class ConfigError : public Error {
 public:
  ConfigError(std::string path, int line, const std::string& message);

  const std::string& path() const { return path_; }
  int line() const { return line_; }

 private:
  std::string path_;
  int line_;
};

enum class Strategy : std::uint8_t { honest, dissenter, abstainer, equivocator, fixed_vote };

const char* to_string(Strategy s);

struct VoterSpec {
  Strategy strategy = Strategy::honest;
  double flip_probability = 0.0;  // dissenter
  std::uint32_t silent_rounds = 0;  // abstainer: rounds on the roster spent silent
  std::uint32_t silent_from = 0;    // abstainer: roster rounds voted before going silent
  std::uint8_t value = 1;           // fixed_vote
  bool withhold_signature = false;
};

struct DelayModel {
  enum class Kind : std::uint8_t { fixed, uniform };
  Kind kind = Kind::fixed;
  Tick min = 1;
  Tick max = 1;
};

struct TxSpec {
  Tick at = 0;
  TxKind kind = TxKind::transfer;
  std::uint32_t sender = 0;
  std::uint32_t receiver = 0;
  std::uint32_t coins = 1;
  std::uint64_t units = 0;  // ctr_exchange
  bool debt = false;        // register with no coins
};

struct GeneratorSpec {
  std::uint32_t count = 0;
  Tick start = 1;
  Tick min_gap = 1;
  Tick max_gap = 10;
  std::uint32_t max_coins = 1;
};

struct AdversarySpec {
  enum class Kind : std::uint8_t { double_spender, timestamp_forger };
  Kind kind = Kind::double_spender;
  std::uint32_t node = 0;
  Tick at = 0;
  Tick stagger = 0;                       // double_spender
  std::uint32_t vendor = 0;               // double_spender
  std::optional<std::uint32_t> collider;  // double_spender; defaults to the adversary itself
  Tick backdate = 0;                      // timestamp_forger
  std::uint32_t receiver = 0;             // timestamp_forger
};

struct ScenarioConfig {
  std::string name;
  std::uint64_t seed = 0;
  std::uint64_t key_seed = 0;
  std::vector<VoterSpec> voters;
  std::uint32_t ordinary_nodes = 0;
  ProtocolParams params;
  std::vector<std::uint32_t> initial_coins;  // per node, voters first
  DelayModel delay;
  std::vector<TxSpec> transactions;
  std::optional<GeneratorSpec> generator;
  Tick duration = 10000;
  std::vector<AdversarySpec> adversaries;
  nlohmann::json expect = nlohmann::json::object();

  std::size_t node_count() const { return voters.size() + ordinary_nodes; }

  // Throws ConfigError naming the offending field.
  void validate() const;
};

// Parses and validates a scenario document. Diagnostics carry `source` and
// the line of the offending field.
ScenarioConfig parse_scenario(std::string_view text, std::string_view source = "<scenario>");
ScenarioConfig load_scenario(const std::string& path);

nlohmann::json to_json(const ScenarioConfig& config);

// Line number (1-based) of the value at each JSON pointer in `text`.
std::vector<std::pair<std::string, int>> json_pointer_lines(std::string_view text);

}  // namespace rdv::sim
