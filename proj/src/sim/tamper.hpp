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
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "core/types.hpp"

namespace rdv::sim {

enum class TamperMode : std::uint8_t {
  all,     // every mutation kind, plain and rehashed, plus byte flips
  fields,  // single-field mutations only
  voters,  // VoteRBox voter-list mutations only
  bytes,   // raw byte flips on the dump
};

TamperMode parse_tamper_mode(const std::string& s);

struct TamperReport {
  std::uint64_t trials = 0;
  std::uint64_t detected = 0;
  std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> by_mutation;  // detected, total
  std::map<std::string, std::uint64_t> by_check;
  std::vector<std::string> misses;

  double rate() const { return trials == 0 ? 1.0 : static_cast<double>(detected) / static_cast<double>(trials); }
  bool complete() const { return detected == trials; }
  nlohmann::json to_json() const;
};

// Applies `trials` random single mutations to copies of `chain` and checks
// that chain verification rejects each one at or before the height after
// the mutated block. The untouched chain must verify.
TamperReport run_tamper(const std::vector<Block>& chain, std::uint64_t trials, std::uint64_t seed, TamperMode mode);

}  // namespace rdv::sim
