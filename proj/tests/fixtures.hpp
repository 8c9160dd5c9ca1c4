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

#include <map>
#include <mutex>
#include <string>

#include "sim/config.hpp"
#include "sim/simulation.hpp"

namespace fixture {

inline std::string scenario_path(const std::string& name) {
  return std::string(RDV_SOURCE_DIR) + "/scenarios/" + name + ".json";
}

// Bundled scenario run once per test binary.
inline const rdv::sim::RunResult& bundled(const std::string& name) {
  static std::mutex mu;
  static std::map<std::string, rdv::sim::RunResult> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, rdv::sim::run(rdv::sim::load_scenario(scenario_path(name)))).first;
  return it->second;
}

inline const rdv::Chain& chain_of(const std::string& name) {
  const auto& r = bundled(name);
  return r.chains[r.observer];
}

}  // namespace fixture
