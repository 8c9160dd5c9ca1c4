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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "json.hpp"

#include <cstring>
#include <string>
#include <vector>

#include "rdv/rdv.h"

using nlohmann::json;

namespace {

std::string scenario(const char* name) { return std::string(RDV_SOURCE_DIR) + "/scenarios/" + name + ".json"; }

std::string take(char* s) {
  std::string out = s ? s : "";
  rdv_string_free(s);
  return out;
}

struct Run {
  rdv_scenario* sc = nullptr;
  rdv_run* run = nullptr;
  ~Run() {
    rdv_run_free(run);
    rdv_scenario_free(sc);
  }
};

}  // namespace

TEST_CASE("version and null handling") {
  CHECK(std::string(rdv_version()) == "1.0.0");
  rdv_scenario* sc = nullptr;
  CHECK(rdv_scenario_load_file(nullptr, &sc) == RDV_ERR_ARGUMENT);
  CHECK(std::strlen(rdv_last_error()) > 0);
  rdv_scenario_free(nullptr);
  rdv_run_free(nullptr);
  rdv_string_free(nullptr);
}

TEST_CASE("run a bundled scenario through the C interface") {
  Run r;
  REQUIRE(rdv_scenario_load_file(scenario("honest3").c_str(), &r.sc) == RDV_OK);
  REQUIRE(rdv_run_scenario(r.sc, &r.run) == RDV_OK);
  CHECK(rdv_run_passed(r.run) == 1);

  char* text = nullptr;
  REQUIRE(rdv_run_report_json(r.run, &text) == RDV_OK);
  const json report = json::parse(take(text));
  CHECK(report["metrics"]["blocks"] == 5);

  REQUIRE(rdv_run_summary(r.run, &text) == RDV_OK);
  CHECK(take(text).find("PASS") != std::string::npos);

  uint8_t* dump = nullptr;
  size_t len = 0;
  REQUIRE(rdv_run_chain_dump(r.run, &dump, &len) == RDV_OK);
  REQUIRE(len > 8);
  CHECK(std::memcmp(dump, "RDVCHAIN", 8) == 0);

  char* verdict = nullptr;
  CHECK(rdv_verify_chain(dump, len, &verdict) == RDV_OK);
  CHECK(json::parse(take(verdict))["blocks"] == 6);

  std::vector<uint8_t> copy(dump, dump + len);
  rdv_buffer_free(dump);
  copy.resize(copy.size() - 1);
  CHECK(rdv_verify_chain(copy.data(), copy.size(), &verdict) == RDV_ERR_CORRUPT);
  CHECK(json::parse(take(verdict))["result"] == "corrupt");
}

TEST_CASE("seed override and scenario errors") {
  Run r;
  REQUIRE(rdv_scenario_parse("{\"voters\": 3, \"ordinary_nodes\": 1, \"duration\": 50}", "inline", &r.sc) == RDV_OK);
  CHECK(rdv_scenario_set_seed(r.sc, 42) == RDV_OK);
  CHECK(rdv_scenario_seed(r.sc) == 42);
  char* text = nullptr;
  REQUIRE(rdv_scenario_to_json(r.sc, &text) == RDV_OK);
  CHECK(json::parse(take(text))["seed"] == 42);

  rdv_scenario* bad = nullptr;
  CHECK(rdv_scenario_parse("{\n\"voters\": 3,\n\"bogus\": 1\n}", "bad.json", &bad) == RDV_ERR_CORRUPT);
  CHECK(bad == nullptr);
  CHECK(std::string(rdv_last_error()).find("bad.json:3") != std::string::npos);
}

TEST_CASE("states, tamper and sweep") {
  char* out = nullptr;
  char* table = nullptr;
  REQUIRE(rdv_states(2, &out, &table) == RDV_OK);
  take(out);
  CHECK(take(table).find("state2") != std::string::npos);
  CHECK(rdv_states(5, &out, nullptr) == RDV_ERR_ARGUMENT);

  Run r;
  REQUIRE(rdv_scenario_load_file(scenario("honest3").c_str(), &r.sc) == RDV_OK);
  REQUIRE(rdv_run_scenario(r.sc, &r.run) == RDV_OK);
  const std::string path = std::string(RDV_BINARY_DIR) + "/capi-artifacts";
  REQUIRE(rdv_run_write_artifacts(r.run, path.c_str()) == RDV_OK);
  REQUIRE(rdv_tamper_file((path + "/chain.rdv").c_str(), 50, 1, "all", &out) == RDV_OK);
  const json t = json::parse(take(out));
  CHECK(t["detected"] == 50);
  CHECK(rdv_tamper_file((path + "/chain.rdv").c_str(), 5, 1, "nonsense", &out) == RDV_ERR_ARGUMENT);

  REQUIRE(rdv_sweep(r.sc, 0, 2, 1, &out, nullptr) == RDV_OK);
  CHECK(json::parse(take(out))["entries"].size() == 2);
}
