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

#include "rdv/rdv.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "core/serialize.hpp"
#include "core/verify.hpp"
#include "sim/config.hpp"
#include "sim/simulation.hpp"
#include "sim/states.hpp"
#include "sim/sweep.hpp"
#include "sim/tamper.hpp"

struct rdv_scenario {
  rdv::sim::ScenarioConfig config;
  std::string path;
};

struct rdv_run {
  rdv::sim::RunResult result;
  std::string path;
};

namespace {

using nlohmann::json;

thread_local std::string g_last_error;

rdv_status fail(rdv_status s, std::string message) {
  g_last_error = std::move(message);
  return s;
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

rdv_status give(const std::string& s, char** out) {
  if (out) *out = dup(s);
  return RDV_OK;
}

// Runs `body`, mapping exceptions to status codes.
template <typename F>
rdv_status guarded(F&& body) {
  try {
    return body();
  } catch (const rdv::sim::ConfigError& e) {
    return fail(RDV_ERR_CORRUPT, e.what());
  } catch (const rdv::DecodeError& e) {
    return fail(RDV_ERR_CORRUPT, e.what());
  } catch (const rdv::Error& e) {
    return fail(RDV_ERR_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(RDV_ERR_INTERNAL, e.what());
  }
}

bool read_file(const char* path, rdv::Bytes& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string s = buf.str();
  out.assign(s.begin(), s.end());
  return true;
}

json run_report(const rdv_run* run) {
  json r = run->result.report();
  if (!run->path.empty()) r["scenario_path"] = run->path;
  return r;
}

}  // namespace

extern "C" {

const char* rdv_last_error(void) { return g_last_error.c_str(); }

const char* rdv_version(void) { return "1.0.0"; }

void rdv_string_free(char* s) { std::free(s); }

void rdv_buffer_free(uint8_t* data) { std::free(data); }

rdv_status rdv_scenario_load_file(const char* path, rdv_scenario** out) {
  if (!path || !out) return fail(RDV_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  {
    std::ifstream probe(path);
    if (!probe) return fail(RDV_ERR_IO, std::string(path) + ": cannot open scenario file");
  }
  return guarded([&] {
    auto s = std::make_unique<rdv_scenario>();
    s->config = rdv::sim::load_scenario(path);
    s->path = path;
    *out = s.release();
    return RDV_OK;
  });
}

rdv_status rdv_scenario_parse(const char* json_text, const char* source_name, rdv_scenario** out) {
  if (!json_text || !out) return fail(RDV_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto s = std::make_unique<rdv_scenario>();
    s->config = rdv::sim::parse_scenario(json_text, source_name ? source_name : "<scenario>");
    *out = s.release();
    return RDV_OK;
  });
}

rdv_status rdv_scenario_set_seed(rdv_scenario* scenario, uint64_t seed) {
  if (!scenario) return fail(RDV_ERR_ARGUMENT, "null scenario");
  scenario->config.seed = seed;
  return RDV_OK;
}

uint64_t rdv_scenario_seed(const rdv_scenario* scenario) { return scenario ? scenario->config.seed : 0; }

rdv_status rdv_scenario_to_json(const rdv_scenario* scenario, char** out) {
  if (!scenario || !out) return fail(RDV_ERR_ARGUMENT, "null argument");
  return guarded([&] { return give(rdv::sim::to_json(scenario->config).dump(2), out); });
}

void rdv_scenario_free(rdv_scenario* scenario) { delete scenario; }

rdv_status rdv_run_scenario(const rdv_scenario* scenario, rdv_run** out) {
  if (!scenario || !out) return fail(RDV_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto r = std::make_unique<rdv_run>();
    r->result = rdv::sim::run(scenario->config);
    r->path = scenario->path;
    *out = r.release();
    return RDV_OK;
  });
}

int rdv_run_passed(const rdv_run* run) { return run && run->result.passed() ? 1 : 0; }

rdv_status rdv_run_report_json(const rdv_run* run, char** out) {
  if (!run || !out) return fail(RDV_ERR_ARGUMENT, "null argument");
  return guarded([&] { return give(run_report(run).dump(2), out); });
}

rdv_status rdv_run_summary(const rdv_run* run, char** out) {
  if (!run || !out) return fail(RDV_ERR_ARGUMENT, "null argument");
  return guarded([&] { return give(rdv::sim::summarize(run_report(run)), out); });
}

rdv_status rdv_run_events(const rdv_run* run, char** out) {
  if (!run || !out) return fail(RDV_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    std::string log;
    for (const auto& e : run->result.events) log += e + "\n";
    return give(log, out);
  });
}

rdv_status rdv_run_write_artifacts(const rdv_run* run, const char* out_dir) {
  if (!run || !out_dir) return fail(RDV_ERR_ARGUMENT, "null argument");
  try {
    rdv::sim::write_artifacts(run->result, out_dir);
    return RDV_OK;
  } catch (const std::exception& e) {
    return fail(RDV_ERR_IO, e.what());
  }
}

rdv_status rdv_run_chain_dump(const rdv_run* run, uint8_t** data, size_t* len) {
  if (!run || !data || !len) return fail(RDV_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    const auto& r = run->result;
    const rdv::Bytes dump = rdv::encode_chain_dump(r.chains[r.observer].blocks());
    *data = static_cast<uint8_t*>(std::malloc(dump.size()));
    if (!*data) return fail(RDV_ERR_INTERNAL, "out of memory");
    std::memcpy(*data, dump.data(), dump.size());
    *len = dump.size();
    return RDV_OK;
  });
}

void rdv_run_free(rdv_run* run) { delete run; }

rdv_status rdv_verify_chain(const uint8_t* data, size_t len, char** out_json) {
  if (!data && len > 0) return fail(RDV_ERR_ARGUMENT, "null data");
  return guarded([&] {
    std::vector<rdv::Block> blocks;
    try {
      blocks = rdv::decode_chain_dump(rdv::ByteView(data, len));
    } catch (const rdv::DecodeError& e) {
      if (out_json) *out_json = dup(json{{"result", "corrupt"}, {"detail", e.what()}}.dump(2));
      return fail(RDV_ERR_CORRUPT, std::string("corrupt chain dump: ") + e.what());
    }
    rdv::Verifier verifier;
    const auto v = rdv::verify_chain(blocks, rdv::registered_roster_history(blocks), verifier);
    if (!v) {
      return give(json{{"result", "ok"}, {"blocks", blocks.size()}, {"tip", blocks.back().block_hash.hex()}}.dump(2),
                  out_json);
    }
    if (out_json) {
      *out_json = dup(json{{"result", "violation"},
                           {"height", v->height},
                           {"check", v->violation.check},
                           {"detail", v->violation.detail}}
                          .dump(2));
    }
    return fail(RDV_ERR_INVARIANT, "height " + std::to_string(v->height) + ": " + v->violation.check + ": " +
                                       v->violation.detail);
  });
}

rdv_status rdv_verify_chain_file(const char* path, char** out_json) {
  if (!path) return fail(RDV_ERR_ARGUMENT, "null path");
  rdv::Bytes bytes;
  if (!read_file(path, bytes)) return fail(RDV_ERR_IO, std::string(path) + ": cannot open chain dump");
  return rdv_verify_chain(bytes.data(), bytes.size(), out_json);
}

rdv_status rdv_tamper_file(const char* path, uint64_t trials, uint64_t seed, const char* mode, char** out_json) {
  if (!path) return fail(RDV_ERR_ARGUMENT, "null path");
  rdv::Bytes bytes;
  if (!read_file(path, bytes)) return fail(RDV_ERR_IO, std::string(path) + ": cannot open chain dump");
  return guarded([&] {
    const auto m = rdv::sim::parse_tamper_mode(mode ? mode : "all");
    const auto blocks = rdv::decode_chain_dump(bytes);
    rdv::Verifier verifier;
    if (auto v = rdv::verify_chain(blocks, rdv::registered_roster_history(blocks), verifier)) {
      return fail(RDV_ERR_INVARIANT, "input chain does not verify at height " + std::to_string(v->height));
    }
    const auto report = rdv::sim::run_tamper(blocks, trials, seed, m);
    give(report.to_json().dump(2), out_json);
    if (!report.complete()) {
      return fail(RDV_ERR_INVARIANT, std::to_string(report.trials - report.detected) + " mutations undetected");
    }
    return RDV_OK;
  });
}

rdv_status rdv_states(uint32_t n, char** out_json, char** out_table) {
  if (n < 1 || n > 4) return fail(RDV_ERR_ARGUMENT, "n must be within [1, 4]");
  return guarded([&] {
    const auto table = rdv::sim::enumerate_correctness_states(n);
    give(table.to_json().dump(2), out_json);
    give(table.render(), out_table);
    return table.passed() ? RDV_OK : fail(RDV_ERR_INVARIANT, "state classification mismatch");
  });
}

rdv_status rdv_sweep(const rdv_scenario* base, uint64_t first_seed, uint64_t count, unsigned threads,
                     char** out_json, char** out_text) {
  return guarded([&] {
    rdv::sim::SweepOptions o;
    o.first_seed = first_seed;
    o.count = count;
    o.threads = threads;
    std::optional<rdv::sim::ScenarioConfig> cfg;
    if (base) cfg = base->config;
    const auto report = rdv::sim::run_sweep(cfg, o);
    give(report.to_json().dump(2), out_json);
    give(report.render(), out_text);
    return report.passed() ? RDV_OK : fail(RDV_ERR_INVARIANT, "sweep has failing runs");
  });
}

}  // extern "C"
