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

#include <cstdlib>
#include <cstring>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "rdv/rdv.h"

namespace {

enum class Verbosity { quiet, info, debug };

Verbosity verbosity() {
  const char* v = std::getenv("RDV_LOG");
  if (!v) return Verbosity::info;
  if (!std::strcmp(v, "quiet") || !std::strcmp(v, "error")) return Verbosity::quiet;
  if (!std::strcmp(v, "debug") || !std::strcmp(v, "trace")) return Verbosity::debug;
  return Verbosity::info;
}

int exit_code(rdv_status s) {
  switch (s) {
    case RDV_OK:
      return 0;
    case RDV_ERR_ARGUMENT:
      return 1;
    case RDV_ERR_CORRUPT:
    case RDV_ERR_IO:
      return 3;
    case RDV_ERR_INVARIANT:
    case RDV_ERR_INTERNAL:
      return 2;
  }
  return 2;
}

int report_error(rdv_status s) {
  std::cerr << "rdv: " << rdv_last_error() << "\n";
  return exit_code(s);
}

struct CString {
  char* p = nullptr;
  ~CString() { rdv_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

using ScenarioPtr = std::unique_ptr<rdv_scenario, decltype(&rdv_scenario_free)>;
using RunPtr = std::unique_ptr<rdv_run, decltype(&rdv_run_free)>;

int cmd_run(const std::string& path, std::optional<std::uint64_t> seed, const std::string& out, bool as_json) {
  rdv_scenario* raw = nullptr;
  if (auto s = rdv_scenario_load_file(path.c_str(), &raw); s != RDV_OK) return report_error(s);
  ScenarioPtr scenario(raw, rdv_scenario_free);
  if (seed) rdv_scenario_set_seed(scenario.get(), *seed);

  rdv_run* run_raw = nullptr;
  if (auto s = rdv_run_scenario(scenario.get(), &run_raw); s != RDV_OK) return report_error(s);
  RunPtr run(run_raw, rdv_run_free);
  if (!out.empty()) {
    if (auto s = rdv_run_write_artifacts(run.get(), out.c_str()); s != RDV_OK) return report_error(s);
  }
  if (verbosity() == Verbosity::debug) {
    CString events;
    rdv_run_events(run.get(), &events.p);
    std::cerr << events.str();
  }
  if (verbosity() != Verbosity::quiet) {
    CString text;
    if (as_json) {
      rdv_run_report_json(run.get(), &text.p);
      std::cout << text.str() << "\n";
    } else {
      rdv_run_summary(run.get(), &text.p);
      std::cout << text.str();
      if (!out.empty()) std::cout << "artifacts: " << out << "\n";
    }
  }
  return rdv_run_passed(run.get()) ? 0 : 2;
}

int cmd_verify(const std::string& path, bool as_json) {
  CString report;
  const rdv_status s = rdv_verify_chain_file(path.c_str(), &report.p);
  if (as_json && report.p) std::cout << report.str() << "\n";
  if (s == RDV_OK) {
    if (!as_json && verbosity() != Verbosity::quiet) std::cout << "ok: " << path << "\n";
    return 0;
  }
  return report_error(s);
}

int cmd_tamper(const std::string& path, std::uint64_t trials, std::uint64_t seed, const std::string& mode,
               bool as_json) {
  CString report;
  const rdv_status s = rdv_tamper_file(path.c_str(), trials, seed, mode.c_str(), &report.p);
  if (report.p && verbosity() != Verbosity::quiet) {
    if (as_json) {
      std::cout << report.str() << "\n";
    } else {
      const auto r = nlohmann::json::parse(report.str());
      std::cout << "tamper: " << r["detected"] << "/" << r["trials"] << " mutations detected, " << r["result"].get<std::string>()
                << "\n";
      for (const auto& [check, hits] : r["by_check"].items()) std::cout << "  " << check << ": " << hits << "\n";
      for (const auto& miss : r["misses"]) std::cout << "  missed " << miss.get<std::string>() << "\n";
    }
  }
  return s == RDV_OK ? 0 : report_error(s);
}

int cmd_states(std::uint32_t n, bool as_json) {
  CString json;
  CString table;
  const rdv_status s = rdv_states(n, &json.p, &table.p);
  if (verbosity() != Verbosity::quiet) std::cout << (as_json ? json.str() + "\n" : table.str());
  return s == RDV_OK ? 0 : report_error(s);
}

int cmd_sweep(const std::string& path, std::uint64_t first, std::uint64_t count, unsigned threads, bool as_json) {
  ScenarioPtr scenario(nullptr, rdv_scenario_free);
  if (!path.empty()) {
    rdv_scenario* raw = nullptr;
    if (auto s = rdv_scenario_load_file(path.c_str(), &raw); s != RDV_OK) return report_error(s);
    scenario.reset(raw);
  }
  CString json;
  CString text;
  const rdv_status s = rdv_sweep(scenario.get(), first, count, threads, &json.p, &text.p);
  if (verbosity() != Verbosity::quiet) std::cout << (as_json ? json.str() + "\n" : text.str());
  return s == RDV_OK ? 0 : report_error(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Register/Deposit/Vote consensus simulator"};
  app.set_version_flag("--version", std::string(rdv_version()));
  app.require_subcommand(1);
  app.fallthrough();
  bool as_json = false;
  app.add_flag("--json", as_json, "Print the JSON report instead of the human summary");

  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::string out = "rdv-out";
  auto* run = app.add_subcommand("run", "Run a scenario and write artifacts");
  run->add_option("scenario", scenario, "Scenario JSON file")->required();
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--out", out, "Artifact directory (empty string to skip)")->capture_default_str();

  std::string dump;
  auto* verify = app.add_subcommand("verify", "Verify a chain dump");
  verify->add_option("chain", dump, "Chain dump (chain.rdv)")->required();

  std::uint64_t trials = 1000;
  std::uint64_t tamper_seed = 0;
  std::string mode = "all";
  auto* tamper = app.add_subcommand("tamper", "Mutate a chain dump and check every mutation is detected");
  tamper->add_option("chain", dump, "Chain dump (chain.rdv)")->required();
  tamper->add_option("--trials", trials, "Number of mutations")->capture_default_str();
  tamper->add_option("--seed", tamper_seed, "Mutation RNG seed")->capture_default_str();
  tamper->add_option("--mode", mode, "all, fields, voters or bytes")
      ->check(CLI::IsMember({"all", "fields", "voters", "bytes"}))
      ->capture_default_str();

  std::uint32_t n = 3;
  auto* states = app.add_subcommand("states", "Enumerate voter behaviors for one transaction");
  states->add_option("--n", n, "Voter count")->check(CLI::Range(1, 4))->capture_default_str();

  std::uint64_t count = 100;
  std::uint64_t first_seed = 0;
  unsigned threads = 0;
  auto* sweep = app.add_subcommand("sweep", "Run many seeds and check agreement and determinism");
  sweep->add_option("scenario", scenario, "Scenario to sweep; random scenarios when omitted");
  sweep->add_option("--seeds", count, "Number of seeds")->capture_default_str();
  sweep->add_option("--seed", first_seed, "First seed")->capture_default_str();
  sweep->add_option("--threads", threads, "Worker threads, 0 for all cores")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (run->parsed()) return cmd_run(scenario, seed, out, as_json);
  if (verify->parsed()) return cmd_verify(dump, as_json);
  if (tamper->parsed()) return cmd_tamper(dump, trials, tamper_seed, mode, as_json);
  if (states->parsed()) return cmd_states(n, as_json);
  if (sweep->parsed()) return cmd_sweep(scenario, first_seed, count, threads, as_json);
  return 1;
}
