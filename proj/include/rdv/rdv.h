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

#ifndef RDV_RDV_H
#define RDV_RDV_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RDV_API __declspec(dllexport)
#else
#define RDV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rdv_status {
  RDV_OK = 0,
  RDV_ERR_ARGUMENT = 1,   /* bad argument or option value */
  RDV_ERR_INVARIANT = 2,  /* run verdict failed or chain did not verify */
  RDV_ERR_CORRUPT = 3,    /* malformed scenario or chain dump */
  RDV_ERR_IO = 4,
  RDV_ERR_INTERNAL = 5,
} rdv_status;

typedef struct rdv_scenario rdv_scenario;
typedef struct rdv_run rdv_run;

/* Message for the most recent failure on the calling thread. Never NULL. */
RDV_API const char* rdv_last_error(void);
RDV_API const char* rdv_version(void);

/* Strings and buffers returned through out-parameters are owned by the caller. */
RDV_API void rdv_string_free(char* s);
RDV_API void rdv_buffer_free(uint8_t* data);

RDV_API rdv_status rdv_scenario_load_file(const char* path, rdv_scenario** out);
RDV_API rdv_status rdv_scenario_parse(const char* json_text, const char* source_name, rdv_scenario** out);
RDV_API rdv_status rdv_scenario_set_seed(rdv_scenario* scenario, uint64_t seed);
RDV_API uint64_t rdv_scenario_seed(const rdv_scenario* scenario);
RDV_API rdv_status rdv_scenario_to_json(const rdv_scenario* scenario, char** out);
RDV_API void rdv_scenario_free(rdv_scenario* scenario);

/* RDV_OK whenever the simulation ran, even if a verdict failed. */
RDV_API rdv_status rdv_run_scenario(const rdv_scenario* scenario, rdv_run** out);
RDV_API int rdv_run_passed(const rdv_run* run);
RDV_API rdv_status rdv_run_report_json(const rdv_run* run, char** out);
RDV_API rdv_status rdv_run_summary(const rdv_run* run, char** out);
/* Event log, one JSON object per line. */
RDV_API rdv_status rdv_run_events(const rdv_run* run, char** out);
RDV_API rdv_status rdv_run_write_artifacts(const rdv_run* run, const char* out_dir);
RDV_API rdv_status rdv_run_chain_dump(const rdv_run* run, uint8_t** data, size_t* len);
RDV_API void rdv_run_free(rdv_run* run);

/* RDV_OK, RDV_ERR_INVARIANT with the first violation, or RDV_ERR_CORRUPT.
   `out_json` may be NULL. */
RDV_API rdv_status rdv_verify_chain(const uint8_t* data, size_t len, char** out_json);
RDV_API rdv_status rdv_verify_chain_file(const char* path, char** out_json);

/* mode: "all", "fields", "voters" or "bytes". RDV_ERR_INVARIANT on any miss. */
RDV_API rdv_status rdv_tamper_file(const char* path, uint64_t trials, uint64_t seed, const char* mode,
                                   char** out_json);

/* 1 <= n <= 4. `out_table` may be NULL. RDV_ERR_INVARIANT on any mismatch. */
RDV_API rdv_status rdv_states(uint32_t n, char** out_json, char** out_table);

/* Runs `base` under seeds first_seed.., or random scenarios when `base` is
   NULL. threads = 0 uses every core. `out_text` may be NULL. */
RDV_API rdv_status rdv_sweep(const rdv_scenario* base, uint64_t first_seed, uint64_t count, unsigned threads,
                             char** out_json, char** out_text);

#ifdef __cplusplus
}
#endif

#endif /* RDV_RDV_H */
