// Copyright 2026 The tutorkit Authors.
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
/* C interface to the tutorkit engine. All strings are UTF-8. Strings returned
 * through char** out-parameters are owned by the caller and released with
 * tk_string_free. */
#ifndef TUTORKIT_TUTORKIT_H
#define TUTORKIT_TUTORKIT_H

#include <stdint.h>

#if defined(_WIN32)
#  if defined(TUTORKIT_BUILDING_LIBRARY)
#    define TK_API __declspec(dllexport)
#  else
#    define TK_API __declspec(dllimport)
#  endif
#else
#  define TK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tk_status {
  TK_OK = 0,
  TK_MISSING_FILE,
  TK_SCHEMA_VIOLATION,
  TK_DANGLING_REFERENCE,
  TK_EMPTY_KEYWORD_LIST,
  TK_EMPTY_EXPECTATION,
  TK_EMPTY_CANDIDATES,
  TK_OUT_OF_RANGE,
  TK_SCRIPT_EXHAUSTED,
  TK_EMPTY_AGENDA,
  TK_NO_TRIPLES,
  TK_UNKNOWN_SLOT,
  TK_SLOT_ALREADY_FILLED,
  TK_NO_SPANS,
  TK_UNKNOWN_BLANK,
  TK_UNKNOWN_TOPIC,
  TK_UNKNOWN_SESSION,
  TK_SESSION_ALREADY_OPEN,
  TK_ILLEGAL_EVENT_FOR_PHASE,
  TK_SESSION_COMPLETE,
  TK_ILLEGAL_SOURCE,
  TK_CONFLICT,
  TK_INSUFFICIENT_ITEMS,
  TK_UNKNOWN_ITEM,
  TK_UNKNOWN_TEST,
  TK_NON_POSITIVE_OR,
  TK_SINGULAR_DESIGN,
  TK_SEPARATION,
  TK_IO_FAILURE,
  TK_INVALID_ARGUMENT,
  TK_UNAUTHORIZED,
  TK_INTERNAL /* unexpected exception */
} tk_status;

typedef struct tk_engine tk_engine;
typedef struct tk_server tk_server;

typedef enum tk_or_mode { TK_OR_PROBIT = 0, TK_OR_LOGISTIC = 1 } tk_or_mode;

TK_API const char* tk_version(void);
TK_API const char* tk_status_name(tk_status status);
/* Message of the last failing call on this thread; "" after a success. */
TK_API const char* tk_last_error(void);
TK_API void tk_string_free(char* s);

/* config_json: {"curriculum": DIR, "data": DIR?, "token": STR?,
 *               "itembank": PATH?, "logicalClock": BOOL?}
 * NULL or "{}" uses the bundled curriculum in memory. */
TK_API tk_status tk_engine_open(const char* config_json, tk_engine** out);
TK_API void tk_engine_close(tk_engine* engine);

/* One /v1 API call. headers_json is an object of header strings or NULL.
 * On TK_OK, *http_status and *response_body are always set, including for
 * 4xx responses. */
TK_API tk_status tk_engine_request(tk_engine* engine, const char* method, const char* path,
                                   const char* body, const char* headers_json, int* http_status,
                                   char** response_body);

/* HTTP front end running on a background thread. port 0 picks a free port. */
TK_API tk_status tk_server_start(tk_engine* engine, const char* host, int port, const char* static_dir,
                                 tk_server** out);
TK_API int tk_server_port(const tk_server* server);
/* Blocks until the server stops. */
TK_API void tk_server_wait(tk_server* server);
TK_API void tk_server_stop(tk_server* server);

/* Simulated-student episode. policy: perfect | ignorant | noisy:P | summaryonly:K.
 * curriculum_dir NULL uses the bundled curriculum. */
TK_API tk_status tk_simulate(const char* curriculum_dir, const char* topic_id, const char* policy,
                             uint64_t seed, char** report_json);

/* Descriptives, fixed-effects fit and effect sizes for an item-response CSV. */
TK_API tk_status tk_analyze(const char* records_csv_path, tk_or_mode mode, char** report_json);

TK_API tk_status tk_or_to_d(double odds_ratio, tk_or_mode mode, double* d);

/* Loads and checks a curriculum directory and, optionally, an item bank.
 * report_json lists topics, standards and item-bank warnings. */
TK_API tk_status tk_validate(const char* curriculum_dir, const char* itembank_path, char** report_json);

#ifdef __cplusplus
}
#endif

#endif
