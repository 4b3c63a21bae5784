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
/* Exercises the C interface from plain C. */
#include <math.h>
#include <stdio.h>
#include <string.h>

#include "tutorkit/tutorkit.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond);  \
      ++failures;                                                 \
    }                                                             \
  } while (0)

int main(void) {
  tk_engine* engine = NULL;
  char* body = NULL;
  int status = 0;
  double d = 0.0;

  EXPECT(strlen(tk_version()) > 0);
  EXPECT(strcmp(tk_status_name(TK_OK), "Ok") == 0);
  EXPECT(strcmp(tk_status_name(TK_CONFLICT), "Conflict") == 0);

  EXPECT(tk_or_to_d(3.13, TK_OR_PROBIT, &d) == TK_OK);
  EXPECT(fabs(d - 0.71) < 0.03);
  EXPECT(tk_or_to_d(-1.0, TK_OR_PROBIT, &d) == TK_NON_POSITIVE_OR);
  EXPECT(strlen(tk_last_error()) > 0);
  EXPECT(tk_or_to_d(1.0, TK_OR_LOGISTIC, NULL) == TK_INVALID_ARGUMENT);

  EXPECT(tk_engine_open("{\"curriculum\": \"/definitely/missing\"}", &engine) == TK_MISSING_FILE);
  EXPECT(engine == NULL);
  EXPECT(tk_engine_open("{\"logicalClock\": true}", &engine) == TK_OK);
  EXPECT(engine != NULL);

  EXPECT(tk_engine_request(engine, "GET", "/v1/health", NULL, NULL, &status, &body) == TK_OK);
  EXPECT(status == 200);
  EXPECT(body && strstr(body, "\"ok\"") != NULL);
  tk_string_free(body);

  EXPECT(tk_engine_request(engine, "POST", "/v1/sessions",
                           "{\"studentId\":\"c\",\"topicId\":\"protein-function\",\"seed\":1}", NULL, &status,
                           &body) == TK_OK);
  EXPECT(status == 201);
  EXPECT(body && strstr(body, "\"s000001\"") != NULL);
  tk_string_free(body);

  EXPECT(tk_engine_request(engine, "GET", "/v1/sessions/zzz", NULL, NULL, &status, &body) == TK_OK);
  EXPECT(status == 404);
  tk_string_free(body);

  EXPECT(tk_engine_request(NULL, "GET", "/v1/health", NULL, NULL, &status, &body) == TK_INVALID_ARGUMENT);

  tk_server* server = NULL;
  EXPECT(tk_server_start(engine, "127.0.0.1", 0, NULL, &server) == TK_OK);
  EXPECT(tk_server_port(server) > 0);
  tk_server_stop(server);
  tk_engine_close(engine);

  char* report = NULL;
  EXPECT(tk_simulate(NULL, "protein-function", "perfect", 1, &report) == TK_OK);
  EXPECT(report && strstr(report, "transcriptHash") != NULL);
  tk_string_free(report);
  EXPECT(tk_simulate(NULL, "protein-function", "wizard", 1, &report) == TK_INVALID_ARGUMENT);
  EXPECT(tk_simulate(NULL, "no-topic", "perfect", 1, &report) == TK_UNKNOWN_TOPIC);

  EXPECT(tk_validate(NULL, NULL, &report) == TK_OK);
  tk_string_free(report);
  EXPECT(tk_analyze("/definitely/missing.csv", TK_OR_PROBIT, &report) == TK_IO_FAILURE);

  if (failures) fprintf(stderr, "%d failure(s)\n", failures);
  return failures ? 1 : 0;
}
