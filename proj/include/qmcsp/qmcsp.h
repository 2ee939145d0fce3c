/* Copyright 2026 The qmcsp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef QMCSP_QMCSP_H
#define QMCSP_QMCSP_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define QMCSP_API __attribute__((visibility("default")))
#else
#define QMCSP_API
#endif

/* Return codes. They double as the CLI exit codes. */
#define QMCSP_OK 0
#define QMCSP_ERROR 1
#define QMCSP_PROMISE 2
#define QMCSP_BUDGET 3

#define QMCSP_SCHEMA_VERSION 1

typedef struct qmcsp_context qmcsp_context;

/* config_json may be NULL. Recognised keys: gateset (default "g0"), budget,
 * dim_cap, workers, seed, cache (path; QMCSP_CACHE wins when set). */
QMCSP_API int qmcsp_context_new(const char *config_json, qmcsp_context **out);
QMCSP_API void qmcsp_context_free(qmcsp_context *ctx);

/* Runs one command on a JSON request. On QMCSP_OK and QMCSP_PROMISE,
 * *response receives a result envelope
 *   {"schema_version", "config", "payload", "wall_time"}
 * to be released with qmcsp_string_free. On other codes *response is NULL and
 * qmcsp_last_error describes the failure.
 *
 * Commands: solve.mqcsp, solve.mqcsp_star, solve.umcsp, solve.smcsp,
 * solve.min_size, reduce.s2d_umcsp, reduce.s2d_smcsp, reduce.b2u,
 * reduce.self, verify.mqcsp, verify.smcsp, verify.umcsp, demo.prg,
 * demo.finegrained, count, repro. */
QMCSP_API int qmcsp_run(qmcsp_context *ctx, const char *command, const char *request_json, char **response);

/* Message of the last failing call on ctx, or "" if none. Owned by ctx.
 * With ctx NULL, the last qmcsp_context_new failure on this thread. */
QMCSP_API const char *qmcsp_last_error(const qmcsp_context *ctx);

QMCSP_API void qmcsp_string_free(char *s);
QMCSP_API const char *qmcsp_version(void);

#ifdef __cplusplus
}
#endif

#endif
