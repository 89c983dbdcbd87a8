// Copyright 2026 The pdstore Authors.
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


/* C interface to the pdstore library.
 *
 * Handles are opaque. Every call that can fail returns a pds_status; on
 * failure a description is available from pds_last_error() on the same
 * thread until the next failing call. Strings returned through `char**`
 * out-parameters are owned by the caller and released with
 * pds_string_free(). Configuration is passed as `key=value` lines.
 */

#ifndef PDS_PDS_H_
#define PDS_PDS_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PDS_API __declspec(dllexport)
#else
#define PDS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pds_status {
  PDS_OK = 0,
  PDS_MALFORMED = 1,
  PDS_DENIED = 2,
  PDS_NOT_FOUND = 3,
  PDS_EXPIRED = 4,
  PDS_DUPLICATE_KEY = 5,
  PDS_STORAGE_FAILURE = 6,
  PDS_INVALID_SELECTOR = 7,
  PDS_INVALID_ATTRIBUTE = 8,
  PDS_UNKNOWN_KEY = 9,
  PDS_INVALID_RANGE = 10,
  PDS_DRIVER_UNREACHABLE = 11,
  PDS_VALIDATION_ABORT = 12,
  PDS_INVALID_ARGUMENT = 13
} pds_status;

/* A backend: an in-process store or a connection to a pdstore server. */
typedef struct pds_store pds_store;
typedef struct pds_server pds_server;

PDS_API const char* pds_status_name(pds_status status);
PDS_API const char* pds_last_error(void);
PDS_API void pds_string_free(char* s);

/* Opens an in-process store configured by the `store.*` keys. */
PDS_API pds_status pds_store_open(const char* config, pds_store** out);
/* Connects to a server at "host:port". */
PDS_API pds_status pds_store_connect(const char* address, pds_store** out);
PDS_API void pds_store_close(pds_store* store);

/* Runs one request line (`REQ <role>[:<actor>] <QUERY> <args>`) and returns
 * the response as newline-terminated lines: `OK <n>` plus n body lines, or
 * a single `ERR <CODE> <message>` line. A query that the store rejects is
 * still PDS_OK here; only an unparsable line or a transport failure is not. */
PDS_API pds_status pds_store_execute(pds_store* store, const char* request, char** response);

/* Generates the load described by `config` (recordcount, seed, ...) and
 * inserts it as controller creates. `loaded` receives the accepted count. */
PDS_API pds_status pds_store_load(pds_store* store, const char* config, uint64_t* loaded);

/* One reaper pass; `erased` receives the number of records removed. */
PDS_API pds_status pds_store_reap(pds_store* store, uint64_t* erased);

/* Advances a logical clock (delta 0 reads it). Fails on a wall clock. */
PDS_API pds_status pds_store_advance_clock(pds_store* store, int64_t delta_ms, int64_t* now_ms);

/* `CAPABILITY=LEVEL` lines. */
PDS_API pds_status pds_store_features(pds_store* store, char** text);

/* One line of space accounting. */
PDS_API pds_status pds_store_space_stats(pds_store* store, char** line);

/* Serves an in-process store over TCP. Port 0 picks a free port. */
PDS_API pds_status pds_server_start(pds_store* store, const char* host, uint16_t port,
                                    pds_server** out);
PDS_API uint16_t pds_server_port(const pds_server* server);
/* Blocks until pds_server_stop is called from another thread. */
PDS_API void pds_server_wait(pds_server* server);
/* Stops the server; pds_server_free releases it afterwards. */
PDS_API void pds_server_stop(pds_server* server);
PDS_API void pds_server_free(pds_server* server);

/* Runs the configured workloads against `store`. `report` (JSON) and
 * `latencies` (CSV) are optional. Returns PDS_OK when the run met the
 * correctness threshold, PDS_VALIDATION_ABORT when it did not, and other
 * codes for configuration or backend failures. With `report.timing=false`
 * the report omits every clock-dependent value. */
PDS_API pds_status pds_bench_run(pds_store* store, const char* config, char** report,
                                 char** latencies);

#ifdef __cplusplus
}
#endif

#endif  /* PDS_PDS_H_ */
