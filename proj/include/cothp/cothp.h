/* SPDX-License-Identifier: Apache-2.0
 *
 * cothp - coordinated Tomlinson-Harashima precoding simulator for overloaded
 * multi-user MIMO broadcast channels
 *
 * C API of the simulator shared library. All entry points are
 * exception-free and return a cothp_status; a human-readable message for
 * the most recent failure on the calling thread is available through
 * cothp_last_error(). Objects returned through out-parameters are owned by
 * the caller and released with the matching _destroy function.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 * http://www.apache.org/licenses/LICENSE-2.0
 */

#ifndef COTHP_COTHP_H
#define COTHP_COTHP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(COTHP_BUILD)
#    define COTHP_API __declspec(dllexport)
#  else
#    define COTHP_API __declspec(dllimport)
#  endif
#else
#  define COTHP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cothp_status {
  COTHP_OK = 0,
  COTHP_ERR_CONFIG = 1,         /* invalid or infeasible configuration */
  COTHP_ERR_RANK_DEFICIENT = 2, /* equivalent channel lost row rank */
  COTHP_ERR_DIMENSION = 3,      /* mismatched shapes or lengths */
  COTHP_ERR_IO = 4,             /* file could not be written */
  COTHP_ERR_INVALID_ARGUMENT = 5, /* null pointer or malformed enum string */
  COTHP_ERR_INTERNAL = 6
} cothp_status;

/* Opaque antenna/user/stream topology. */
typedef struct cothp_scenario cothp_scenario;
/* Opaque sweep result table. */
typedef struct cothp_results cothp_results;

/* Sweep options. Zero/negative sentinel values select the defaults noted
 * per field; zero frames is explicit and disables bit error counting. */
typedef struct cothp_sweep_opts {
  const char* algo;      /* "dthp" | "cthp" | "zf" | "all"; NULL -> "all" */
  const char* ebn0_grid; /* "start:step:stop" dB or one value; NULL -> "0:4:28" */
  int32_t trials;        /* channel draws per grid point; <= 0 -> 500 */
  int32_t frames;        /* symbol frames per draw; < 0 -> 100 */
  uint64_t seed;         /* master seed; any value valid */
  double epsilon;        /* residual MUI threshold; <= 0 -> 1e-5 */
  int32_t max_iters;     /* coordination iteration cap; <= 0 -> 50 */
  double tau_override;   /* modulo period override; <= 0 -> modulation default */
} cothp_sweep_opts;

/* One result row; algo is a NUL-terminated name ("dTHP", "cTHP", "ZF-CBF"). */
typedef struct cothp_sweep_row {
  char algo[16];
  double ebn0_db;
  double ber;
  double sum_rate_bits;
  double avg_iterations;
  double convergence_rate;
  int32_t trials;
  uint64_t seed;
} cothp_sweep_row;

/* Semantic version of the library. */
COTHP_API const char* cothp_version(void);

/* Message for the calling thread's most recent failure; empty string when
 * the last call succeeded. The pointer stays valid until the next API call
 * on the same thread. */
COTHP_API const char* cothp_last_error(void);

/* Parses a scenario from text: antennas like "3,3,3,3x8" (per-user receive
 * antenna counts, then transmit antennas), streams like "2,2,2,2" (empty or
 * NULL selects all receive antennas), modulation "qpsk" or "16qam", and a
 * transmit power budget xi (<= 0 selects the stream count). Feasibility
 * (streams per user <= antennas, total streams <= transmit antennas) is
 * enforced here. */
COTHP_API cothp_status cothp_scenario_parse(const char* antennas, const char* streams,
                                            const char* modulation, double xi,
                                            cothp_scenario** out);

COTHP_API void cothp_scenario_destroy(cothp_scenario* sc);

/* Copies the scenario's display label (e.g. "(3,3,3,3)x8") into buf,
 * truncating to buf_len - 1 characters. */
COTHP_API cothp_status cothp_scenario_label(const cothp_scenario* sc, char* buf,
                                            size_t buf_len);

/* Runs the Monte Carlo sweep. Deterministic: identical scenario and options
 * produce an identical result table. opts may be NULL for all defaults. */
COTHP_API cothp_status cothp_run_sweep(const cothp_scenario* sc,
                                       const cothp_sweep_opts* opts,
                                       cothp_results** out);

COTHP_API void cothp_results_destroy(cothp_results* res);

COTHP_API size_t cothp_results_count(const cothp_results* res);

COTHP_API cothp_status cothp_results_row(const cothp_results* res, size_t index,
                                         cothp_sweep_row* out);

/* Serializes the table in "csv" or "json" format to path; "-" writes to
 * stdout. Output bytes are deterministic and locale independent. */
COTHP_API cothp_status cothp_results_write(const cothp_results* res, const char* path,
                                           const char* format);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* COTHP_COTHP_H */
