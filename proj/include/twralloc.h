/* Copyright 2026 The twralloc Authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the twralloc solver library.
 *
 * twralloc allocates resources in an OFDMA network where mobile stations and
 * a base station exchange data through two-way amplify-and-forward relays:
 * it pairs uplink and downlink subcarriers, selects a relay and a mobile
 * station per pair, and splits each relay's transmit power across the pairs
 * it serves.
 *
 * Usage outline:
 *   twr_config_load("run.cfg", &cfg);
 *   twr_channels_sample(cfg, seed, &ch);
 *   twr_solve(cfg, ch, "proposed", seed, &report);
 *   ... twr_report_* getters ...
 *   twr_report_free(report); twr_channels_free(ch); twr_config_free(cfg);
 *
 * All functions returning twr_status leave output parameters untouched on
 * failure and record a message retrievable with twr_last_error() (per
 * thread). Strings returned through char** are heap-allocated; release them
 * with twr_string_free().
 */

#ifndef TWRALLOC_H
#define TWRALLOC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(TWR_BUILD_SHARED)
#define TWR_API __declspec(dllexport)
#else
#define TWR_API __declspec(dllimport)
#endif
#else
#define TWR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum twr_status {
  TWR_OK = 0,
  TWR_ERR_INVALID_ARGUMENT = 1,
  TWR_ERR_RUNTIME = 2,
  TWR_ERR_IO = 3,
  TWR_ERR_UNKNOWN = 4
} twr_status;

/* Message for the most recent failure on the calling thread. Never NULL;
 * empty string when no failure has occurred. Valid until the next failing
 * twralloc call on the same thread. */
TWR_API const char* twr_last_error(void);

/* Static version string, e.g. "twralloc 0.1.0". Do not free. */
TWR_API const char* twr_version(void);

TWR_API void twr_string_free(char* s);

/* ---- Configuration ---------------------------------------------------- */

/* Experiment description: network shape, transmit powers, schemes, sweep,
 * seeds, output path. Keys mirror the flat key = value config file format
 * (see README). */
typedef struct twr_config twr_config;

/* New configuration with default values. Returns NULL on allocation
 * failure. */
TWR_API twr_config* twr_config_create(void);

TWR_API twr_status twr_config_load(const char* path, twr_config** out);
TWR_API twr_status twr_config_parse(const char* text, twr_config** out);
TWR_API void twr_config_free(twr_config* cfg);

/* Sets one key from its text form, e.g. ("num_subcarriers", "32") or
 * ("rs_power_sweep_db", "0,5,10,15,20"). */
TWR_API twr_status twr_config_set(twr_config* cfg, const char* key,
                                  const char* value);

/* Current value of one key in the same text form twr_config_set accepts. */
TWR_API twr_status twr_config_get(const twr_config* cfg, const char* key,
                                  char** out_value);

/* ---- Channels ---------------------------------------------------------- */

typedef struct twr_channels twr_channels;

/* Draws node positions and fading for one network realization. The draw is a
 * pure function of the configured network shape and `seed`; relay power
 * budgets do not affect it. */
TWR_API twr_status twr_channels_sample(const twr_config* cfg, uint64_t seed,
                                       twr_channels** out);
TWR_API void twr_channels_free(twr_channels* ch);

/* JSON document with positions and complex gains of every link. */
TWR_API twr_status twr_channels_to_json(const twr_channels* ch,
                                        char** out_json);

/* ---- Solving ----------------------------------------------------------- */

typedef struct twr_report twr_report;

/* Runs one allocation scheme on one channel realization. `scheme` is one of
 * "proposed" (dual decomposition), "epa" (best pairing under equal power),
 * "rra" (random assignment, equal power), or "dual_bound" (upper bound from
 * the dual of the proposed scheme). `rng_seed` feeds only the randomized
 * scheme; pass the channel seed to reproduce harness records. */
TWR_API twr_status twr_solve(const twr_config* cfg, const twr_channels* ch,
                             const char* scheme, uint64_t rng_seed,
                             twr_report** out);

/* Exhaustive reference solver over a per-relay power grid with `steps`
 * levels (steps <= 0 selects 200). Only tractable for tiny networks; fails
 * with TWR_ERR_INVALID_ARGUMENT beyond 4 subcarriers or a work bound. */
TWR_API twr_status twr_solve_oracle(const twr_config* cfg,
                                    const twr_channels* ch, int steps,
                                    twr_report** out);

TWR_API void twr_report_free(twr_report* rep);

/* Weighted objective achieved by the returned allocation. */
TWR_API twr_status twr_report_objective(const twr_report* rep, double* out);

/* Unweighted sum rate of the returned allocation, bits/s/Hz. */
TWR_API twr_status twr_report_sum_rate(const twr_report* rep, double* out);

/* Dual upper bound. has_bound is 0 and *out is NaN for schemes that do not
 * produce one. */
TWR_API twr_status twr_report_dual(const twr_report* rep, double* out,
                                   int* has_bound);

/* Relative duality gap (dual - objective) / dual; NaN without a bound. */
TWR_API twr_status twr_report_gap(const twr_report* rep, double* out);

TWR_API twr_status twr_report_iterations(const twr_report* rep, int* out);
TWR_API twr_status twr_report_converged(const twr_report* rep, int* out);

/* Active tuples of the allocation: subcarrier pair (first-hop subcarrier i,
 * second-hop subcarrier j), serving relay, mobile station, relay power. */
TWR_API twr_status twr_report_num_tuples(const twr_report* rep, size_t* out);
TWR_API twr_status twr_report_tuple(const twr_report* rep, size_t index,
                                    int* ms, int* rs, int* sc_first,
                                    int* sc_second, double* relay_power);

/* Per-iteration progress of the dual solve as CSV text with header
 * iter,dual,primal_feasible,gap,subgrad_norm,omega. Empty body for schemes
 * without an iterative solve. */
TWR_API twr_status twr_report_history_csv(const twr_report* rep,
                                          char** out_csv);

/* ---- Monte Carlo experiment -------------------------------------------- */

/* Runs the configured experiment: every scheme on num_realizations channel
 * draws per relay power level. When out_dir is non-NULL, writes summary.csv,
 * records.csv and manifest.json there (directory created if missing). When
 * out_summary_json is non-NULL, receives the summary table as JSON. */
TWR_API twr_status twr_run_experiment(const twr_config* cfg,
                                      const char* out_dir,
                                      char** out_summary_json);

#ifdef __cplusplus
}
#endif

#endif /* TWRALLOC_H */
