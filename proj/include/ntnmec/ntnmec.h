/*
Copyright 2026 The ntnmec Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/


#ifndef NTNMEC_NTNMEC_H
#define NTNMEC_NTNMEC_H

/*
 * C interface to the ntnmec simulator.
 *
 * Objects are opaque handles created and released through this API. Every
 * fallible call returns an ntnmec_status; on failure a human-readable
 * message is available from ntnmec_last_error() on the calling thread.
 * Strings returned through out-parameters are owned by the caller and must
 * be released with ntnmec_string_free().
 */

#include <stddef.h>
#include <stdint.h>

#if defined(NTNMEC_BUILDING_LIBRARY)
#define NTNMEC_API __attribute__((visibility("default")))
#else
#define NTNMEC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ntnmec_status {
    NTNMEC_OK = 0,
    NTNMEC_ERR_ARGUMENT = 1,   /* null handle, bad enum, out-of-range index */
    NTNMEC_ERR_CONFIG = 2,     /* configuration document rejected */
    NTNMEC_ERR_CONSTRAINT = 3, /* produced allocation failed a constraint check */
    NTNMEC_ERR_IO = 4,         /* file could not be read */
    NTNMEC_ERR_TOO_LARGE = 5,  /* instance beyond the exhaustive-search limits */
    NTNMEC_ERR_INTERNAL = 6
} ntnmec_status;

typedef enum ntnmec_variant {
    NTNMEC_VARIANT_ALL = 0,
    NTNMEC_VARIANT_NO_LEO = 1,
    NTNMEC_VARIANT_NO_HAPS = 2,
    NTNMEC_VARIANT_NONADAPTIVE = 3
} ntnmec_variant;

typedef enum ntnmec_destination {
    NTNMEC_DEST_LOCAL = 0,
    NTNMEC_DEST_HAPS = 1,
    NTNMEC_DEST_LEO = 2,
    NTNMEC_DEST_UNALLOCATED = 3
} ntnmec_destination;

typedef struct ntnmec_config ntnmec_config;
typedef struct ntnmec_result ntnmec_result;
typedef struct ntnmec_sweep ntnmec_sweep;
typedef struct ntnmec_table ntnmec_table;

NTNMEC_API const char *ntnmec_version(void);
NTNMEC_API const char *ntnmec_status_string(ntnmec_status status);
/* Message of the most recent failure on this thread; empty after success. */
NTNMEC_API const char *ntnmec_last_error(void);
NTNMEC_API void ntnmec_string_free(char *s);

NTNMEC_API ntnmec_status ntnmec_variant_parse(const char *name, ntnmec_variant *out);
NTNMEC_API const char *ntnmec_variant_name(ntnmec_variant variant);

/* Scenario configuration documents. */
NTNMEC_API ntnmec_status ntnmec_config_parse(const char *json_text, ntnmec_config **out);
NTNMEC_API ntnmec_status ntnmec_config_load_file(const char *path, ntnmec_config **out);
/* Dotted-path override; `value` is parsed as JSON, else taken as a string. */
NTNMEC_API ntnmec_status ntnmec_config_set(ntnmec_config *config, const char *path, const char *value);
NTNMEC_API ntnmec_status ntnmec_config_validate(const ntnmec_config *config);
NTNMEC_API ntnmec_status ntnmec_config_seed(const ntnmec_config *config, uint64_t *out);
NTNMEC_API ntnmec_status ntnmec_config_task_count(const ntnmec_config *config, uint64_t seed, size_t *out);
NTNMEC_API void ntnmec_config_free(ntnmec_config *config);

/* One optimizer run for `seed` (scenario draws and channel fading). */
NTNMEC_API ntnmec_status ntnmec_run(const ntnmec_config *config, ntnmec_variant variant, uint64_t seed,
                                    ntnmec_result **out);
NTNMEC_API ntnmec_status ntnmec_result_hat_tau(const ntnmec_result *result, double *out);
NTNMEC_API ntnmec_status ntnmec_result_total_delay(const ntnmec_result *result, double *out);
NTNMEC_API ntnmec_status ntnmec_result_feasible_fraction(const ntnmec_result *result, double *out);
NTNMEC_API ntnmec_status ntnmec_result_destination_fraction(const ntnmec_result *result, ntnmec_destination dest,
                                                            double *out);
NTNMEC_API ntnmec_status ntnmec_result_runtime_model(const ntnmec_result *result, double *out);
NTNMEC_API ntnmec_status ntnmec_result_task_count(const ntnmec_result *result, size_t *out);
/* Per-task total delay in seconds; +inf for unallocated tasks. */
NTNMEC_API ntnmec_status ntnmec_result_task_delay(const ntnmec_result *result, size_t task, double *out);
NTNMEC_API ntnmec_status ntnmec_result_json(const ntnmec_result *result, int per_task, char **out);
NTNMEC_API void ntnmec_result_free(ntnmec_result *result);

/* Parameter sweeps. */
NTNMEC_API ntnmec_status ntnmec_sweep_parse(const char *json_text, ntnmec_sweep **out);
NTNMEC_API ntnmec_status ntnmec_sweep_load_file(const char *path, ntnmec_sweep **out);
/* Override in the base scenario of every cell. */
NTNMEC_API ntnmec_status ntnmec_sweep_set(ntnmec_sweep *sweep, const char *path, const char *value);
/* "N" (1..N), "a-b" or "a,b,c". */
NTNMEC_API ntnmec_status ntnmec_sweep_set_seeds(ntnmec_sweep *sweep, const char *seeds);
NTNMEC_API ntnmec_status ntnmec_sweep_set_variants(ntnmec_sweep *sweep, const ntnmec_variant *variants, size_t count);
NTNMEC_API ntnmec_status ntnmec_sweep_set_threads(ntnmec_sweep *sweep, unsigned threads);
NTNMEC_API ntnmec_status ntnmec_sweep_run(const ntnmec_sweep *sweep, ntnmec_table **out);
NTNMEC_API void ntnmec_sweep_free(ntnmec_sweep *sweep);

NTNMEC_API ntnmec_status ntnmec_table_csv(const ntnmec_table *table, char **out);
NTNMEC_API ntnmec_status ntnmec_table_json(const ntnmec_table *table, char **out);
NTNMEC_API ntnmec_status ntnmec_table_rows(const ntnmec_table *table, size_t *out);
/*
 * Trend checks for "fig2", "fig3" or "fig4". `report` receives one line per
 * check ("PASS name: detail" / "FAIL ..."); `all_passed` is 1 or 0.
 */
NTNMEC_API ntnmec_status ntnmec_table_check_trends(const ntnmec_table *table, const char *figure, int *all_passed,
                                                   char **report);
NTNMEC_API void ntnmec_table_free(ntnmec_table *table);

/*
 * Greedy versus exhaustive search on random tiny instances. `model_json` may
 * be NULL or a scenario document fragment whose bands/defaults/nodes apply.
 * `csv` receives the gap table, `summary_json` the aggregate statistics.
 */
NTNMEC_API ntnmec_status ntnmec_oracle_compare(size_t instances, size_t max_tasks, size_t max_subchannels,
                                               uint64_t seed, const char *model_json, char **csv,
                                               char **summary_json);

/* Operation-count polynomials and the closed-form share rule. */
NTNMEC_API uint64_t ntnmec_op_count_qtcajosa(uint64_t tasks, uint64_t subchannels);
NTNMEC_API uint64_t ntnmec_op_count_resource_alloc(uint64_t uavs, uint64_t cluster_size);
NTNMEC_API ntnmec_status ntnmec_closed_form_shares(const double *cycles, const double *deadlines, size_t n,
                                                   double budget, double *shares_out);

#ifdef __cplusplus
}
#endif

#endif /* NTNMEC_NTNMEC_H */
