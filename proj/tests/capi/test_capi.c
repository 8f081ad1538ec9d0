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


/* Exercises the shared library through its C header only. */

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "ntnmec/ntnmec.h"

static int failures = 0;

#define EXPECT(cond)                                                   \
    do {                                                               \
        if (!(cond)) {                                                 \
            fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
            ++failures;                                                \
        }                                                              \
    } while (0)

static const char *kConfig =
    "{\"seed\": 3, \"bands\": {\"subchannels\": 6},"
    " \"generator\": {\"uavs\": 2, \"devices_per_cluster\": 4}}";

static const char *kSweep =
    "{\"name\": \"capi\", \"scenario\": {\"generator\": {\"uavs\": 2, \"devices_per_cluster\": 3}},"
    " \"sweep\": {\"axis\": {\"path\": \"task_generator.density\", \"values\": [50, 200]},"
    " \"series\": {\"path\": \"nodes.LEO.f_max\", \"values\": [1e9, 1e10]},"
    " \"variants\": [\"all\", \"no_leo\"], \"seeds\": 2}}";

static void test_errors(void) {
    ntnmec_config *cfg = NULL;
    EXPECT(ntnmec_config_parse("{not json", &cfg) == NTNMEC_ERR_CONFIG);
    EXPECT(cfg == NULL);
    EXPECT(strlen(ntnmec_last_error()) > 0);
    EXPECT(ntnmec_config_parse(NULL, &cfg) == NTNMEC_ERR_ARGUMENT);
    EXPECT(ntnmec_config_load_file("/nonexistent/file.json", &cfg) == NTNMEC_ERR_IO);
    EXPECT(ntnmec_config_parse("{\"generator\": {\"d_max\": -5}}", &cfg) == NTNMEC_ERR_CONFIG);
    EXPECT(strstr(ntnmec_last_error(), "generator.d_max") != NULL);

    ntnmec_variant v;
    EXPECT(ntnmec_variant_parse("no_haps", &v) == NTNMEC_OK && v == NTNMEC_VARIANT_NO_HAPS);
    EXPECT(ntnmec_variant_parse("bogus", &v) == NTNMEC_ERR_ARGUMENT);
    EXPECT(strcmp(ntnmec_variant_name(NTNMEC_VARIANT_NONADAPTIVE), "nonadaptive") == 0);
    EXPECT(strcmp(ntnmec_status_string(NTNMEC_ERR_CONSTRAINT), "") != 0);
    EXPECT(strlen(ntnmec_version()) > 0);

    double x = 0.0;
    EXPECT(ntnmec_result_hat_tau(NULL, &x) == NTNMEC_ERR_ARGUMENT);
    ntnmec_config_free(NULL);
    ntnmec_result_free(NULL);
}

static void test_run(void) {
    ntnmec_config *cfg = NULL;
    EXPECT(ntnmec_config_parse(kConfig, &cfg) == NTNMEC_OK);
    EXPECT(strlen(ntnmec_last_error()) == 0);
    EXPECT(ntnmec_config_set(cfg, "nodes.UAV.f_max", "2e9") == NTNMEC_OK);
    EXPECT(ntnmec_config_validate(cfg) == NTNMEC_OK);
    uint64_t seed = 0;
    EXPECT(ntnmec_config_seed(cfg, &seed) == NTNMEC_OK && seed == 3);
    size_t n = 0;
    EXPECT(ntnmec_config_task_count(cfg, 3, &n) == NTNMEC_OK && n == 8);

    ntnmec_result *a = NULL;
    ntnmec_result *b = NULL;
    EXPECT(ntnmec_run(cfg, NTNMEC_VARIANT_ALL, 3, &a) == NTNMEC_OK);
    EXPECT(ntnmec_run(cfg, NTNMEC_VARIANT_ALL, 3, &b) == NTNMEC_OK);
    char *ja = NULL;
    char *jb = NULL;
    EXPECT(ntnmec_result_json(a, 1, &ja) == NTNMEC_OK);
    EXPECT(ntnmec_result_json(b, 1, &jb) == NTNMEC_OK);
    EXPECT(ja && jb && strcmp(ja, jb) == 0);
    ntnmec_string_free(ja);
    ntnmec_string_free(jb);

    double sum = 0.0;
    for (int d = NTNMEC_DEST_LOCAL; d <= NTNMEC_DEST_UNALLOCATED; ++d) {
        double f = -1.0;
        EXPECT(ntnmec_result_destination_fraction(a, (ntnmec_destination)d, &f) == NTNMEC_OK);
        sum += f;
    }
    EXPECT(fabs(sum - 1.0) < 1e-12);
    double hat = -1.0, total = -1.0, feasible = -1.0, runtime = -1.0;
    EXPECT(ntnmec_result_hat_tau(a, &hat) == NTNMEC_OK && hat >= 0.0);
    EXPECT(ntnmec_result_total_delay(a, &total) == NTNMEC_OK && total >= hat);
    EXPECT(ntnmec_result_feasible_fraction(a, &feasible) == NTNMEC_OK && feasible >= 0.0 && feasible <= 1.0);
    EXPECT(ntnmec_result_runtime_model(a, &runtime) == NTNMEC_OK && runtime > 0.0);
    size_t tasks = 0;
    EXPECT(ntnmec_result_task_count(a, &tasks) == NTNMEC_OK && tasks == 8);
    double delay = 0.0;
    EXPECT(ntnmec_result_task_delay(a, 0, &delay) == NTNMEC_OK && delay > 0.0);
    EXPECT(ntnmec_result_task_delay(a, 8, &delay) == NTNMEC_ERR_ARGUMENT);

    ntnmec_result *r = NULL;
    EXPECT(ntnmec_run(cfg, NTNMEC_VARIANT_NO_LEO, 3, &r) == NTNMEC_OK);
    double leo = -1.0;
    EXPECT(ntnmec_result_destination_fraction(r, NTNMEC_DEST_LEO, &leo) == NTNMEC_OK && leo == 0.0);
    EXPECT(ntnmec_run(cfg, (ntnmec_variant)9, 3, &r) == NTNMEC_ERR_ARGUMENT);

    ntnmec_result_free(a);
    ntnmec_result_free(b);
    ntnmec_result_free(r);
    ntnmec_config_free(cfg);
}

static void test_sweep(void) {
    ntnmec_sweep *sweep = NULL;
    EXPECT(ntnmec_sweep_parse(kSweep, &sweep) == NTNMEC_OK);
    EXPECT(ntnmec_sweep_set_seeds(sweep, "1-2") == NTNMEC_OK);
    EXPECT(ntnmec_sweep_set_seeds(sweep, "x") == NTNMEC_ERR_CONFIG);
    EXPECT(ntnmec_sweep_set_threads(sweep, 1) == NTNMEC_OK);
    ntnmec_table *table = NULL;
    EXPECT(ntnmec_sweep_run(sweep, &table) == NTNMEC_OK);
    size_t rows = 0;
    EXPECT(ntnmec_table_rows(table, &rows) == NTNMEC_OK && rows == 8);
    char *csv = NULL;
    EXPECT(ntnmec_table_csv(table, &csv) == NTNMEC_OK);
    EXPECT(csv && strncmp(csv, "axis,axis_value,series,series_value,variant,n_seeds", 51) == 0);
    ntnmec_string_free(csv);
    int passed = 0;
    char *report = NULL;
    EXPECT(ntnmec_table_check_trends(table, "fig2", &passed, &report) == NTNMEC_OK);
    EXPECT(report && strstr(report, "no_leo identical across LEO pools") != NULL);
    ntnmec_string_free(report);
    EXPECT(ntnmec_table_check_trends(table, "fig7", &passed, &report) == NTNMEC_ERR_ARGUMENT);
    ntnmec_table_free(table);

    const ntnmec_variant only_all = NTNMEC_VARIANT_ALL;
    EXPECT(ntnmec_sweep_set_variants(sweep, &only_all, 1) == NTNMEC_OK);
    EXPECT(ntnmec_sweep_run(sweep, &table) == NTNMEC_OK);
    EXPECT(ntnmec_table_rows(table, &rows) == NTNMEC_OK && rows == 4);
    ntnmec_table_free(table);
    ntnmec_sweep_free(sweep);
}

static void test_utilities(void) {
    EXPECT(ntnmec_op_count_qtcajosa(10, 14) == 25820);
    EXPECT(ntnmec_op_count_resource_alloc(4, 10) == 2730);
    const double cycles[2] = {1e8, 4e8};
    const double deadlines[2] = {10.0, 10.0};
    double shares[2] = {0.0, 0.0};
    EXPECT(ntnmec_closed_form_shares(cycles, deadlines, 2, 3e9, shares) == NTNMEC_OK);
    EXPECT(fabs(shares[0] - 1e9) < 1e-3 && fabs(shares[1] - 2e9) < 1e-3);

    char *csv = NULL;
    char *summary = NULL;
    EXPECT(ntnmec_oracle_compare(5, 3, 2, 11, NULL, &csv, &summary) == NTNMEC_OK);
    EXPECT(summary && strstr(summary, "\"dominated_fraction\": 1.0") != NULL);
    ntnmec_string_free(csv);
    ntnmec_string_free(summary);
    EXPECT(ntnmec_oracle_compare(5, 9, 2, 11, NULL, &csv, &summary) == NTNMEC_ERR_TOO_LARGE);
}

int main(void) {
    test_errors();
    test_run();
    test_sweep();
    test_utilities();
    if (failures != 0) {
        fprintf(stderr, "%d expectation(s) failed\n", failures);
        return EXIT_FAILURE;
    }
    printf("C API: all expectations met\n");
    return EXIT_SUCCESS;
}
