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


#include "ntnmec/ntnmec.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "ntnmec/compute_alloc.hpp"
#include "ntnmec/delay.hpp"
#include "ntnmec/harness.hpp"
#include "ntnmec/scenario.hpp"

using nlohmann::json;

struct ntnmec_config {
    json doc;
};

struct ntnmec_result {
    ntnmec::RunMetrics metrics;
};

struct ntnmec_sweep {
    ntnmec::SweepSpec spec;
};

struct ntnmec_table {
    ntnmec::SweepTable table;
};

namespace {

thread_local std::string g_last_error;

ntnmec_status fail(ntnmec_status status, std::string message) {
    g_last_error = std::move(message);
    return status;
}

ntnmec_status ok() {
    g_last_error.clear();
    return NTNMEC_OK;
}

/// Runs `body`, translating exceptions into status codes.
template <typename F>
ntnmec_status guarded(F &&body) {
    try {
        body();
        return ok();
    } catch (const ntnmec::ConfigError &e) {
        return fail(NTNMEC_ERR_CONFIG, e.what());
    } catch (const ntnmec::ConstraintViolation &e) {
        return fail(NTNMEC_ERR_CONSTRAINT, e.what());
    } catch (const ntnmec::InstanceTooLarge &e) {
        return fail(NTNMEC_ERR_TOO_LARGE, e.what());
    } catch (const std::invalid_argument &e) {
        return fail(NTNMEC_ERR_ARGUMENT, e.what());
    } catch (const std::exception &e) {
        return fail(NTNMEC_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(NTNMEC_ERR_INTERNAL, "unknown error");
    }
}

char *copy_string(const std::string &s) {
    auto *out = static_cast<char *>(std::malloc(s.size() + 1));
    if (out == nullptr) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

json parse_json(const char *text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        throw ntnmec::ConfigError(std::string("<document>: ") + e.what());
    }
}

bool read_file(const char *path, std::string &out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::ostringstream ss;
    ss << in.rdbuf();
    out = ss.str();
    return true;
}

bool to_variant(ntnmec_variant v, ntnmec::Variant &out) {
    switch (v) {
    case NTNMEC_VARIANT_ALL: out = ntnmec::Variant::All; return true;
    case NTNMEC_VARIANT_NO_LEO: out = ntnmec::Variant::NoLeo; return true;
    case NTNMEC_VARIANT_NO_HAPS: out = ntnmec::Variant::NoHaps; return true;
    case NTNMEC_VARIANT_NONADAPTIVE: out = ntnmec::Variant::NonAdaptive; return true;
    }
    return false;
}

#define NTNMEC_REQUIRE(cond)                                                 \
    do {                                                                     \
        if (!(cond)) return fail(NTNMEC_ERR_ARGUMENT, "invalid argument: " #cond); \
    } while (0)

}  // namespace

extern "C" {

const char *ntnmec_version(void) { return NTNMEC_VERSION_STRING; }

const char *ntnmec_status_string(ntnmec_status status) {
    switch (status) {
    case NTNMEC_OK: return "ok";
    case NTNMEC_ERR_ARGUMENT: return "invalid argument";
    case NTNMEC_ERR_CONFIG: return "invalid configuration";
    case NTNMEC_ERR_CONSTRAINT: return "constraint violation";
    case NTNMEC_ERR_IO: return "i/o error";
    case NTNMEC_ERR_TOO_LARGE: return "instance too large";
    case NTNMEC_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char *ntnmec_last_error(void) { return g_last_error.c_str(); }

void ntnmec_string_free(char *s) { std::free(s); }

ntnmec_status ntnmec_variant_parse(const char *name, ntnmec_variant *out) {
    NTNMEC_REQUIRE(name != nullptr && out != nullptr);
    const auto v = ntnmec::parse_variant(name);
    if (!v) return fail(NTNMEC_ERR_ARGUMENT, std::string("unknown variant: ") + name);
    *out = static_cast<ntnmec_variant>(static_cast<int>(*v));
    return ok();
}

const char *ntnmec_variant_name(ntnmec_variant variant) {
    ntnmec::Variant v;
    if (!to_variant(variant, v)) return "unknown";
    return ntnmec::to_string(v).data();
}

ntnmec_status ntnmec_config_parse(const char *json_text, ntnmec_config **out) {
    NTNMEC_REQUIRE(json_text != nullptr && out != nullptr);
    *out = nullptr;
    return guarded([&] {
        auto doc = parse_json(json_text);
        (void)ntnmec::parse_config(doc);
        *out = new ntnmec_config{std::move(doc)};
    });
}

ntnmec_status ntnmec_config_load_file(const char *path, ntnmec_config **out) {
    NTNMEC_REQUIRE(path != nullptr && out != nullptr);
    *out = nullptr;
    std::string text;
    if (!read_file(path, text)) return fail(NTNMEC_ERR_IO, std::string("cannot read ") + path);
    return ntnmec_config_parse(text.c_str(), out);
}

ntnmec_status ntnmec_config_set(ntnmec_config *config, const char *path, const char *value) {
    NTNMEC_REQUIRE(config != nullptr && path != nullptr && value != nullptr);
    return guarded([&] { ntnmec::apply_override(config->doc, path, std::string_view(value)); });
}

ntnmec_status ntnmec_config_validate(const ntnmec_config *config) {
    NTNMEC_REQUIRE(config != nullptr);
    return guarded([&] { (void)ntnmec::parse_config(config->doc); });
}

ntnmec_status ntnmec_config_seed(const ntnmec_config *config, uint64_t *out) {
    NTNMEC_REQUIRE(config != nullptr && out != nullptr);
    return guarded([&] { *out = ntnmec::parse_config(config->doc).seed; });
}

ntnmec_status ntnmec_config_task_count(const ntnmec_config *config, uint64_t seed, size_t *out) {
    NTNMEC_REQUIRE(config != nullptr && out != nullptr);
    return guarded([&] { *out = ntnmec::parse_config(config->doc).instantiate(seed).num_tasks(); });
}

void ntnmec_config_free(ntnmec_config *config) { delete config; }

ntnmec_status ntnmec_run(const ntnmec_config *config, ntnmec_variant variant, uint64_t seed, ntnmec_result **out) {
    NTNMEC_REQUIRE(config != nullptr && out != nullptr);
    *out = nullptr;
    ntnmec::Variant v;
    NTNMEC_REQUIRE(to_variant(variant, v));
    return guarded([&] {
        const auto cfg = ntnmec::parse_config(config->doc);
        *out = new ntnmec_result{ntnmec::run_config(cfg, v, seed)};
    });
}

ntnmec_status ntnmec_result_hat_tau(const ntnmec_result *result, double *out) {
    NTNMEC_REQUIRE(result != nullptr && out != nullptr);
    *out = result->metrics.hat_tau;
    return ok();
}

ntnmec_status ntnmec_result_total_delay(const ntnmec_result *result, double *out) {
    NTNMEC_REQUIRE(result != nullptr && out != nullptr);
    *out = result->metrics.total_delay_s;
    return ok();
}

ntnmec_status ntnmec_result_feasible_fraction(const ntnmec_result *result, double *out) {
    NTNMEC_REQUIRE(result != nullptr && out != nullptr);
    *out = result->metrics.feasible_fraction;
    return ok();
}

ntnmec_status ntnmec_result_destination_fraction(const ntnmec_result *result, ntnmec_destination dest, double *out) {
    NTNMEC_REQUIRE(result != nullptr && out != nullptr);
    const auto &d = result->metrics.destinations;
    switch (dest) {
    case NTNMEC_DEST_LOCAL: *out = d.local; break;
    case NTNMEC_DEST_HAPS: *out = d.haps; break;
    case NTNMEC_DEST_LEO: *out = d.leo; break;
    case NTNMEC_DEST_UNALLOCATED: *out = d.unallocated; break;
    default: return fail(NTNMEC_ERR_ARGUMENT, "unknown destination");
    }
    return ok();
}

ntnmec_status ntnmec_result_runtime_model(const ntnmec_result *result, double *out) {
    NTNMEC_REQUIRE(result != nullptr && out != nullptr);
    *out = result->metrics.runtime_model_s;
    return ok();
}

ntnmec_status ntnmec_result_task_count(const ntnmec_result *result, size_t *out) {
    NTNMEC_REQUIRE(result != nullptr && out != nullptr);
    *out = result->metrics.tasks;
    return ok();
}

ntnmec_status ntnmec_result_task_delay(const ntnmec_result *result, size_t task, double *out) {
    NTNMEC_REQUIRE(result != nullptr && out != nullptr);
    if (task >= result->metrics.per_task.size()) return fail(NTNMEC_ERR_ARGUMENT, "task index out of range");
    *out = result->metrics.per_task[task].total;
    return ok();
}

ntnmec_status ntnmec_result_json(const ntnmec_result *result, int per_task, char **out) {
    NTNMEC_REQUIRE(result != nullptr && out != nullptr);
    return guarded([&] { *out = copy_string(ntnmec::to_json(result->metrics, per_task != 0).dump(2) + "\n"); });
}

void ntnmec_result_free(ntnmec_result *result) { delete result; }

ntnmec_status ntnmec_sweep_parse(const char *json_text, ntnmec_sweep **out) {
    NTNMEC_REQUIRE(json_text != nullptr && out != nullptr);
    *out = nullptr;
    return guarded([&] { *out = new ntnmec_sweep{ntnmec::parse_sweep_text(json_text)}; });
}

ntnmec_status ntnmec_sweep_load_file(const char *path, ntnmec_sweep **out) {
    NTNMEC_REQUIRE(path != nullptr && out != nullptr);
    *out = nullptr;
    std::string text;
    if (!read_file(path, text)) return fail(NTNMEC_ERR_IO, std::string("cannot read ") + path);
    return ntnmec_sweep_parse(text.c_str(), out);
}

ntnmec_status ntnmec_sweep_set(ntnmec_sweep *sweep, const char *path, const char *value) {
    NTNMEC_REQUIRE(sweep != nullptr && path != nullptr && value != nullptr);
    return guarded([&] {
        auto doc = sweep->spec.scenario;
        ntnmec::apply_override(doc, path, std::string_view(value));
        auto spec = sweep->spec;
        spec.scenario = std::move(doc);
        spec.validate();
        sweep->spec = std::move(spec);
    });
}

ntnmec_status ntnmec_sweep_set_seeds(ntnmec_sweep *sweep, const char *seeds) {
    NTNMEC_REQUIRE(sweep != nullptr && seeds != nullptr);
    return guarded([&] { sweep->spec.seeds = ntnmec::parse_seed_list(seeds); });
}

ntnmec_status ntnmec_sweep_set_variants(ntnmec_sweep *sweep, const ntnmec_variant *variants, size_t count) {
    NTNMEC_REQUIRE(sweep != nullptr && variants != nullptr && count > 0);
    std::vector<ntnmec::Variant> list;
    for (size_t k = 0; k < count; ++k) {
        ntnmec::Variant v;
        NTNMEC_REQUIRE(to_variant(variants[k], v));
        list.push_back(v);
    }
    sweep->spec.variants = std::move(list);
    return ok();
}

ntnmec_status ntnmec_sweep_set_threads(ntnmec_sweep *sweep, unsigned threads) {
    NTNMEC_REQUIRE(sweep != nullptr);
    sweep->spec.threads = threads;
    return ok();
}

ntnmec_status ntnmec_sweep_run(const ntnmec_sweep *sweep, ntnmec_table **out) {
    NTNMEC_REQUIRE(sweep != nullptr && out != nullptr);
    *out = nullptr;
    return guarded([&] { *out = new ntnmec_table{ntnmec::run_sweep(sweep->spec)}; });
}

void ntnmec_sweep_free(ntnmec_sweep *sweep) { delete sweep; }

ntnmec_status ntnmec_table_csv(const ntnmec_table *table, char **out) {
    NTNMEC_REQUIRE(table != nullptr && out != nullptr);
    return guarded([&] { *out = copy_string(table->table.to_csv()); });
}

ntnmec_status ntnmec_table_json(const ntnmec_table *table, char **out) {
    NTNMEC_REQUIRE(table != nullptr && out != nullptr);
    return guarded([&] { *out = copy_string(table->table.to_json().dump(1) + "\n"); });
}

ntnmec_status ntnmec_table_rows(const ntnmec_table *table, size_t *out) {
    NTNMEC_REQUIRE(table != nullptr && out != nullptr);
    *out = table->table.cells.size();
    return ok();
}

ntnmec_status ntnmec_table_check_trends(const ntnmec_table *table, const char *figure, int *all_passed,
                                        char **report) {
    NTNMEC_REQUIRE(table != nullptr && figure != nullptr && all_passed != nullptr && report != nullptr);
    return guarded([&] {
        const auto checks = ntnmec::check_trends(table->table, figure);
        std::string text;
        bool passed = true;
        for (const auto &c : checks) {
            passed = passed && c.passed;
            text += (c.passed ? "PASS " : "FAIL ") + c.name + ": " + c.detail + "\n";
        }
        *all_passed = passed ? 1 : 0;
        *report = copy_string(text);
    });
}

void ntnmec_table_free(ntnmec_table *table) { delete table; }

ntnmec_status ntnmec_oracle_compare(size_t instances, size_t max_tasks, size_t max_subchannels, uint64_t seed,
                                    const char *model_json, char **csv, char **summary_json) {
    NTNMEC_REQUIRE(csv != nullptr && summary_json != nullptr && max_tasks >= 1 && max_subchannels >= 1);
    return guarded([&] {
        ntnmec::OracleCompareSpec spec;
        spec.instances = instances;
        spec.max_tasks = max_tasks;
        spec.max_subchannels = max_subchannels;
        spec.seed = seed;
        if (model_json != nullptr) spec.scenario = parse_json(model_json);
        const auto rows = ntnmec::oracle_compare(spec);
        *csv = copy_string(ntnmec::oracle_table_csv(rows));
        *summary_json = copy_string(ntnmec::oracle_summary(rows).dump(2) + "\n");
    });
}

uint64_t ntnmec_op_count_qtcajosa(uint64_t tasks, uint64_t subchannels) {
    return ntnmec::op_count_qtcajosa(tasks, subchannels);
}

uint64_t ntnmec_op_count_resource_alloc(uint64_t uavs, uint64_t cluster_size) {
    return ntnmec::op_count_resource_alloc(uavs, cluster_size);
}

ntnmec_status ntnmec_closed_form_shares(const double *cycles, const double *deadlines, size_t n, double budget,
                                        double *shares_out) {
    NTNMEC_REQUIRE(n == 0 || (cycles != nullptr && deadlines != nullptr && shares_out != nullptr));
    NTNMEC_REQUIRE(budget >= 0.0);
    std::vector<ntnmec::ComputeRequest> req;
    for (size_t i = 0; i < n; ++i) {
        if (!(cycles[i] > 0.0) || !(deadlines[i] > 0.0))
            return fail(NTNMEC_ERR_ARGUMENT, "cycles and deadlines must be positive");
        req.push_back({i, cycles[i], deadlines[i], 0.0});
    }
    const auto shares = ntnmec::closed_form_shares(req, budget);
    std::copy(shares.begin(), shares.end(), shares_out);
    return ok();
}

}  // extern "C"
