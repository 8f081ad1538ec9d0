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


// Command-line front end. Everything goes through the C API.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ntnmec/ntnmec.h"

#ifndef NTNMEC_CONFIG_DIR
#define NTNMEC_CONFIG_DIR "configs"
#endif

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kUsage = 1, kConfig = 2, kConstraint = 3, kRuntime = 4 };

int exit_code(ntnmec_status s) {
    switch (s) {
    case NTNMEC_OK: return kOk;
    case NTNMEC_ERR_ARGUMENT:
    case NTNMEC_ERR_TOO_LARGE: return kUsage;
    case NTNMEC_ERR_CONFIG: return kConfig;
    case NTNMEC_ERR_CONSTRAINT: return kConstraint;
    default: return kRuntime;
    }
}

/// Thrown to unwind with a status; main() prints and maps it.
struct Failure {
    int code;
    std::string message;
};

void check(ntnmec_status s) {
    if (s != NTNMEC_OK) throw Failure{exit_code(s), std::string(ntnmec_status_string(s)) + ": " + ntnmec_last_error()};
}

struct StringDeleter {
    void operator()(char *s) const { ntnmec_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

template <typename T, void (*Free)(T *)>
struct HandleDeleter {
    void operator()(T *h) const { Free(h); }
};
using Config = std::unique_ptr<ntnmec_config, HandleDeleter<ntnmec_config, ntnmec_config_free>>;
using Result = std::unique_ptr<ntnmec_result, HandleDeleter<ntnmec_result, ntnmec_result_free>>;
using Sweep = std::unique_ptr<ntnmec_sweep, HandleDeleter<ntnmec_sweep, ntnmec_sweep_free>>;
using Table = std::unique_ptr<ntnmec_table, HandleDeleter<ntnmec_table, ntnmec_table_free>>;

std::pair<std::string, std::string> split_override(const std::string &kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw Failure{kUsage, "--set expects path=value, got '" + kv + "'"};
    return {kv.substr(0, eq), kv.substr(eq + 1)};
}

/// A sweep document has a top-level "sweep" key; anything else is a scenario.
bool looks_like_sweep(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw Failure{kRuntime, "cannot read " + path};
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return text.find("\"sweep\"") != std::string::npos;
}

void write_file(const fs::path &path, const std::string &text) {
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Failure{kRuntime, "cannot write " + path.string()};
    out << text;
    if (!out) throw Failure{kRuntime, "cannot write " + path.string()};
}

Config load_config(const std::string &path, const std::vector<std::string> &overrides) {
    ntnmec_config *raw = nullptr;
    check(ntnmec_config_load_file(path.c_str(), &raw));
    Config cfg(raw);
    for (const auto &kv : overrides) {
        const auto [k, v] = split_override(kv);
        check(ntnmec_config_set(cfg.get(), k.c_str(), v.c_str()));
    }
    check(ntnmec_config_validate(cfg.get()));
    return cfg;
}

Sweep load_sweep(const std::string &path, const std::vector<std::string> &overrides, const std::string &seeds,
                 const std::string &variants, unsigned threads) {
    ntnmec_sweep *raw = nullptr;
    check(ntnmec_sweep_load_file(path.c_str(), &raw));
    Sweep sweep(raw);
    for (const auto &kv : overrides) {
        const auto [k, v] = split_override(kv);
        check(ntnmec_sweep_set(sweep.get(), k.c_str(), v.c_str()));
    }
    if (!seeds.empty()) check(ntnmec_sweep_set_seeds(sweep.get(), seeds.c_str()));
    if (!variants.empty()) {
        std::vector<ntnmec_variant> list;
        std::size_t start = 0;
        while (start <= variants.size()) {
            const auto comma = variants.find(',', start);
            const auto name = variants.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            ntnmec_variant v;
            check(ntnmec_variant_parse(name.c_str(), &v));
            list.push_back(v);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        check(ntnmec_sweep_set_variants(sweep.get(), list.data(), list.size()));
    }
    check(ntnmec_sweep_set_threads(sweep.get(), threads));
    return sweep;
}

/// Writes both artifacts under `out`, or prints the selected format.
void emit_table(const ntnmec_table *table, const std::string &out, const std::string &stem, const std::string &format) {
    char *csv = nullptr;
    char *json = nullptr;
    check(ntnmec_table_csv(table, &csv));
    OwnedString csv_owned(csv);
    check(ntnmec_table_json(table, &json));
    OwnedString json_owned(json);
    if (out.empty()) {
        std::cout << (format == "json" ? json : csv);
        return;
    }
    write_file(fs::path(out) / (stem + ".csv"), csv);
    write_file(fs::path(out) / (stem + ".json"), json);
    std::cerr << "wrote " << (fs::path(out) / (stem + ".csv")).string() << " and "
              << (fs::path(out) / (stem + ".json")).string() << "\n";
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"ntnmec: task offloading simulator for UAV/HAPS/LEO edge computing"};
    app.set_version_flag("--version", std::string(ntnmec_version()));
    app.require_subcommand(1);

    std::string scenario;
    std::vector<std::string> overrides;
    std::string out;
    std::string format = "csv";
    std::string variant = "all";
    std::string variants;
    std::string seeds;
    std::string config_dir = NTNMEC_CONFIG_DIR;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    bool per_task = true;

    auto *validate = app.add_subcommand("validate", "Check a scenario or sweep document against the schema");
    validate->add_option("--scenario", scenario, "Scenario or sweep document")->required()->check(CLI::ExistingFile);
    validate->add_option("--set", overrides, "Override path=value (repeatable)");

    auto *run = app.add_subcommand("run", "Run the optimizer once and print its metrics as JSON");
    run->add_option("--scenario", scenario, "Scenario document")->required()->check(CLI::ExistingFile);
    run->add_option("--set", overrides, "Override path=value (repeatable)");
    auto *seed_opt = run->add_option("--seed", seed, "Run seed (default: the document's seed)");
    run->add_option("--variant", variant, "all | no_leo | no_haps | nonadaptive");
    run->add_option("--out", out, "Output directory (writes run.json)");
    run->add_option("--format", format, "Output format")->check(CLI::IsMember({"json"}));
    run->add_flag("!--no-per-task", per_task, "Omit the per-task breakdown");

    auto *sweep = app.add_subcommand("sweep", "Run a parameter sweep and emit CSV and JSON tables");
    sweep->add_option("--scenario", scenario, "Sweep document")->required()->check(CLI::ExistingFile);
    sweep->add_option("--set", overrides, "Override path=value in the base scenario (repeatable)");
    sweep->add_option("--seeds", seeds, "N, a-b or a,b,c");
    sweep->add_option("--variant", variants, "Comma-separated variants (default: the document's)");
    sweep->add_option("--out", out, "Output directory (writes sweep.csv and sweep.json)");
    sweep->add_option("--format", format, "Format printed when --out is absent")->check(CLI::IsMember({"csv", "json"}));
    sweep->add_option("--threads", threads, "Worker threads (0: all cores)");

    std::size_t max_tasks = 4;
    std::size_t max_subchannels = 3;
    std::size_t instances = 100;
    std::uint64_t oracle_seed = 1;
    auto *oracle = app.add_subcommand("oracle-compare", "Compare the greedy optimizer with exhaustive search");
    oracle->add_option("--max-tasks", max_tasks, "Largest task count per instance")->check(CLI::Range(1, 5));
    oracle->add_option("--max-subchannels", max_subchannels, "Largest subchannel count")->check(CLI::Range(1, 4));
    oracle->add_option("--instances", instances, "Number of random instances");
    oracle->add_option("--seed", oracle_seed, "Master seed");
    oracle->add_option("--scenario", scenario, "Scenario fragment with model settings")->check(CLI::ExistingFile);
    oracle->add_option("--out", out, "Output directory (writes oracle_gaps.csv and oracle_summary.json)");
    oracle->add_option("--format", format, "Format printed when --out is absent")->check(CLI::IsMember({"csv", "json"}));

    std::string figure;
    auto *repro = app.add_subcommand("repro", "Run a shipped figure sweep and its trend checks");
    repro->add_option("figure", figure, "fig2 | fig3 | fig4")->required()->check(CLI::IsMember({"fig2", "fig3", "fig4"}));
    repro->add_option("--seeds", seeds, "N, a-b or a,b,c (default: the document's)");
    repro->add_option("--set", overrides, "Override path=value in the base scenario (repeatable)");
    repro->add_option("--out", out, "Output directory (writes <figure>.csv, .json and _trends.txt)");
    repro->add_option("--format", format, "Format printed when --out is absent")->check(CLI::IsMember({"csv", "json"}));
    repro->add_option("--threads", threads, "Worker threads (0: all cores)");
    repro->add_option("--config-dir", config_dir, "Directory holding the shipped sweep documents");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*validate) {
            if (looks_like_sweep(scenario)) {
                auto sw = load_sweep(scenario, overrides, "", "", 0);
                std::cout << "ok: sweep document " << scenario << "\n";
            } else {
                auto cfg = load_config(scenario, overrides);
                std::uint64_t s = 0;
                std::size_t n = 0;
                check(ntnmec_config_seed(cfg.get(), &s));
                check(ntnmec_config_task_count(cfg.get(), s, &n));
                std::cout << "ok: scenario " << scenario << " (" << n << " tasks at seed " << s << ")\n";
            }
        } else if (*run) {
            auto cfg = load_config(scenario, overrides);
            ntnmec_variant v;
            check(ntnmec_variant_parse(variant.c_str(), &v));
            if (seed_opt->count() == 0) check(ntnmec_config_seed(cfg.get(), &seed));
            ntnmec_result *raw = nullptr;
            check(ntnmec_run(cfg.get(), v, seed, &raw));
            Result result(raw);
            char *json = nullptr;
            check(ntnmec_result_json(result.get(), per_task ? 1 : 0, &json));
            OwnedString owned(json);
            if (out.empty()) {
                std::cout << json;
            } else {
                write_file(fs::path(out) / "run.json", json);
                std::cerr << "wrote " << (fs::path(out) / "run.json").string() << "\n";
            }
        } else if (*sweep) {
            auto sw = load_sweep(scenario, overrides, seeds, variants, threads);
            ntnmec_table *raw = nullptr;
            check(ntnmec_sweep_run(sw.get(), &raw));
            Table table(raw);
            emit_table(table.get(), out, "sweep", format);
        } else if (*oracle) {
            std::string model;
            if (!scenario.empty()) {
                std::ifstream in(scenario);
                model.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
            }
            char *csv = nullptr;
            char *summary = nullptr;
            check(ntnmec_oracle_compare(instances, max_tasks, max_subchannels, oracle_seed,
                                        model.empty() ? nullptr : model.c_str(), &csv, &summary));
            OwnedString csv_owned(csv);
            OwnedString summary_owned(summary);
            if (out.empty()) {
                std::cout << (format == "json" ? summary : csv);
            } else {
                write_file(fs::path(out) / "oracle_gaps.csv", csv);
                write_file(fs::path(out) / "oracle_summary.json", summary);
                std::cerr << summary;
            }
            const std::string s(summary);
            const bool all_ok = s.find("\"constraints_ok_fraction\": 1.0") != std::string::npos &&
                                s.find("\"dominated_fraction\": 1.0") != std::string::npos;
            if (!all_ok) throw Failure{kConstraint, "greedy result violated a constraint or beat the exhaustive optimum"};
        } else if (*repro) {
            const auto path = (fs::path(config_dir) / (figure + ".json")).string();
            auto sw = load_sweep(path, overrides, seeds, "", threads);
            ntnmec_table *raw = nullptr;
            check(ntnmec_sweep_run(sw.get(), &raw));
            Table table(raw);
            emit_table(table.get(), out, figure, format);
            int passed = 0;
            char *report = nullptr;
            check(ntnmec_table_check_trends(table.get(), figure.c_str(), &passed, &report));
            OwnedString report_owned(report);
            if (!out.empty()) write_file(fs::path(out) / (figure + "_trends.txt"), report);
            std::cerr << report;
        }
    } catch (const Failure &f) {
        std::cerr << "error: " << f.message << "\n";
        return f.code;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    }
    return kOk;
}
