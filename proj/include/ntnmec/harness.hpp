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


#pragma once

// Monte-Carlo experiment runner: single runs, parameter sweeps with seed
// aggregation, trend checks for the shipped sweeps, and the greedy-versus-
// oracle comparison on tiny instances.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ntnmec/delay.hpp"
#include "ntnmec/qtcajosa.hpp"
#include "ntnmec/scenario.hpp"

namespace ntnmec {

/// Fractions of all tasks; they sum to one.
struct DestinationHistogram {
    double local = 0.0;
    double haps = 0.0;
    double leo = 0.0;
    double unallocated = 0.0;
};

struct RunMetrics {
    std::uint64_t seed = 0;
    Variant variant = Variant::All;
    std::size_t tasks = 0;
    double hat_tau = 0.0;
    double total_delay_s = 0.0;
    double feasible_fraction = 0.0;
    DestinationHistogram destinations;
    std::vector<DelayBreakdown> per_task;
    std::vector<std::uint8_t> feasible;  // allocated and on time
    double runtime_model_s = 0.0;
    double wall_clock_s = 0.0;  // informational; never serialized
    std::size_t iterations = 0;
    std::size_t rejections = 0;
};

/// Capacities drawn from `seed`, the selected variant, delay evaluation and a
/// hard constraint check (throws ConstraintViolation).
RunMetrics run_once(const Scenario &scenario, Variant variant, std::uint64_t seed);
RunMetrics run_config(const ScenarioConfig &config, Variant variant, std::uint64_t seed);

nlohmann::json to_json(const RunMetrics &metrics, bool per_task = true);

/// Aggregated metric names, in CSV column order.
const std::vector<std::string> &metric_names();
double metric_value(const RunMetrics &metrics, std::string_view name);

struct SweepAxis {
    std::string path;  // dotted path into the scenario document
    std::vector<nlohmann::json> values;
};

struct SweepSpec {
    std::string name;
    nlohmann::json scenario;  // base configuration document
    SweepAxis axis;
    std::optional<SweepAxis> series;
    std::vector<Variant> variants{Variant::All};
    std::vector<std::uint64_t> seeds;
    unsigned threads = 0;  // 0: hardware concurrency

    void validate() const;
};

/// {"name", "scenario": {...}, "sweep": {"axis": {"path", "values"},
///  "series": {...}, "variants": [...], "seeds": N | [..]}}
SweepSpec parse_sweep(const nlohmann::json &doc);
SweepSpec parse_sweep_text(std::string_view text);

/// "N" (seeds 1..N), "a-b" or "a,b,c".
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

struct Aggregate {
    double mean = 0.0;
    double std_error = 0.0;
};

struct SweepCell {
    nlohmann::json axis_value;
    nlohmann::json series_value;  // null without a series axis
    Variant variant = Variant::All;
    std::vector<RunMetrics> runs;  // in seed order
    std::vector<Aggregate> aggregates;  // aligned with metric_names()
};

struct SweepTable {
    SweepSpec spec;
    std::vector<SweepCell> cells;  // series-major, then axis, then variant

    std::string to_csv() const;
    nlohmann::json to_json() const;
    const SweepCell *find(const nlohmann::json &axis_value, const nlohmann::json &series_value, Variant v) const;
};

/// Every cell runs with the same seed list, so cells differing only in a
/// pool size see identical geometry, tasks and fading.
SweepTable run_sweep(const SweepSpec &spec);

struct TrendCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Figure-specific checks: "fig2", "fig3" or "fig4".
std::vector<TrendCheck> check_trends(const SweepTable &table, std::string_view figure);

struct OracleCompareSpec {
    std::size_t instances = 100;
    std::size_t max_tasks = 4;
    std::size_t max_subchannels = 3;
    std::size_t uavs = 1;
    std::uint64_t seed = 1;
    nlohmann::json scenario = nlohmann::json::object();  // model overrides
};

struct OracleComparison {
    std::uint64_t seed = 0;
    std::size_t tasks = 0;
    std::size_t subchannels = 0;
    double search_space = 0.0;
    double greedy_hat_tau = 0.0;
    std::size_t greedy_unallocated = 0;
    bool greedy_on_time = false;  // every task allocated and within its deadline
    double oracle_hat_tau = 0.0;
    std::size_t oracle_unallocated = 0;
    std::string reference;  // "optimum" or "relaxed"
    double gap = 0.0;       // relative; +inf when the greedy leaves more tasks out
    bool constraints_ok = false;
    bool dominated = false;  // greedy is no better than the reference
};

std::vector<OracleComparison> oracle_compare(const OracleCompareSpec &spec);
std::string oracle_table_csv(const std::vector<OracleComparison> &rows);
nlohmann::json oracle_summary(const std::vector<OracleComparison> &rows);

/// Shortest round-trip text for a double ("inf"/"nan" spelled out).
std::string format_number(double v);

}  // namespace ntnmec
