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


#include "ntnmec/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "ntnmec/channel.hpp"
#include "ntnmec/oracle.hpp"

namespace ntnmec {

using nlohmann::json;

namespace {

constexpr double kDeadlineTolerance = 1e-9;


json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

RunMetrics run_once(const Scenario &scenario, Variant variant, std::uint64_t seed) {
    const auto start = std::chrono::steady_clock::now();
    const auto caps = build_capacity_table(scenario, seed);
    QtcajosaOptions options;
    options.variant = variant;
    const auto result = qtcajosa(scenario, caps, options);

    CheckOptions check;
    check.tau_op = result.tau_op;
    check.exempt = result.flagged;
    const auto report = check_constraints(result.allocation, scenario, caps, check);
    if (!report.ok()) throw ConstraintViolation("seed " + std::to_string(seed) + ": " + report.summary());
    const auto allowed = restrict_destinations(variant);
    for (const auto &d : result.allocation.uavs) {
        for (std::size_t l = 0; l < d.tasks; ++l) {
            if ((d.beta_h[l] != 0 && !allowed.haps) || (d.beta_s[l] != 0 && !allowed.leo))
                throw ConstraintViolation("seed " + std::to_string(seed) + ": offload to an excluded node");
        }
    }

    const auto delays = weighted_sum_delay(result.allocation, scenario, caps, result.tau_op);
    RunMetrics m;
    m.seed = seed;
    m.variant = variant;
    m.tasks = scenario.num_tasks();
    m.hat_tau = delays.hat_tau;
    m.total_delay_s = delays.total;
    m.per_task = delays.per_task;
    m.runtime_model_s = result.tau_op;
    m.iterations = result.iterations;
    m.rejections = result.rejections;
    m.feasible.assign(m.tasks, 0);

    std::size_t on_time = 0;
    std::array<std::size_t, kDestinations> counts{};
    for (std::size_t u = 0; u < scenario.num_uavs(); ++u) {
        const auto &d = result.allocation.uavs[u];
        for (std::size_t l = 0; l < d.tasks; ++l) {
            if (!d.allocated(l)) continue;
            const auto i = scenario.clusters[u].devices[l];
            ++counts[static_cast<std::size_t>(d.destination(l))];
            if (delays.per_task[i].total <= scenario.tasks[i].deadline * (1.0 + kDeadlineTolerance)) {
                m.feasible[i] = 1;
                ++on_time;
            }
        }
    }
    const double n = static_cast<double>(std::max<std::size_t>(m.tasks, 1));
    m.feasible_fraction = static_cast<double>(on_time) / n;
    m.destinations.local = static_cast<double>(counts[0]) / n;
    m.destinations.haps = static_cast<double>(counts[1]) / n;
    m.destinations.leo = static_cast<double>(counts[2]) / n;
    m.destinations.unallocated = static_cast<double>(delays.unallocated) / n;
    m.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return m;
}

RunMetrics run_config(const ScenarioConfig &config, Variant variant, std::uint64_t seed) {
    return run_once(config.instantiate(seed), variant, seed);
}

json to_json(const RunMetrics &m, bool per_task) {
    json j = {
        {"seed", m.seed},
        {"variant", std::string(to_string(m.variant))},
        {"tasks", m.tasks},
        {"hat_tau", number_or_null(m.hat_tau)},
        {"total_delay_s", number_or_null(m.total_delay_s)},
        {"feasible_fraction", m.feasible_fraction},
        {"destinations",
         {{"local", m.destinations.local},
          {"haps", m.destinations.haps},
          {"leo", m.destinations.leo},
          {"unallocated", m.destinations.unallocated}}},
        {"runtime_model_s", m.runtime_model_s},
        {"iterations", m.iterations},
        {"rejections", m.rejections},
    };
    if (per_task) {
        json tasks = json::array();
        for (std::size_t i = 0; i < m.per_task.size(); ++i) {
            const auto &d = m.per_task[i];
            tasks.push_back({{"task", i},
                             {"access_s", number_or_null(d.access)},
                             {"feeder_s", number_or_null(d.feeder)},
                             {"compute_s", number_or_null(d.compute)},
                             {"runtime_s", number_or_null(d.runtime)},
                             {"total_s", number_or_null(d.total)},
                             {"feasible", m.feasible[i] != 0}});
        }
        j["per_task"] = std::move(tasks);
    }
    return j;
}

const std::vector<std::string> &metric_names() {
    static const std::vector<std::string> names{"hat_tau",   "total_delay_s", "feasible_fraction",
                                                "frac_local", "frac_haps",     "frac_leo",
                                                "frac_unallocated", "frac_remote", "runtime_model_s"};
    return names;
}

double metric_value(const RunMetrics &m, std::string_view name) {
    if (name == "hat_tau") return m.hat_tau;
    if (name == "total_delay_s") return m.total_delay_s;
    if (name == "feasible_fraction") return m.feasible_fraction;
    if (name == "frac_local") return m.destinations.local;
    if (name == "frac_haps") return m.destinations.haps;
    if (name == "frac_leo") return m.destinations.leo;
    if (name == "frac_unallocated") return m.destinations.unallocated;
    if (name == "frac_remote") return m.destinations.haps + m.destinations.leo;
    if (name == "runtime_model_s") return m.runtime_model_s;
    throw std::invalid_argument("unknown metric: " + std::string(name));
}

// ---------------------------------------------------------------------------
// Sweep documents

namespace {

[[noreturn]] void fail(const std::string &path, const std::string &what) { throw ConfigError(path + ": " + what); }

void check_keys(const json &obj, const std::string &path, std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto &[key, value] : obj.items()) {
        (void)value;
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            fail(path.empty() ? key : path + "." + key, "unknown key");
    }
}

SweepAxis parse_axis(const json &j, const std::string &path) {
    check_keys(j, path, {"path", "values"});
    SweepAxis a;
    if (!j.contains("path") || !j["path"].is_string()) fail(path + ".path", "expected a string");
    a.path = j["path"].get<std::string>();
    if (!j.contains("values") || !j["values"].is_array() || j["values"].empty())
        fail(path + ".values", "expected a nonempty array");
    for (const auto &v : j["values"]) a.values.push_back(v);
    return a;
}

json cell_document(const SweepSpec &spec, const json &axis_value, const json &series_value) {
    json doc = spec.scenario;
    if (spec.series) apply_override(doc, spec.series->path, series_value);
    apply_override(doc, spec.axis.path, axis_value);
    return doc;
}

std::string value_text(const json &v) {
    if (v.is_null()) return "";
    if (v.is_number()) return format_number(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

}  // namespace

void SweepSpec::validate() const {
    if (axis.values.empty()) fail("sweep.axis.values", "must not be empty");
    if (series && series->values.empty()) fail("sweep.series.values", "must not be empty");
    if (seeds.empty()) fail("sweep.seeds", "must not be empty");
    if (variants.empty()) fail("sweep.variants", "must not be empty");
    const std::vector<json> series_values = series ? series->values : std::vector<json>{json(nullptr)};
    for (const auto &s : series_values) {
        for (const auto &a : axis.values) {
            try {
                (void)parse_config(cell_document(*this, a, s));
            } catch (const ConfigError &e) {
                std::string where = axis.path + "=" + value_text(a);
                if (series) where = series->path + "=" + value_text(s) + ", " + where;
                throw ConfigError(std::string(e.what()) + " (sweep cell " + where + ")");
            }
        }
    }
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
    auto number = [&](std::string_view s) {
        std::uint64_t v = 0;
        const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
        if (r.ec != std::errc() || r.ptr != s.data() + s.size() || s.empty())
            throw ConfigError("seeds: cannot parse '" + std::string(text) + "'");
        return v;
    };
    std::vector<std::uint64_t> seeds;
    if (const auto dash = text.find('-'); dash != std::string_view::npos) {
        const auto lo = number(text.substr(0, dash));
        const auto hi = number(text.substr(dash + 1));
        if (hi < lo) throw ConfigError("seeds: empty range '" + std::string(text) + "'");
        for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
    } else if (text.find(',') != std::string_view::npos) {
        std::size_t start = 0;
        while (start <= text.size()) {
            const auto comma = text.find(',', start);
            const auto end = comma == std::string_view::npos ? text.size() : comma;
            seeds.push_back(number(text.substr(start, end - start)));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
    } else {
        const auto n = number(text);
        for (std::uint64_t s = 1; s <= n; ++s) seeds.push_back(s);
    }
    if (seeds.empty()) throw ConfigError("seeds: empty list");
    return seeds;
}

SweepSpec parse_sweep(const json &doc) {
    check_keys(doc, "", {"name", "scenario", "sweep"});
    SweepSpec spec;
    if (doc.contains("name")) {
        if (!doc["name"].is_string()) fail("name", "expected a string");
        spec.name = doc["name"].get<std::string>();
    }
    if (!doc.contains("scenario") || !doc["scenario"].is_object()) fail("scenario", "expected an object");
    spec.scenario = doc["scenario"];
    if (!doc.contains("sweep")) fail("sweep", "required");
    const auto &sw = doc["sweep"];
    check_keys(sw, "sweep", {"axis", "series", "variants", "seeds", "threads"});
    if (!sw.contains("axis")) fail("sweep.axis", "required");
    spec.axis = parse_axis(sw["axis"], "sweep.axis");
    if (sw.contains("series")) spec.series = parse_axis(sw["series"], "sweep.series");
    if (sw.contains("variants")) {
        if (!sw["variants"].is_array()) fail("sweep.variants", "expected an array");
        spec.variants.clear();
        for (const auto &v : sw["variants"]) {
            const auto parsed = v.is_string() ? parse_variant(v.get<std::string>()) : std::nullopt;
            if (!parsed) fail("sweep.variants", "unknown variant " + v.dump());
            spec.variants.push_back(*parsed);
        }
    }
    if (!sw.contains("seeds")) fail("sweep.seeds", "required");
    const auto &seeds = sw["seeds"];
    // Parsed JSON stores non-negative literals as unsigned, programmatic
    // documents may hold them as signed; accept both.
    auto non_negative = [](const json &v) { return v.is_number_integer() && v.get<std::int64_t>() >= 0; };
    if (non_negative(seeds)) {
        spec.seeds = parse_seed_list(std::to_string(seeds.get<std::uint64_t>()));
    } else if (seeds.is_array()) {
        for (const auto &s : seeds) {
            if (!non_negative(s)) fail("sweep.seeds", "expected non-negative integers");
            spec.seeds.push_back(s.get<std::uint64_t>());
        }
    } else if (seeds.is_string()) {
        spec.seeds = parse_seed_list(seeds.get<std::string>());
    } else {
        fail("sweep.seeds", "expected a count, a list or a range string");
    }
    if (sw.contains("threads")) {
        if (!non_negative(sw["threads"])) fail("sweep.threads", "expected a non-negative integer");
        spec.threads = sw["threads"].get<unsigned>();
    }
    spec.validate();
    return spec;
}

SweepSpec parse_sweep_text(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ConfigError(std::string("<document>: ") + e.what());
    }
    return parse_sweep(doc);
}

// ---------------------------------------------------------------------------
// Sweep execution

SweepTable run_sweep(const SweepSpec &spec) {
    spec.validate();
    SweepTable table;
    table.spec = spec;

    std::vector<ScenarioConfig> configs;
    std::vector<std::size_t> config_of_cell;
    const std::vector<json> series_values = spec.series ? spec.series->values : std::vector<json>{json(nullptr)};
    for (const auto &s : series_values) {
        for (const auto &a : spec.axis.values) {
            configs.push_back(parse_config(cell_document(spec, a, s)));
            for (auto v : spec.variants) {
                SweepCell cell;
                cell.axis_value = a;
                cell.series_value = s;
                cell.variant = v;
                cell.runs.resize(spec.seeds.size());
                table.cells.push_back(std::move(cell));
                config_of_cell.push_back(configs.size() - 1);
            }
        }
    }

    const std::size_t n_seeds = spec.seeds.size();
    const std::size_t jobs = table.cells.size() * n_seeds;
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(jobs);
    auto worker = [&] {
        for (std::size_t job = next++; job < jobs; job = next++) {
            const std::size_t c = job / n_seeds;
            const std::size_t k = job % n_seeds;
            try {
                table.cells[c].runs[k] = run_config(configs[config_of_cell[c]], table.cells[c].variant, spec.seeds[k]);
            } catch (...) {
                errors[job] = std::current_exception();
                next = jobs;  // abort the sweep
            }
        }
    };
    unsigned threads = spec.threads != 0 ? spec.threads : std::max(1U, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(jobs, 1)));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto &t : pool) t.join();
    for (const auto &e : errors)
        if (e) std::rethrow_exception(e);

    for (auto &cell : table.cells) {
        for (const auto &name : metric_names()) {
            double sum = 0.0;
            for (const auto &r : cell.runs) sum += metric_value(r, name);
            const double n = static_cast<double>(cell.runs.size());
            Aggregate agg;
            agg.mean = sum / n;
            if (cell.runs.size() > 1) {
                double sq = 0.0;
                for (const auto &r : cell.runs) {
                    const double d = metric_value(r, name) - agg.mean;
                    sq += d * d;
                }
                agg.std_error = std::sqrt(sq / (n - 1.0) / n);
            }
            cell.aggregates.push_back(agg);
        }
    }
    return table;
}

std::string SweepTable::to_csv() const {
    std::ostringstream out;
    out << "axis,axis_value,series,series_value,variant,n_seeds";
    for (const auto &name : metric_names()) out << ',' << name << "_mean," << name << "_stderr";
    out << '\n';
    const std::string series_path = spec.series ? spec.series->path : "";
    for (const auto &cell : cells) {
        out << spec.axis.path << ',' << value_text(cell.axis_value) << ',' << series_path << ','
            << value_text(cell.series_value) << ',' << to_string(cell.variant) << ',' << cell.runs.size();
        for (const auto &agg : cell.aggregates)
            out << ',' << format_number(agg.mean) << ',' << format_number(agg.std_error);
        out << '\n';
    }
    return out.str();
}

json SweepTable::to_json() const {
    json j;
    j["name"] = spec.name;
    j["axis"] = {{"path", spec.axis.path}, {"values", spec.axis.values}};
    j["series"] = spec.series ? json{{"path", spec.series->path}, {"values", spec.series->values}} : json(nullptr);
    json variants = json::array();
    for (auto v : spec.variants) variants.push_back(std::string(to_string(v)));
    j["variants"] = variants;
    j["seeds"] = spec.seeds;
    json out_cells = json::array();
    for (const auto &cell : cells) {
        json c;
        c["axis_value"] = cell.axis_value;
        c["series_value"] = cell.series_value;
        c["variant"] = std::string(to_string(cell.variant));
        c["n_seeds"] = cell.runs.size();
        json mean;
        json err;
        for (std::size_t k = 0; k < metric_names().size(); ++k) {
            mean[metric_names()[k]] = number_or_null(cell.aggregates[k].mean);
            err[metric_names()[k]] = number_or_null(cell.aggregates[k].std_error);
        }
        c["mean"] = mean;
        c["stderr"] = err;
        json runs = json::array();
        for (const auto &r : cell.runs) runs.push_back(ntnmec::to_json(r, false));
        c["runs"] = std::move(runs);
        out_cells.push_back(std::move(c));
    }
    j["cells"] = std::move(out_cells);
    return j;
}

const SweepCell *SweepTable::find(const json &axis_value, const json &series_value, Variant v) const {
    for (const auto &c : cells)
        if (c.axis_value == axis_value && c.series_value == series_value && c.variant == v) return &c;
    return nullptr;
}

// ---------------------------------------------------------------------------
// Trend checks

namespace {

std::size_t metric_index(std::string_view name) {
    const auto &names = metric_names();
    return static_cast<std::size_t>(std::find(names.begin(), names.end(), name) - names.begin());
}

double mean_of(const SweepCell &c, std::string_view metric) { return c.aggregates[metric_index(metric)].mean; }

std::vector<json> series_or_null(const SweepTable &t) {
    return t.spec.series ? t.spec.series->values : std::vector<json>{json(nullptr)};
}

std::string point_name(const SweepTable &t, const json &a, const json &s) {
    std::string out = t.spec.axis.path + "=" + value_text(a);
    if (t.spec.series) out = t.spec.series->path + "=" + value_text(s) + ", " + out;
    return out;
}

/// Variant `better` has mean `metric` no larger than `worse` at every point.
TrendCheck dominance(const SweepTable &t, std::string name, std::string_view metric, Variant better, Variant worse) {
    TrendCheck check{std::move(name), true, ""};
    std::size_t points = 0;
    for (const auto &s : series_or_null(t)) {
        for (const auto &a : t.spec.axis.values) {
            const auto *b = t.find(a, s, better);
            const auto *w = t.find(a, s, worse);
            if (b == nullptr || w == nullptr) {
                check.passed = false;
                check.detail = "missing variant at " + point_name(t, a, s);
                return check;
            }
            ++points;
            if (!(mean_of(*b, metric) <= mean_of(*w, metric))) {
                check.passed = false;
                check.detail += point_name(t, a, s) + ": " + format_number(mean_of(*b, metric)) + " > " +
                                format_number(mean_of(*w, metric)) + "; ";
            }
        }
    }
    if (check.passed) check.detail = std::to_string(points) + " points";
    return check;
}

/// Mean `metric` of `variant` is nondecreasing (or nonincreasing) along the
/// axis for every series value, in the listed order.
TrendCheck monotone_along_axis(const SweepTable &t, std::string name, std::string_view metric, Variant variant,
                               bool increasing) {
    TrendCheck check{std::move(name), true, ""};
    for (const auto &s : series_or_null(t)) {
        const SweepCell *prev = nullptr;
        for (const auto &a : t.spec.axis.values) {
            const auto *c = t.find(a, s, variant);
            if (c == nullptr) {
                check.passed = false;
                check.detail = "missing variant at " + point_name(t, a, s);
                return check;
            }
            if (prev != nullptr) {
                const double x = mean_of(*prev, metric);
                const double y = mean_of(*c, metric);
                if (increasing ? y < x : y > x) {
                    check.passed = false;
                    check.detail += point_name(t, a, s) + ": " + format_number(x) + " -> " + format_number(y) + "; ";
                }
            }
            prev = c;
        }
    }
    if (check.passed) check.detail = "monotone over " + std::to_string(t.spec.axis.values.size()) + " points";
    return check;
}

/// Same along the series axis, at every axis point.
TrendCheck monotone_along_series(const SweepTable &t, std::string name, std::string_view metric, Variant variant,
                                 bool increasing) {
    TrendCheck check{std::move(name), true, ""};
    if (!t.spec.series) return {check.name, false, "no series axis"};
    for (const auto &a : t.spec.axis.values) {
        const SweepCell *prev = nullptr;
        for (const auto &s : t.spec.series->values) {
            const auto *c = t.find(a, s, variant);
            if (c == nullptr) return {check.name, false, "missing variant at " + point_name(t, a, s)};
            if (prev != nullptr) {
                const double x = mean_of(*prev, metric);
                const double y = mean_of(*c, metric);
                if (increasing ? y < x : y > x) {
                    check.passed = false;
                    check.detail += point_name(t, a, s) + ": " + format_number(x) + " -> " + format_number(y) + "; ";
                }
            }
            prev = c;
        }
    }
    if (check.passed) check.detail = "monotone at " + std::to_string(t.spec.axis.values.size()) + " points";
    return check;
}

bool same_runs(const SweepCell &x, const SweepCell &y) {
    if (x.runs.size() != y.runs.size()) return false;
    for (std::size_t k = 0; k < x.runs.size(); ++k) {
        const auto &a = x.runs[k];
        const auto &b = y.runs[k];
        if (a.seed != b.seed || a.feasible != b.feasible) return false;
        for (const auto &name : metric_names())
            if (name != "runtime_model_s" && metric_value(a, name) != metric_value(b, name)) return false;
        for (std::size_t i = 0; i < a.per_task.size(); ++i)
            if (a.per_task[i].total != b.per_task[i].total) return false;
    }
    return true;
}

/// Every seed of `variant` is bit-identical across series values.
TrendCheck single_curve(const SweepTable &t, std::string name, Variant variant) {
    if (!t.spec.series) return {std::move(name), false, "no series axis"};
    TrendCheck check{std::move(name), true, ""};
    for (const auto &a : t.spec.axis.values) {
        const auto *first = t.find(a, t.spec.series->values.front(), variant);
        if (first == nullptr) return {check.name, false, "missing variant"};
        for (const auto &s : t.spec.series->values) {
            const auto *c = t.find(a, s, variant);
            if (c == nullptr || !same_runs(*first, *c)) {
                check.passed = false;
                check.detail += point_name(t, a, s) + " differs; ";
            }
        }
    }
    if (check.passed) check.detail = "identical per-seed results across " + std::to_string(t.spec.series->values.size()) + " series values";
    return check;
}

/// Axis-averaged mean of `metric` grows strictly from the first to the last
/// series value.
TrendCheck grows_with_series(const SweepTable &t, std::string name, std::string_view metric, Variant variant) {
    if (!t.spec.series) return {std::move(name), false, "no series axis"};
    auto averaged = [&](const json &s) {
        double sum = 0.0;
        for (const auto &a : t.spec.axis.values) {
            const auto *c = t.find(a, s, variant);
            sum += c != nullptr ? mean_of(*c, metric) : std::nan("");
        }
        return sum / static_cast<double>(t.spec.axis.values.size());
    };
    const double lo = averaged(t.spec.series->values.front());
    const double hi = averaged(t.spec.series->values.back());
    return {std::move(name), hi > lo, format_number(lo) + " -> " + format_number(hi)};
}

}  // namespace

std::vector<TrendCheck> check_trends(const SweepTable &table, std::string_view figure) {
    std::vector<TrendCheck> out;
    if (figure == "fig2") {
        out.push_back(dominance(table, "all <= no_leo (total delay)", "total_delay_s", Variant::All, Variant::NoLeo));
        out.push_back(dominance(table, "all <= no_haps (total delay)", "total_delay_s", Variant::All, Variant::NoHaps));
        out.push_back(single_curve(table, "no_leo identical across LEO pools", Variant::NoLeo));
        out.push_back(monotone_along_series(table, "all: total delay nonincreasing in LEO pool", "total_delay_s",
                                            Variant::All, false));
    } else if (figure == "fig3") {
        out.push_back(monotone_along_axis(table, "all: feasible fraction nondecreasing in UAV pool", "feasible_fraction",
                                          Variant::All, true));
        out.push_back(monotone_along_axis(table, "nonadaptive: feasible fraction nondecreasing in UAV pool",
                                          "feasible_fraction", Variant::NonAdaptive, true));
    } else if (figure == "fig4") {
        out.push_back(monotone_along_axis(table, "all: remote fraction nondecreasing in density", "frac_remote",
                                          Variant::All, true));
        out.push_back(monotone_along_series(table, "all: LEO fraction nondecreasing in LEO pool", "frac_leo",
                                            Variant::All, true));
        out.push_back(grows_with_series(table, "all: LEO fraction grows with LEO pool", "frac_leo", Variant::All));
        out.push_back(grows_with_series(table, "all: remote fraction grows with LEO pool", "frac_remote", Variant::All));
    } else {
        throw std::invalid_argument("unknown figure: " + std::string(figure));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Greedy versus exhaustive search

std::vector<OracleComparison> oracle_compare(const OracleCompareSpec &spec) {
    constexpr double kTolerance = 1e-9;
    const OracleLimits limits;
    if (spec.max_tasks * spec.uavs > limits.max_tasks || spec.max_subchannels > limits.max_subchannels ||
        spec.uavs > limits.max_uavs)
        throw InstanceTooLarge("oracle comparison limited to " + std::to_string(limits.max_tasks) + " tasks, " +
                               std::to_string(limits.max_subchannels) + " subchannels and " +
                               std::to_string(limits.max_uavs) + " UAVs");
    std::vector<OracleComparison> rows;
    for (std::size_t k = 0; k < spec.instances; ++k) {
        const std::uint64_t seed = derive_seed(spec.seed, k);
        Rng rng(seed);
        std::uniform_int_distribution<std::size_t> tasks_dist(1, spec.max_tasks);
        std::uniform_int_distribution<std::size_t> sub_dist(1, spec.max_subchannels);
        const std::size_t per_cluster = tasks_dist(rng);
        const std::size_t subchannels = sub_dist(rng);

        json doc = spec.scenario;
        doc["bands"]["subchannels"] = subchannels;
        doc["generator"]["uavs"] = spec.uavs;
        doc["generator"]["devices_per_cluster"] = per_cluster;
        const auto scenario = parse_config(doc).instantiate(seed);
        const auto caps = build_capacity_table(scenario, seed);
        const auto greedy = qtcajosa(scenario, caps);

        OracleComparison row;
        row.seed = seed;
        row.tasks = scenario.num_tasks();
        row.subchannels = subchannels;

        CheckOptions check;
        check.tau_op = greedy.tau_op;
        check.exempt = greedy.flagged;
        row.constraints_ok = check_constraints(greedy.allocation, scenario, caps, check).ok();

        const auto delays = weighted_sum_delay(greedy.allocation, scenario, caps, greedy.tau_op);
        row.greedy_hat_tau = delays.hat_tau;
        row.greedy_unallocated = delays.unallocated;
        row.greedy_on_time = delays.unallocated == 0;
        for (std::size_t i = 0; i < scenario.num_tasks(); ++i)
            if (!(delays.per_task[i].total <= scenario.tasks[i].deadline * (1.0 + kTolerance))) row.greedy_on_time = false;

        const auto oracle = exhaustive_search(scenario, caps, greedy.tau_op);
        row.search_space = oracle.search_space_size;
        auto relative_gap = [](double g, double o) { return o > 0.0 ? (g - o) / o : (g > 0.0 ? kInf : 0.0); };
        if (row.greedy_on_time) {
            row.reference = "optimum";
            row.oracle_hat_tau = oracle.best_objective;
            row.oracle_unallocated = 0;
            row.gap = relative_gap(row.greedy_hat_tau, row.oracle_hat_tau);
            row.dominated = row.greedy_hat_tau >= row.oracle_hat_tau * (1.0 - kTolerance);
        } else {
            row.reference = "relaxed";
            row.oracle_hat_tau = oracle.relaxed_objective;
            row.oracle_unallocated = oracle.relaxed_unallocated;
            if (row.greedy_unallocated > row.oracle_unallocated) {
                row.gap = kInf;
                row.dominated = true;
            } else {
                row.gap = relative_gap(row.greedy_hat_tau, row.oracle_hat_tau);
                row.dominated = row.greedy_unallocated == row.oracle_unallocated &&
                                row.greedy_hat_tau >= row.oracle_hat_tau * (1.0 - kTolerance);
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string oracle_table_csv(const std::vector<OracleComparison> &rows) {
    std::ostringstream out;
    out << "instance,seed,tasks,subchannels,search_space,greedy_hat_tau,greedy_unallocated,greedy_on_time,"
           "oracle_hat_tau,oracle_unallocated,reference,gap,constraints_ok,dominated\n";
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto &r = rows[k];
        out << k << ',' << r.seed << ',' << r.tasks << ',' << r.subchannels << ',' << format_number(r.search_space)
            << ',' << format_number(r.greedy_hat_tau) << ',' << r.greedy_unallocated << ','
            << (r.greedy_on_time ? "true" : "false") << ',' << format_number(r.oracle_hat_tau) << ','
            << r.oracle_unallocated << ',' << r.reference << ',' << format_number(r.gap) << ','
            << (r.constraints_ok ? "true" : "false") << ',' << (r.dominated ? "true" : "false") << '\n';
    }
    return out.str();
}

json oracle_summary(const std::vector<OracleComparison> &rows) {
    std::vector<double> gaps;
    std::size_t ok = 0;
    std::size_t dominated = 0;
    std::size_t optimal = 0;
    for (const auto &r : rows) {
        ok += r.constraints_ok ? 1 : 0;
        dominated += r.dominated ? 1 : 0;
        optimal += r.gap <= 1e-9 ? 1 : 0;
        gaps.push_back(r.gap);
    }
    std::sort(gaps.begin(), gaps.end());
    double median = std::nan("");
    if (!gaps.empty()) {
        const auto n = gaps.size();
        median = n % 2 == 1 ? gaps[n / 2] : 0.5 * (gaps[n / 2 - 1] + gaps[n / 2]);
    }
    double max_finite = 0.0;
    for (auto g : gaps)
        if (std::isfinite(g)) max_finite = std::max(max_finite, g);
    const double n = static_cast<double>(std::max<std::size_t>(rows.size(), 1));
    return {{"instances", rows.size()},
            {"constraints_ok_fraction", static_cast<double>(ok) / n},
            {"dominated_fraction", static_cast<double>(dominated) / n},
            {"optimal_fraction", static_cast<double>(optimal) / n},
            {"median_gap", number_or_null(median)},
            {"max_finite_gap", max_finite}};
}

}  // namespace ntnmec
