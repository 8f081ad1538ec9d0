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

#include "ntnmec/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace ntnmec {

using nlohmann::json;

double distance(const Position &a, const Position &b) {
    return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

double horizontal_distance(const Position &a, const Position &b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

std::string_view to_string(Role role) {
    switch (role) {
    case Role::IoMT: return "IoMT";
    case Role::UAV: return "UAV";
    case Role::HAPS: return "HAPS";
    case Role::LEO: return "LEO";
    }
    return "?";
}

EnvironmentParams environment_params(Environment env) {
    switch (env) {
    case Environment::Suburban: return {4.88, 0.43, 0.1, 21.0};
    case Environment::Urban: return {9.61, 0.16, 1.0, 20.0};
    case Environment::DenseUrban: return {12.08, 0.11, 1.6, 23.0};
    case Environment::HighriseUrban: return {27.23, 0.08, 2.3, 34.0};
    }
    return {4.88, 0.43, 0.1, 21.0};
}

std::string_view to_string(Environment env) {
    switch (env) {
    case Environment::Suburban: return "suburban";
    case Environment::Urban: return "urban";
    case Environment::DenseUrban: return "dense_urban";
    case Environment::HighriseUrban: return "highrise_urban";
    }
    return "?";
}

std::optional<Environment> parse_environment(std::string_view name) {
    for (auto env : {Environment::Suburban, Environment::Urban, Environment::DenseUrban,
                     Environment::HighriseUrban}) {
        if (name == to_string(env)) return env;
    }
    return std::nullopt;
}

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double thermal_noise_psd(double noise_figure_db) { return dbm_to_watt(-174.0 + noise_figure_db); }

ModelParams default_model() {
    ModelParams m;
    m.noise_psd = thermal_noise_psd(7.0);

    m.device.role = Role::IoMT;
    m.device.tx_power = dbm_to_watt(23.0);

    m.uav.role = Role::UAV;
    m.uav.n_antennas_ula = 8;
    m.uav.n_antennas_upa = 16;
    m.uav.f_max = 1e9;
    m.uav.tx_power = dbm_to_watt(33.0);

    m.haps.role = Role::HAPS;
    m.haps.position = {0.0, 0.0, 20e3};
    m.haps.n_antennas_upa = 64;
    m.haps.f_max = 10e9;

    m.leo.role = Role::LEO;
    m.leo.position = {0.0, 0.0, 500e3};
    m.leo.n_antennas_upa = 64;
    m.leo.f_max = 10e9;
    return m;
}

std::size_t Scenario::max_cluster_size() const {
    std::size_t best = 0;
    for (const auto &c : clusters) best = std::max(best, c.devices.size());
    return best;
}

const NodeConfig &Scenario::executor() const {
    switch (model.executor.role) {
    case Role::HAPS: return haps;
    case Role::LEO: return leo;
    case Role::UAV: return uavs.at(model.executor.index);
    case Role::IoMT: break;
    }
    throw ConfigError("defaults.executor: IoMT devices cannot run the algorithm");
}

namespace {

[[noreturn]] void fail(const std::string &path, const std::string &what) {
    throw ConfigError(path + ": " + what);
}

void require_positive(double v, const std::string &path) {
    if (!(v > 0.0) || !std::isfinite(v)) fail(path, "must be a positive finite number");
}

void require_nonnegative(double v, const std::string &path) {
    if (!(v >= 0.0) || !std::isfinite(v)) fail(path, "must be a non-negative finite number");
}

void validate_position(const Position &p, const std::string &path) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) fail(path, "coordinates must be finite");
    if (p.z < 0.0) fail(path, "z must be >= 0");
}

void validate_model(const ModelParams &m) {
    require_positive(m.bands.access_bandwidth, "bands.access_bandwidth");
    if (m.bands.subchannels < 1) fail("bands.subchannels", "must be >= 1");
    require_positive(m.bands.haps_bandwidth, "bands.haps_bandwidth");
    require_positive(m.bands.leo_bandwidth, "bands.leo_bandwidth");
    require_positive(m.bands.access_carrier, "bands.access_carrier");
    require_positive(m.bands.feeder_carrier, "bands.feeder_carrier");
    require_positive(m.noise_psd, "defaults.noise_psd");
    require_positive(m.atm_loss, "defaults.atm_loss");
    require_positive(m.channel.k_min, "defaults.k_min");
    if (!(m.channel.k_max >= m.channel.k_min) || !std::isfinite(m.channel.k_max))
        fail("defaults.k_max", "must be finite and >= k_min");
    if (!(m.channel.leo_half_beamwidth_deg > 0.0 && m.channel.leo_half_beamwidth_deg < 90.0))
        fail("nodes.LEO.half_beamwidth_deg", "must lie in (0, 90)");
    require_positive(m.channel.haps_cos_exponent, "nodes.HAPS.cos_exponent");
    if (!(m.c_op >= 1.0) || !std::isfinite(m.c_op)) fail("defaults.c_op", "must be >= 1");
    require_nonnegative(m.device.tx_power, "nodes.IoMT.tx_power");
    require_nonnegative(m.uav.tx_power, "nodes.UAV.tx_power");
    require_nonnegative(m.uav.f_max, "nodes.UAV.f_max");
    require_nonnegative(m.haps.f_max, "nodes.HAPS.f_max");
    require_nonnegative(m.leo.f_max, "nodes.LEO.f_max");
    if (m.uav.n_antennas_ula < 1) fail("nodes.UAV.n_ula", "must be >= 1");
    if (m.uav.n_antennas_upa < 1) fail("nodes.UAV.n_upa", "must be >= 1");
    if (m.haps.n_antennas_upa < 1) fail("nodes.HAPS.n_antennas", "must be >= 1");
    if (m.leo.n_antennas_upa < 1) fail("nodes.LEO.n_antennas", "must be >= 1");
    require_nonnegative(m.uav_altitude, "nodes.UAV.altitude");
    validate_position(m.haps.position, "nodes.HAPS.position");
    validate_position(m.leo.position, "nodes.LEO.position");
}

void validate_task(const Task &t, const std::string &path) {
    require_positive(t.bits, path + ".bits");
    require_positive(t.density, path + ".density");
    require_positive(t.deadline, path + ".deadline");
}

}  // namespace

void Scenario::validate() const {
    validate_model(model);
    if (uavs.empty()) fail("nodes.UAV", "at least one UAV is required");
    if (clusters.size() != uavs.size()) fail("clusters", "exactly one cluster per UAV is required");
    if (tasks.size() != devices.size()) fail("tasks", "exactly one task per IoMT device is required");
    for (std::size_t i = 0; i < devices.size(); ++i) {
        const auto path = "nodes.IoMT.positions[" + std::to_string(i) + "]";
        validate_position(devices[i].position, path);
        if (devices[i].position.z != 0.0) fail(path, "IoMT devices must be on the ground (z = 0)");
    }
    for (std::size_t u = 0; u < uavs.size(); ++u)
        validate_position(uavs[u].position, "nodes.UAV.positions[" + std::to_string(u) + "]");
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const auto path = "tasks[" + std::to_string(i) + "]";
        if (tasks[i].device != i) fail(path + ".device", "task i must belong to device i");
        validate_task(tasks[i], path);
    }
    std::vector<int> owner(devices.size(), -1);
    for (std::size_t u = 0; u < clusters.size(); ++u) {
        const auto path = "clusters[" + std::to_string(u) + "]";
        if (clusters[u].uav != u) fail(path + ".uav", "cluster u must be served by UAV u");
        for (auto d : clusters[u].devices) {
            if (d >= devices.size()) fail(path + ".devices", "device index " + std::to_string(d) + " out of range");
            if (owner[d] >= 0)
                fail(path + ".devices", "device " + std::to_string(d) + " already belongs to cluster " +
                                            std::to_string(owner[d]));
            owner[d] = static_cast<int>(u);
        }
    }
    for (std::size_t d = 0; d < owner.size(); ++d)
        if (owner[d] < 0) fail("clusters", "device " + std::to_string(d) + " belongs to no cluster");
    if (model.executor.role == Role::UAV && model.executor.index >= uavs.size())
        fail("defaults.executor", "UAV index out of range");
    if (model.executor.role == Role::IoMT) fail("defaults.executor", "must be HAPS, LEO or UAV:<index>");
}

std::vector<Task> sample_tasks(std::size_t count, const TaskDistribution &dist, Rng &rng) {
    std::uniform_real_distribution<double> bits(dist.bits_min, dist.bits_max);
    std::vector<Task> tasks(count);
    for (std::size_t i = 0; i < count; ++i) tasks[i] = Task{i, bits(rng), dist.density, dist.deadline};
    return tasks;
}

namespace {

void validate_generator(const GeneratorParams &p) {
    if (p.uavs < 1) fail("generator.uavs", "must be >= 1");
    require_positive(p.d_max, "generator.d_max");
    if (!p.cluster_centers.empty() && p.cluster_centers.size() != p.uavs)
        fail("generator.cluster_centers", "must list exactly one center per UAV");
    const auto &t = p.tasks;
    require_positive(t.bits_min, "task_generator.bits_min");
    if (!(t.bits_max >= t.bits_min) || !std::isfinite(t.bits_max))
        fail("task_generator.bits_max", "must be finite and >= bits_min");
    require_positive(t.density, "task_generator.density");
    require_positive(t.deadline, "task_generator.deadline");
}

Scenario assemble(const ModelParams &model, std::vector<Position> device_pos, std::vector<Position> uav_pos,
                  std::vector<Cluster> clusters, std::vector<Task> tasks, std::uint64_t seed) {
    Scenario s;
    s.model = model;
    s.devices.reserve(device_pos.size());
    for (const auto &p : device_pos) {
        NodeConfig n = model.device;
        n.position = p;
        s.devices.push_back(n);
    }
    for (const auto &p : uav_pos) {
        NodeConfig n = model.uav;
        n.position = p;
        s.uavs.push_back(n);
    }
    s.haps = model.haps;
    s.leo = model.leo;
    s.clusters = std::move(clusters);
    s.tasks = std::move(tasks);
    s.seed = seed;
    return s;
}

struct Layout {
    std::vector<Position> devices;
    std::vector<Position> uavs;
    std::vector<Cluster> clusters;
};

Layout place_devices(const GeneratorParams &p, double altitude, Rng &rng) {
    std::vector<std::array<double, 2>> centers = p.cluster_centers;
    if (centers.empty()) {
        for (std::size_t u = 0; u < p.uavs; ++u) {
            const double phi = 2.0 * kPi * (static_cast<double>(u) + 0.5) / static_cast<double>(p.uavs);
            centers.push_back({0.5 * p.d_max * std::cos(phi), 0.5 * p.d_max * std::sin(phi)});
        }
    }
    const std::size_t total = p.uavs * p.devices_per_cluster;
    Layout out;
    out.clusters.resize(p.uavs);
    for (std::size_t u = 0; u < p.uavs; ++u) out.clusters[u].uav = u;

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t max_attempts = 1000 * std::max<std::size_t>(total, 1);
    std::size_t attempts = 0;
    while (out.devices.size() < total) {
        if (++attempts > max_attempts)
            fail("generator.cluster_centers", "cannot fill every cluster inside the d_max disk; move centers inward");
        const double r = p.d_max * std::sqrt(unit(rng));
        const double phi = 2.0 * kPi * unit(rng);
        const Position pos{r * std::cos(phi), r * std::sin(phi), 0.0};
        std::size_t nearest = 0;
        double best = kInf;
        for (std::size_t u = 0; u < centers.size(); ++u) {
            const double d = std::hypot(pos.x - centers[u][0], pos.y - centers[u][1]);
            if (d < best) {
                best = d;
                nearest = u;
            }
        }
        if (out.clusters[nearest].devices.size() >= p.devices_per_cluster) continue;
        out.clusters[nearest].devices.push_back(out.devices.size());
        out.devices.push_back(pos);
    }
    for (const auto &c : out.clusters) {
        Position centroid{0.0, 0.0, altitude};
        if (c.devices.empty()) {
            centroid.x = centers[c.uav][0];
            centroid.y = centers[c.uav][1];
        } else {
            for (auto d : c.devices) {
                centroid.x += out.devices[d].x;
                centroid.y += out.devices[d].y;
            }
            centroid.x /= static_cast<double>(c.devices.size());
            centroid.y /= static_cast<double>(c.devices.size());
        }
        out.uavs.push_back(centroid);
    }
    return out;
}

}  // namespace

Scenario generate_scenario(const GeneratorParams &params, const ModelParams &model) {
    validate_generator(params);
    validate_model(model);
    Rng geometry_rng(derive_seed(params.seed, streams::kGeometry));
    auto layout = place_devices(params, model.uav_altitude, geometry_rng);
    Rng task_rng(derive_seed(params.seed, streams::kTasks));
    auto tasks = sample_tasks(layout.devices.size(), params.tasks, task_rng);
    Scenario s = assemble(model, std::move(layout.devices), std::move(layout.uavs), std::move(layout.clusters),
                          std::move(tasks), params.seed);
    s.validate();
    return s;
}

Scenario ScenarioConfig::instantiate(std::uint64_t run_seed) const {
    Scenario s;
    if (const auto *gen = std::get_if<GeneratorParams>(&geometry)) {
        GeneratorParams p = *gen;
        p.seed = run_seed;
        if (const auto *dist = std::get_if<TaskDistribution>(&tasks)) {
            p.tasks = *dist;
            return generate_scenario(p, model);
        }
        s = generate_scenario(p, model);
        s.tasks = std::get<std::vector<Task>>(tasks);
    } else {
        const auto &g = std::get<ExplicitGeometry>(geometry);
        std::vector<Task> task_list;
        if (const auto *dist = std::get_if<TaskDistribution>(&tasks)) {
            Rng task_rng(derive_seed(run_seed, streams::kTasks));
            task_list = sample_tasks(g.devices.size(), *dist, task_rng);
        } else {
            task_list = std::get<std::vector<Task>>(tasks);
        }
        s = assemble(model, g.devices, g.uavs, g.clusters, std::move(task_list), run_seed);
    }
    s.seed = run_seed;
    s.validate();
    return s;
}

namespace {

/// Reads one JSON object, remembering which keys were consumed so unknown
/// keys can be reported with their full path.
class ObjectReader {
  public:
    ObjectReader(const json &obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) fail(path_.empty() ? "<root>" : path_, "expected an object");
    }

    std::string path(std::string_view key) const {
        return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
    }

    const json *find(std::string_view key) {
        auto it = obj_.find(key);
        if (it == obj_.end()) return nullptr;
        seen_.insert(std::string(key));
        return &*it;
    }

    double number(std::string_view key, double fallback) {
        const json *v = find(key);
        if (v == nullptr) return fallback;
        if (!v->is_number()) fail(path(key), "expected a number");
        return v->get<double>();
    }

    long long integer(std::string_view key, long long fallback) {
        const json *v = find(key);
        if (v == nullptr) return fallback;
        if (v->is_number_integer()) return v->get<long long>();
        if (v->is_number_float()) {
            const double d = v->get<double>();
            if (std::floor(d) == d && std::abs(d) < 9e15) return static_cast<long long>(d);
        }
        fail(path(key), "expected an integer");
    }

    std::string string(std::string_view key, std::string fallback) {
        const json *v = find(key);
        if (v == nullptr) return fallback;
        if (!v->is_string()) fail(path(key), "expected a string");
        return v->get<std::string>();
    }

    void finish() const {
        for (const auto &[key, value] : obj_.items()) {
            (void)value;
            if (!seen_.contains(key)) fail(path(key), "unknown field");
        }
    }

  private:
    const json &obj_;
    std::string path_;
    std::set<std::string> seen_;
};

Position parse_position(const json &v, const std::string &path) {
    if (!v.is_array() || (v.size() != 2 && v.size() != 3)) fail(path, "expected [x, y] or [x, y, z]");
    for (const auto &c : v)
        if (!c.is_number()) fail(path, "coordinates must be numbers");
    Position p{v[0].get<double>(), v[1].get<double>(), v.size() == 3 ? v[2].get<double>() : 0.0};
    validate_position(p, path);
    return p;
}

std::vector<Position> parse_positions(const json &v, const std::string &path) {
    if (!v.is_array()) fail(path, "expected an array of positions");
    std::vector<Position> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(parse_position(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

std::size_t as_count(long long v, const std::string &path, long long minimum) {
    if (v < minimum) fail(path, "must be >= " + std::to_string(minimum));
    return static_cast<std::size_t>(v);
}

NodeRef parse_executor(const std::string &text) {
    if (text == "HAPS") return {Role::HAPS, 0};
    if (text == "LEO") return {Role::LEO, 0};
    if (text.rfind("UAV:", 0) == 0) {
        std::size_t index = 0;
        const char *first = text.data() + 4;
        const char *last = text.data() + text.size();
        auto [ptr, ec] = std::from_chars(first, last, index);
        if (ec == std::errc() && ptr == last && first != last) return {Role::UAV, index};
    }
    fail("defaults.executor", "expected \"HAPS\", \"LEO\" or \"UAV:<index>\", got \"" + text + "\"");
}

}  // namespace

ScenarioConfig parse_config(const json &doc) {
    ScenarioConfig cfg;
    ModelParams &m = cfg.model;
    m = default_model();

    ObjectReader root(doc, "");
    cfg.seed = static_cast<std::uint64_t>(as_count(root.integer("seed", 1), "seed", 0));

    if (const json *bands = root.find("bands")) {
        ObjectReader r(*bands, "bands");
        m.bands.access_bandwidth = r.number("access_bandwidth", m.bands.access_bandwidth);
        m.bands.subchannels = static_cast<int>(as_count(r.integer("subchannels", m.bands.subchannels), "bands.subchannels", 1));
        m.bands.haps_bandwidth = r.number("haps_bandwidth", m.bands.haps_bandwidth);
        m.bands.leo_bandwidth = r.number("leo_bandwidth", m.bands.leo_bandwidth);
        m.bands.access_carrier = r.number("access_carrier", m.bands.access_carrier);
        m.bands.feeder_carrier = r.number("feeder_carrier", m.bands.feeder_carrier);
        r.finish();
    }

    if (const json *defaults = root.find("defaults")) {
        ObjectReader r(*defaults, "defaults");
        const double nf = r.number("noise_figure_db", 7.0);
        m.noise_psd = r.number("noise_psd", thermal_noise_psd(nf));
        m.atm_loss = r.number("atm_loss", m.atm_loss);
        const auto env = r.string("environment", std::string(to_string(m.channel.environment)));
        if (auto parsed = parse_environment(env)) {
            m.channel.environment = *parsed;
        } else {
            fail("defaults.environment", "unknown preset \"" + env + "\"");
        }
        m.channel.k_min = r.number("k_min", m.channel.k_min);
        m.channel.k_max = r.number("k_max", m.channel.k_max);
        m.c_op = r.number("c_op", m.c_op);
        m.executor = parse_executor(r.string("executor", "HAPS"));
        r.finish();
    }

    std::optional<std::vector<Position>> device_positions;
    std::optional<std::vector<Position>> uav_positions;
    if (const json *nodes = root.find("nodes")) {
        ObjectReader r(*nodes, "nodes");
        if (const json *iomt = r.find("IoMT")) {
            ObjectReader n(*iomt, "nodes.IoMT");
            m.device.tx_power = n.number("tx_power", m.device.tx_power);
            if (const json *pos = n.find("positions")) device_positions = parse_positions(*pos, "nodes.IoMT.positions");
            n.finish();
        }
        if (const json *uav = r.find("UAV")) {
            ObjectReader n(*uav, "nodes.UAV");
            m.uav.f_max = n.number("f_max", m.uav.f_max);
            m.uav.tx_power = n.number("tx_power", m.uav.tx_power);
            m.uav.n_antennas_ula = static_cast<int>(as_count(n.integer("n_ula", m.uav.n_antennas_ula), "nodes.UAV.n_ula", 1));
            m.uav.n_antennas_upa = static_cast<int>(as_count(n.integer("n_upa", m.uav.n_antennas_upa), "nodes.UAV.n_upa", 1));
            m.uav_altitude = n.number("altitude", m.uav_altitude);
            if (const json *pos = n.find("positions")) uav_positions = parse_positions(*pos, "nodes.UAV.positions");
            n.finish();
        }
        if (const json *haps = r.find("HAPS")) {
            ObjectReader n(*haps, "nodes.HAPS");
            m.haps.f_max = n.number("f_max", m.haps.f_max);
            m.haps.n_antennas_upa = static_cast<int>(as_count(n.integer("n_antennas", m.haps.n_antennas_upa), "nodes.HAPS.n_antennas", 1));
            if (const json *pos = n.find("position")) m.haps.position = parse_position(*pos, "nodes.HAPS.position");
            m.channel.haps_cos_exponent = n.number("cos_exponent", m.channel.haps_cos_exponent);
            n.finish();
        }
        if (const json *leo = r.find("LEO")) {
            ObjectReader n(*leo, "nodes.LEO");
            m.leo.f_max = n.number("f_max", m.leo.f_max);
            m.leo.n_antennas_upa = static_cast<int>(as_count(n.integer("n_antennas", m.leo.n_antennas_upa), "nodes.LEO.n_antennas", 1));
            if (const json *pos = n.find("position")) m.leo.position = parse_position(*pos, "nodes.LEO.position");
            m.channel.leo_half_beamwidth_deg = n.number("half_beamwidth_deg", m.channel.leo_half_beamwidth_deg);
            n.finish();
        }
        r.finish();
    }
    validate_model(m);

    const json *clusters = root.find("clusters");
    const json *generator = root.find("generator");
    if (generator != nullptr) {
        if (clusters != nullptr) fail("clusters", "not allowed together with generator");
        if (device_positions) fail("nodes.IoMT.positions", "not allowed together with generator");
        if (uav_positions) fail("nodes.UAV.positions", "not allowed together with generator");
        ObjectReader r(*generator, "generator");
        GeneratorParams g;
        g.uavs = as_count(r.integer("uavs", static_cast<long long>(g.uavs)), "generator.uavs", 1);
        g.devices_per_cluster = as_count(r.integer("devices_per_cluster", static_cast<long long>(g.devices_per_cluster)),
                                         "generator.devices_per_cluster", 0);
        g.d_max = r.number("d_max", g.d_max);
        require_positive(g.d_max, "generator.d_max");
        if (const json *centers = r.find("cluster_centers")) {
            for (const auto &p : parse_positions(*centers, "generator.cluster_centers")) g.cluster_centers.push_back({p.x, p.y});
            if (g.cluster_centers.size() != g.uavs) fail("generator.cluster_centers", "must list exactly one center per UAV");
        }
        r.finish();
        cfg.geometry = g;
    } else {
        if (clusters == nullptr) fail("clusters", "required unless generator is given");
        if (!device_positions) fail("nodes.IoMT.positions", "required unless generator is given");
        if (!uav_positions) fail("nodes.UAV.positions", "required unless generator is given");
        ScenarioConfig::ExplicitGeometry g;
        g.devices = std::move(*device_positions);
        g.uavs = std::move(*uav_positions);
        if (!clusters->is_array()) fail("clusters", "expected an array");
        for (std::size_t u = 0; u < clusters->size(); ++u) {
            const auto path = "clusters[" + std::to_string(u) + "]";
            ObjectReader r((*clusters)[u], path);
            Cluster c;
            c.uav = as_count(r.integer("uav", static_cast<long long>(u)), path + ".uav", 0);
            const json *devs = r.find("devices");
            if (devs == nullptr || !devs->is_array()) fail(path + ".devices", "expected an array of device indices");
            for (const auto &d : *devs) {
                if (!d.is_number_integer() || d.get<long long>() < 0) fail(path + ".devices", "expected non-negative integers");
                c.devices.push_back(d.get<std::size_t>());
            }
            r.finish();
            g.clusters.push_back(std::move(c));
        }
        cfg.geometry = std::move(g);
    }

    const json *tasks = root.find("tasks");
    const json *task_gen = root.find("task_generator");
    if (tasks != nullptr && task_gen != nullptr) fail("tasks", "not allowed together with task_generator");
    if (tasks != nullptr) {
        if (!tasks->is_array()) fail("tasks", "expected an array");
        std::vector<Task> list;
        for (std::size_t i = 0; i < tasks->size(); ++i) {
            const auto path = "tasks[" + std::to_string(i) + "]";
            ObjectReader r((*tasks)[i], path);
            Task t;
            t.device = as_count(r.integer("device", static_cast<long long>(i)), path + ".device", 0);
            t.bits = r.number("bits", 0.0);
            t.density = r.number("density", 0.0);
            t.deadline = r.number("deadline", 0.0);
            r.finish();
            validate_task(t, path);
            list.push_back(t);
        }
        cfg.tasks = std::move(list);
    } else {
        TaskDistribution dist;
        if (task_gen != nullptr) {
            ObjectReader r(*task_gen, "task_generator");
            dist.bits_min = r.number("bits_min", dist.bits_min);
            dist.bits_max = r.number("bits_max", dist.bits_max);
            dist.density = r.number("density", dist.density);
            dist.deadline = r.number("deadline", dist.deadline);
            r.finish();
        }
        if (auto *g = std::get_if<GeneratorParams>(&cfg.geometry)) g->tasks = dist;
        cfg.tasks = dist;
    }
    if (auto *g = std::get_if<GeneratorParams>(&cfg.geometry)) {
        g->seed = cfg.seed;
        validate_generator(*g);
    }
    root.finish();

    // Surface structural errors (cluster overlap, task/device mismatch) at load time.
    (void)cfg.instantiate(cfg.seed);
    return cfg;
}

ScenarioConfig parse_config_text(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ConfigError(std::string("<document>: ") + e.what());
    }
    return parse_config(doc);
}

Scenario load_scenario(std::string_view config_text) { return parse_config_text(config_text).instantiate(); }

namespace {

std::vector<std::string> split_path(std::string_view path) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        parts.emplace_back(path.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start));
        if (dot == std::string_view::npos) break;
        start = dot + 1;
    }
    for (const auto &p : parts)
        if (p.empty()) throw ConfigError(std::string(path) + ": empty path segment");
    return parts;
}

}  // namespace

void apply_override(json &doc, std::string_view path, const json &value) {
    const auto parts = split_path(path);
    json *node = &doc;
    for (std::size_t k = 0; k < parts.size(); ++k) {
        const auto &key = parts[k];
        const bool last = k + 1 == parts.size();
        if (node->is_array()) {
            std::size_t index = 0;
            auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), index);
            if (ec != std::errc() || ptr != key.data() + key.size() || index >= node->size())
                throw ConfigError(std::string(path) + ": bad array index \"" + key + "\"");
            node = &(*node)[index];
        } else {
            if (node->is_null()) *node = json::object();
            if (!node->is_object()) throw ConfigError(std::string(path) + ": \"" + key + "\" is not inside an object");
            node = &(*node)[key];
        }
        if (last) *node = value;
    }
}

void apply_override(json &doc, std::string_view path, std::string_view value) {
    json parsed;
    try {
        parsed = json::parse(value);
    } catch (const json::parse_error &) {
        parsed = std::string(value);
    }
    apply_override(doc, path, parsed);
}

}  // namespace ntnmec
