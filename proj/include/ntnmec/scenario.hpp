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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "ntnmec/common.hpp"

namespace ntnmec {

struct Position {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const Position &, const Position &) = default;
};

double distance(const Position &a, const Position &b);
double horizontal_distance(const Position &a, const Position &b);

enum class Role { IoMT, UAV, HAPS, LEO };

std::string_view to_string(Role role);

struct NodeConfig {
    Role role = Role::IoMT;
    Position position;
    int n_antennas_ula = 1;  // UAV access array
    int n_antennas_upa = 1;  // UAV feeder array, HAPS and LEO arrays
    double f_max = 0.0;      // cycles per second
    double tx_power = 0.0;   // W

    friend bool operator==(const NodeConfig &, const NodeConfig &) = default;
};

/// One job generated by an IoMT device.
struct Task {
    std::size_t device = 0;
    double bits = 0.0;      // d_i
    double density = 0.0;   // c_i, cycles per bit
    double deadline = 0.0;  // tau_i^max, seconds

    double cycles() const { return bits * density; }

    friend bool operator==(const Task &, const Task &) = default;
};

struct Cluster {
    std::size_t uav = 0;
    std::vector<std::size_t> devices;  // I_u, global device indices

    friend bool operator==(const Cluster &, const Cluster &) = default;
};

struct Bands {
    double access_bandwidth = 1.4e6;  // B_u per subchannel
    int subchannels = 14;             // B
    double haps_bandwidth = 100e6;    // B_h
    double leo_bandwidth = 200e6;     // B_s
    double access_carrier = 2.1e9;
    double feeder_carrier = 28e9;

    friend bool operator==(const Bands &, const Bands &) = default;
};

/// Air-to-ground environment presets of the elevation-sigmoid LoS model.
enum class Environment { Suburban, Urban, DenseUrban, HighriseUrban };

struct EnvironmentParams {
    double a;
    double b;
    double eta_los_db;
    double eta_nlos_db;
};

EnvironmentParams environment_params(Environment env);
std::string_view to_string(Environment env);
std::optional<Environment> parse_environment(std::string_view name);

struct ChannelModel {
    Environment environment = Environment::Suburban;
    double k_min = 1.0;                    // Rician K at 0 deg elevation (linear)
    double k_max = 31.622776601683793;     // Rician K at 90 deg (15 dB)
    double leo_half_beamwidth_deg = 2.0;   // -3 dB half-beamwidth of the LEO element
    double haps_cos_exponent = 2.0;        // q in cos^q

    friend bool operator==(const ChannelModel &, const ChannelModel &) = default;
};

/// Node that executes the centralized decision algorithm.
struct NodeRef {
    Role role = Role::HAPS;
    std::size_t index = 0;  // only meaningful for Role::UAV

    friend bool operator==(const NodeRef &, const NodeRef &) = default;
};

/// Physical parameters shared by every realization of a configuration.
struct ModelParams {
    Bands bands;
    double noise_psd = 0.0;  // N_0, W/Hz; filled by default_model()
    double atm_loss = 1.0;   // G_{u,h} = G_{u,s}
    ChannelModel channel;
    double c_op = 1.0;       // cycles per elementary operation
    NodeRef executor;

    // Templates for per-role node parameters; positions are set per realization.
    NodeConfig device;
    NodeConfig uav;
    NodeConfig haps;
    NodeConfig leo;
    double uav_altitude = 120.0;

    friend bool operator==(const ModelParams &, const ModelParams &) = default;
};

/// Defaults used when a configuration leaves a field unspecified.
ModelParams default_model();

/// Thermal noise density for a receiver noise figure, W/Hz.
double thermal_noise_psd(double noise_figure_db);
double dbm_to_watt(double dbm);

/// Immutable world state consumed by every other module.
struct Scenario {
    ModelParams model;
    std::vector<NodeConfig> devices;  // IoMT, index == task index
    std::vector<NodeConfig> uavs;
    NodeConfig haps;
    NodeConfig leo;
    std::vector<Cluster> clusters;  // clusters[u].uav == u
    std::vector<Task> tasks;        // tasks[i].device == i
    std::uint64_t seed = 0;

    const Bands &bands() const { return model.bands; }
    std::size_t num_tasks() const { return tasks.size(); }
    std::size_t num_uavs() const { return uavs.size(); }
    std::size_t max_cluster_size() const;
    const NodeConfig &executor() const;

    /// Throws ConfigError naming the first violated invariant.
    void validate() const;

    friend bool operator==(const Scenario &, const Scenario &) = default;
};

struct TaskDistribution {
    double bits_min = 1e5;
    double bits_max = 1e7;
    double density = 100.0;
    double deadline = 30.0;

    friend bool operator==(const TaskDistribution &, const TaskDistribution &) = default;
};

struct GeneratorParams {
    std::size_t uavs = 4;
    std::size_t devices_per_cluster = 10;
    double d_max = 1000.0;
    // Explicit (x, y) centers; empty means U points evenly spaced on a circle
    // of radius d_max / 2.
    std::vector<std::array<double, 2>> cluster_centers;
    TaskDistribution tasks;
    std::uint64_t seed = 1;
};

/// Places devices uniformly in the disk of radius d_max around the origin,
/// each joining the nearest cluster center (rejection keeps every cluster at
/// exactly devices_per_cluster members). UAVs hover at the model altitude over
/// their cluster centroid.
Scenario generate_scenario(const GeneratorParams &params, const ModelParams &model = default_model());

std::vector<Task> sample_tasks(std::size_t count, const TaskDistribution &dist, Rng &rng);

/// Parsed configuration document. Either the geometry is explicit or it is
/// generated; tasks are either listed or drawn from a distribution.
struct ScenarioConfig {
    struct ExplicitGeometry {
        std::vector<Position> devices;
        std::vector<Position> uavs;
        std::vector<Cluster> clusters;
    };

    ModelParams model;
    std::variant<ExplicitGeometry, GeneratorParams> geometry;
    std::variant<std::vector<Task>, TaskDistribution> tasks;
    std::uint64_t seed = 1;

    /// Realize the scenario for `seed`. Explicit geometry and tasks ignore it.
    Scenario instantiate(std::uint64_t seed) const;
    Scenario instantiate() const { return instantiate(seed); }
};

ScenarioConfig parse_config(const nlohmann::json &doc);
ScenarioConfig parse_config_text(std::string_view text);

/// Parse and realize a configuration document with its own seed.
Scenario load_scenario(std::string_view config_text);

/// Set `dotted.path=value` inside a configuration document. The value is
/// parsed as JSON when possible and kept as a string otherwise. Intermediate
/// objects are created on demand; array indices are accepted as numeric
/// segments.
void apply_override(nlohmann::json &doc, std::string_view path, std::string_view value);
void apply_override(nlohmann::json &doc, std::string_view path, const nlohmann::json &value);
inline void apply_override(nlohmann::json &doc, std::string_view path, const char *value) {
    apply_override(doc, path, std::string_view(value));
}

}  // namespace ntnmec
