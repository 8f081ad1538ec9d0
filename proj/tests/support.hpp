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

// Small fixtures shared by the unit tests.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "ntnmec/channel.hpp"
#include "ntnmec/scenario.hpp"

namespace ntnmec::testing {

/// One UAV hovering at (0, 0, 120) over the given ground devices.
inline Scenario single_uav(const std::vector<Position> &devices, std::vector<Task> tasks, int subchannels) {
    Scenario s;
    s.model = default_model();
    s.model.bands.subchannels = subchannels;
    s.haps = s.model.haps;
    s.leo = s.model.leo;
    NodeConfig uav = s.model.uav;
    uav.position = {0.0, 0.0, 120.0};
    s.uavs = {uav};
    Cluster cluster;
    for (std::size_t i = 0; i < devices.size(); ++i) {
        NodeConfig d = s.model.device;
        d.position = devices[i];
        s.devices.push_back(d);
        tasks[i].device = i;
        cluster.devices.push_back(i);
    }
    s.clusters = {cluster};
    s.tasks = std::move(tasks);
    s.validate();
    return s;
}

/// Every access entry equal to `access`; one feeder rate per remote node.
inline CapacityTable uniform_capacities(const Scenario &s, double access, double haps, double leo) {
    CapacityTable t;
    for (std::size_t u = 0; u < s.num_uavs(); ++u) {
        CapacityTable::Access a;
        a.rows = s.clusters[u].devices.size();
        a.cols = static_cast<std::size_t>(s.bands().subchannels);
        a.rate.assign(a.rows * a.cols, access);
        t.access.push_back(std::move(a));
        t.feeder_haps.push_back(haps);
        t.feeder_leo.push_back(leo);
    }
    return t;
}

/// Generated scenario with default physics and the given shape.
inline Scenario generated(std::uint64_t seed, std::size_t uavs, std::size_t per_cluster, int subchannels,
                          double d_max = 1000.0) {
    GeneratorParams g;
    g.uavs = uavs;
    g.devices_per_cluster = per_cluster;
    g.d_max = d_max;
    g.seed = seed;
    ModelParams m = default_model();
    m.bands.subchannels = subchannels;
    return generate_scenario(g, m);
}

inline double relative_error(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

}  // namespace ntnmec::testing
