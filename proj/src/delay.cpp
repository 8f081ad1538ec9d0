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

#include "ntnmec/delay.hpp"

#include <algorithm>
#include <cmath>

namespace ntnmec {

double access_delay(double bits, std::span<const std::uint8_t> rho_row, std::span<const double> rates) {
    for (std::size_t b = 0; b < rho_row.size(); ++b) {
        if (rho_row[b] == 0) continue;
        return rates[b] > 0.0 ? bits / rates[b] : kInf;
    }
    return kInf;
}

double feeder_delay(double load_bits, double rate, double distance, bool include_rtt) {
    double transmit = 0.0;
    if (load_bits > 0.0) transmit = rate > 0.0 ? load_bits / rate : kInf;
    return transmit + (include_rtt ? 2.0 * distance / kSpeedOfLight : 0.0);
}

double compute_delay(double bits, double density, double share) {
    if (!(share > 0.0)) return kInf;
    return bits * density / share;
}

std::uint64_t op_count_qtcajosa(std::uint64_t tasks, std::uint64_t subchannels) {
    const std::uint64_t i = tasks;
    const std::uint64_t b = subchannels;
    return i * (6 * i * i + 6 * i * b + 100 * i + 3 * b + 100);
}

std::uint64_t op_count_resource_alloc(std::uint64_t uavs, std::uint64_t cluster_size) {
    const std::uint64_t n = cluster_size;
    return (uavs + 2) * (2 * n * n + 24 * n + 15);
}

double runtime_delay(double operations, const RuntimeParams &params, double executor_f_max) {
    return operations * params.c_op / executor_f_max + params.rtt_max;
}

double max_round_trip(const Position &executor, std::span<const NodeConfig> devices) {
    double farthest = 0.0;
    for (const auto &d : devices) farthest = std::max(farthest, distance(d.position, executor));
    return 2.0 * farthest / kSpeedOfLight;
}

double algorithm_runtime(const Scenario &scenario) {
    const auto ops = op_count_qtcajosa(scenario.num_tasks(), static_cast<std::uint64_t>(scenario.bands().subchannels)) +
                     op_count_resource_alloc(scenario.num_uavs(), scenario.max_cluster_size());
    const auto &exec = scenario.executor();
    const RuntimeParams params{scenario.model.c_op, max_round_trip(exec.position, scenario.devices)};
    return runtime_delay(static_cast<double>(ops), params, exec.f_max);
}

WeightedDelay weighted_sum_delay(const Allocation &allocation, const Scenario &scenario,
                                 const CapacityTable &capacities, double tau_op) {
    WeightedDelay out;
    out.per_task.assign(scenario.num_tasks(), DelayBreakdown{kInf, kInf, kInf, kInf, kInf});
    out.allocated.assign(scenario.num_tasks(), false);

    for (std::size_t u = 0; u < scenario.num_uavs(); ++u) {
        const auto &decision = allocation.uavs[u];
        const auto &members = scenario.clusters[u].devices;
        const auto &uav = scenario.uavs[u];

        double load_h = 0.0;
        double load_s = 0.0;
        for (std::size_t l = 0; l < members.size(); ++l) {
            if (decision.beta_h[l] != 0) load_h += scenario.tasks[members[l]].bits;
            if (decision.beta_s[l] != 0) load_s += scenario.tasks[members[l]].bits;
        }
        const double feeder_h =
            feeder_delay(load_h, capacities.feeder_haps[u], distance(uav.position, scenario.haps.position), false);
        const double feeder_s =
            feeder_delay(load_s, capacities.feeder_leo[u], distance(uav.position, scenario.leo.position), true);

        for (std::size_t l = 0; l < members.size(); ++l) {
            const std::size_t i = members[l];
            if (!decision.allocated(l)) {
                ++out.unallocated;
                continue;
            }
            const auto &task = scenario.tasks[i];
            DelayBreakdown d;
            d.access = access_delay(task.bits, decision.rho_row(l), capacities.access[u].row(l));
            switch (decision.destination(l)) {
            case Destination::Local: d.feeder = 0.0; break;
            case Destination::Haps: d.feeder = feeder_h; break;
            case Destination::Leo: d.feeder = feeder_s; break;
            }
            d.compute = compute_delay(task.bits, task.density, allocation.shares[i]);
            d.runtime = tau_op;
            d.total = d.runtime + d.access + d.feeder + d.compute;
            out.per_task[i] = d;
            out.allocated[i] = true;
            out.hat_tau += d.total / task.deadline;
            out.total += d.total;
        }
    }
    return out;
}

}  // namespace ntnmec
