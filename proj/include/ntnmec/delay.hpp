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

#include <cstdint>
#include <span>
#include <vector>

#include "ntnmec/allocation.hpp"
#include "ntnmec/channel.hpp"
#include "ntnmec/scenario.hpp"

namespace ntnmec {

/// Per-task delay decomposition. +inf marks an unallocated component.
struct DelayBreakdown {
    double access = 0.0;
    double feeder = 0.0;  // zero when computed at the UAV
    double compute = 0.0;
    double runtime = 0.0;
    double total = 0.0;
};

struct RuntimeParams {
    double c_op = 1.0;     // cycles per operation
    double rtt_max = 0.0;  // seconds
};

/// d / R on the assigned subchannel; +inf when no subchannel is assigned.
double access_delay(double bits, std::span<const std::uint8_t> rho_row, std::span<const double> rates);

/// load / R plus, for LEO links, the round-trip propagation 2 d / c.
double feeder_delay(double load_bits, double rate, double distance, bool include_rtt);

/// d c / f; +inf when f is zero.
double compute_delay(double bits, double density, double share);

std::uint64_t op_count_qtcajosa(std::uint64_t tasks, std::uint64_t subchannels);
std::uint64_t op_count_resource_alloc(std::uint64_t uavs, std::uint64_t cluster_size);

double runtime_delay(double operations, const RuntimeParams &params, double executor_f_max);

/// 2 max_i ||r_i - r_k|| / c over ground devices.
double max_round_trip(const Position &executor, std::span<const NodeConfig> devices);

/// tau_op for a scenario: both op counts charged at the executor.
double algorithm_runtime(const Scenario &scenario);

struct WeightedDelay {
    double hat_tau = 0.0;  // sum over allocated tasks of tau_i / tau_i^max
    double total = 0.0;    // sum over allocated tasks of tau_i
    std::vector<DelayBreakdown> per_task;
    std::vector<bool> allocated;
    std::size_t unallocated = 0;
};

/// Weighted-sum delay evaluation. Feeder delay aggregates every task the UAV sends to
/// the same remote node. Unallocated tasks carry +inf breakdowns and are left
/// out of hat_tau and total.
WeightedDelay weighted_sum_delay(const Allocation &allocation, const Scenario &scenario,
                                 const CapacityTable &capacities, double tau_op);

}  // namespace ntnmec
