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

// Greedy joint subchannel allocation and offloading decision.
//
// Every round re-initializes provisional compute shares, prices each
// (UAV, task, subchannel, destination) tuple, and commits the global argmin.
// Remote prices come from the quadratic-transform decoupling of the shared
// feeder-link term: offloading task i to node k costs its own delay through k
// plus the extra feeder delay it imposes on the tasks already sent to k,
// each weighted by the inverse of the owning task's deadline.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ntnmec/allocation.hpp"
#include "ntnmec/channel.hpp"
#include "ntnmec/scenario.hpp"

namespace ntnmec {

enum class Variant { All, NoLeo, NoHaps, NonAdaptive };

std::string_view to_string(Variant v);
std::optional<Variant> parse_variant(std::string_view name);

struct DestinationSet {
    bool local = true;
    bool haps = true;
    bool leo = true;

    bool allows(Destination d) const;
};

DestinationSet restrict_destinations(Variant variant);

/// Working matrices of one UAV. Mask entries set to 1 stand for +inf.
struct UavState {
    UavDecision decision;
    std::vector<std::uint8_t> blocked_pair;                       // V_u, tasks x subchannels
    std::array<std::vector<std::uint8_t>, kDestinations> blocked;  // v_u^u, v_u^h, v_u^s
    std::vector<std::uint8_t> pending;                             // membership in the unallocated set

    bool pair_blocked(std::size_t l, std::size_t b) const { return blocked_pair[l * decision.subchannels + b] != 0; }
};

struct DecisionState {
    std::vector<UavState> uavs;
    std::vector<double> uav_pool;  // remaining F_u
    double haps_pool = 0.0;        // remaining F_h (seen in full by every UAV)
    double leo_pool = 0.0;         // remaining F_s
    // Non-adaptive variant: orthogonal per-UAV remote pools and the shares
    // fixed once at the start, [u][destination][l].
    std::vector<std::array<double, kDestinations>> orthogonal_pool;
    std::vector<std::array<std::vector<double>, kDestinations>> fixed_shares;
    std::vector<double> shares;  // committed share per global task

    static DecisionState initial(const Scenario &scenario, Variant variant);

    std::size_t pending_count() const;
    Allocation allocation() const;
};

/// Provisional shares [u][destination][l]; zero for tasks no longer pending.
struct ProvisionalShares {
    std::vector<std::array<std::vector<double>, kDestinations>> per_uav;

    double at(std::size_t u, Destination d, std::size_t l) const {
        return per_uav[u][static_cast<std::size_t>(d)][l];
    }
};

/// Dynamic initialization: the UAV and the LEO re-run the closed form over the
/// pending tasks against their remaining pool; the HAPS runs it over the
/// cluster's original task set against its remaining pool. Each UAV sees the
/// whole remaining remote pool.
ProvisionalShares dynamic_init(const DecisionState &state, const Scenario &scenario);

/// Non-adaptive shares: the ones fixed at the start, clipped to what is left
/// of the UAV's orthogonal pool.
ProvisionalShares fixed_init(const DecisionState &state, const Scenario &scenario);

/// Sum over already-offloaded tasks j != i of d_j and of 1 / tau_j^max.
struct OffloadLoad {
    double bits = 0.0;
    double inverse_deadlines = 0.0;
};

OffloadLoad offload_load(const UavDecision &decision, const Scenario &scenario, std::size_t uav, Destination dest,
                         std::optional<std::size_t> exclude = std::nullopt);

/// (d c / f_u + d / R_b) / tau_max; +inf for zero capacity or zero share.
double local_cost(const Task &task, double local_share, double access_rate);

/// Own delay through the remote node plus the coupling term, without the
/// local-compute offset: (d/R_k + load/R_k + d c/f_k + prop) / tau_max
/// + d * sum_j(1/tau_j) / R_k. Finite even when the local share is zero.
double remote_path_cost(const Task &task, double remote_share, double feeder_rate, double propagation,
                        const OffloadLoad &others);

/// Remote cost increment: remote_path_cost minus the local compute term
/// d c / (f_u tau_max), i.e. with upsilon_k = tau^k - tau^u (+ round trip).
double remote_cost_increment(const Task &task, double local_share, double remote_share, double feeder_rate,
                             double propagation, const OffloadLoad &others);

/// Difference-of-squares rewrite of the feeder cross term and its
/// quadratic-transform expansion, both evaluated at the current point.
/// Returns the largest absolute deviation from beta_i * S_i / R.
double qt_identity_check(std::span<const std::uint8_t> betas, std::span<const double> bits, double rate);

/// Per-UAV price tables for one round.
struct CostMatrices {
    std::size_t tasks = 0;
    std::size_t subchannels = 0;
    std::vector<double> access;                      // d / (R_b tau_max), tasks x subchannels
    std::array<std::vector<double>, kDestinations> path;  // per task, +inf when masked

    /// U_u(l, b): access plus local compute, unmasked.
    double local(std::size_t l, std::size_t b) const;
    /// Masked combined price for (l, b, destination).
    double combined(const UavState &state, std::size_t l, std::size_t b, Destination d) const;
};

CostMatrices build_costs(const DecisionState &state, const ProvisionalShares &shares, const Scenario &scenario,
                         const CapacityTable &capacities, std::size_t uav, const DestinationSet &allowed);

struct Selection {
    std::size_t uav = 0;
    std::size_t local = 0;
    std::size_t subchannel = 0;
    Destination destination = Destination::Local;
    double cost = 0.0;
    double share = 0.0;
    bool repaired = false;  // provisional share replaced by the whole remaining pool
};

struct QtcajosaOptions {
    Variant variant = Variant::All;
    /// Called after every commit with the updated state.
    std::function<void(const DecisionState &, const Selection &)> on_commit;
};

struct QtcajosaResult {
    DecisionState state;
    Allocation committed;   // decisions and shares as committed by the loop
    Allocation allocation;  // after the final per-node share optimization
    std::vector<std::uint8_t> flagged;  // per global task: allocated but left short of its deadline
    std::vector<Selection> commits;
    std::size_t iterations = 0;
    std::size_t rejections = 0;
    double tau_op = 0.0;
};

QtcajosaResult qtcajosa(const Scenario &scenario, const CapacityTable &capacities, const QtcajosaOptions &options = {});
QtcajosaResult qtcajosa_nonadaptive(const Scenario &scenario, const CapacityTable &capacities);

/// Re-optimizes shares per node over a fixed assignment. A task that cannot
/// meet its deadline at a remote node moves to its UAV (when the UAV has
/// compute); a UAV whose tasks do not all fit falls back to best_effort_uav.
/// Tasks that still miss their minimum share are marked in `flagged`.
Allocation finalize_shares(const Allocation &committed, const Scenario &scenario, const CapacityTable &capacities,
                           double tau_op, std::vector<std::uint8_t> *flagged = nullptr);

}  // namespace ntnmec
