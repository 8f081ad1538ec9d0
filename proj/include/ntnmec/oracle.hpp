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

// Reference implementations used to check the optimizer: a constraint
// checker, a bisection solver for the per-node share problem, and brute-force
// enumeration of the joint problem on desk-scale instances. Nothing here
// reuses the delay or allocation code paths it is meant to verify.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ntnmec/allocation.hpp"
#include "ntnmec/channel.hpp"
#include "ntnmec/compute_alloc.hpp"
#include "ntnmec/qtcajosa.hpp"
#include "ntnmec/scenario.hpp"

namespace ntnmec {

inline constexpr std::size_t kConstraints = 8;

struct ConstraintResult {
    bool ok = true;
    std::vector<std::string> violations;  // one entry per offending index set
};

/// Results for C1..C8 at positions 0..7.
struct ConstraintReport {
    std::array<ConstraintResult, kConstraints> constraints;

    bool ok() const;
    /// Everything except the per-task deadline constraint.
    bool structural_ok() const;
    const ConstraintResult &operator[](std::size_t c) const { return constraints[c - 1]; }
    std::string summary() const;
};

struct CheckOptions {
    double tau_op = 0.0;
    double tolerance = 1e-9;  // relative, for deadline and budget comparisons
    /// Per global task; nonzero entries are exempt from the deadline check.
    std::vector<std::uint8_t> exempt;
};

/// C1 deadlines (allocated, non-exempt tasks), C2 node budgets, C3 one
/// subchannel per task, C4 one task per subchannel, C5 offload only if
/// admitted, C6/C7 binary decisions, C8 nonnegative finite shares.
ConstraintReport check_constraints(const Allocation &allocation, const Scenario &scenario,
                                   const CapacityTable &capacities, const CheckOptions &options = {});

/// Per-task delays recomputed from scratch; +inf for unallocated tasks.
std::vector<double> reference_delays(const Allocation &allocation, const Scenario &scenario,
                                     const CapacityTable &capacities, double tau_op);

/// min sum a_i / f_i  s.t.  sum f_i <= budget, f_i >= lower_i, by bisection
/// on the budget multiplier. nullopt when the lower bounds exceed the budget.
/// An empty `lower` means no lower bounds.
std::optional<std::vector<double>> convex_shares_oracle(std::span<const double> weights, std::span<const double> lower,
                                                        double budget);
/// Same problem from compute requests; lower bounds are the minimum shares
/// when `with_minimums` is set.
std::optional<std::vector<double>> convex_shares_oracle(std::span<const ComputeRequest> requests, double budget,
                                                        bool with_minimums);

/// Largest relative violation of the KKT conditions at `shares`: stationarity
/// of free variables, sign of multipliers at active bounds, budget
/// complementarity and primal feasibility.
double kkt_residual(std::span<const double> weights, std::span<const double> lower, double budget,
                    std::span<const double> shares);

struct OracleLimits {
    std::size_t max_tasks = 5;
    std::size_t max_subchannels = 4;
    std::size_t max_uavs = 2;
    double max_points = 1e6;
};

struct OracleResult {
    /// Optimum of the original problem: every task allocated and on time.
    /// +inf (and an empty allocation) when no such point exists.
    double best_objective = kInf;
    Allocation best_allocation;
    /// Lexicographic optimum of (unallocated count, hat_tau) with deadlines
    /// relaxed; this is the space the greedy search actually explores.
    std::size_t relaxed_unallocated = 0;
    double relaxed_objective = kInf;
    Allocation relaxed_allocation;
    double search_space_size = 0.0;
};

/// Number of (subchannel injection, destination) points enumerated.
double search_space_size(const Scenario &scenario, const DestinationSet &allowed = {});

/// Enumerates every subchannel injection (including leaving tasks out) and
/// destination choice, with per-node optimal shares. Throws InstanceTooLarge.
OracleResult exhaustive_search(const Scenario &scenario, const CapacityTable &capacities, double tau_op,
                               const DestinationSet &allowed = {}, const OracleLimits &limits = {});

}  // namespace ntnmec
