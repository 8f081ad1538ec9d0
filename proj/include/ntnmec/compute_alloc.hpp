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

// Per-node computing-resource allocation.
//
// At a node with budget F the shares solve
//
//     min  sum_i a_i / f_i      a_i = d_i c_i / tau_i^max
//     s.t. sum_i f_i <= F,  f_i >= f_i^min
//
// Without lower bounds the Lagrangian L = sum a_i / f_i + mu (sum f_i - F)
// gives a_i / f_i^2 = mu, so f_i is proportional to sqrt(a_i) and the budget
// binds: f_i = sqrt(a_i) / sum_j sqrt(a_j) * F. With lower bounds, KKT gives
// f_i = max(f_i^min, sqrt(a_i / mu)); pinning every violator at its minimum
// and re-solving the remainder reaches that point.

#include <cstddef>
#include <span>
#include <vector>

namespace ntnmec {

struct ComputeRequest {
    std::size_t task = 0;
    double cycles = 0.0;    // d_i c_i
    double deadline = 0.0;  // tau_i^max
    double arrival = 0.0;   // delay before computing can start at this node

    /// cycles / (deadline - arrival); +inf when arrival >= deadline.
    double min_share() const;
    /// a_i = cycles / deadline
    double weight() const { return cycles / deadline; }
};

/// Shares are aligned with the request order.
struct ComputeAllocation {
    std::vector<double> shares;
    double residual = 0.0;
    std::vector<std::size_t> infeasible;  // task ids, ascending
};

/// Unconstrained optimum: shares proportional to sqrt(a_i), summing to f_max.
std::vector<double> closed_form_shares(std::span<const ComputeRequest> requests, double f_max);

/// Closed form with minimum-share pinning. Requests whose minimum cannot be
/// met (deadline already passed, or budget exhausted when admitting in
/// ascending minimum order) receive zero and are listed as infeasible.
ComputeAllocation allocate_with_minimums(std::span<const ComputeRequest> requests, double f_max);

/// Local-UAV fallback: minimums are granted in ascending order until one does
/// not fit; every remaining task then gets an equal split of what is left.
/// Tasks whose share ends up below their minimum are listed as infeasible.
ComputeAllocation best_effort_uav(std::span<const ComputeRequest> requests, double f_max);

/// sum_i a_i / f_i
double compute_objective(std::span<const ComputeRequest> requests, std::span<const double> shares);

}  // namespace ntnmec
