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

#include "ntnmec/compute_alloc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ntnmec/common.hpp"

namespace ntnmec {

double ComputeRequest::min_share() const {
    const double slack = deadline - arrival;
    if (!(slack > 0.0)) return kInf;
    return cycles / slack;
}

std::vector<double> closed_form_shares(std::span<const ComputeRequest> requests, double f_max) {
    std::vector<double> shares(requests.size(), 0.0);
    double total = 0.0;
    for (const auto &r : requests) total += std::sqrt(r.weight());
    if (!(total > 0.0)) return shares;
    for (std::size_t k = 0; k < requests.size(); ++k) shares[k] = std::sqrt(requests[k].weight()) / total * f_max;
    return shares;
}

namespace {

/// Request indices sorted by (minimum share, task id).
std::vector<std::size_t> ascending_by_minimum(std::span<const ComputeRequest> requests) {
    std::vector<std::size_t> order(requests.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double ma = requests[a].min_share();
        const double mb = requests[b].min_share();
        if (ma != mb) return ma < mb;
        return requests[a].task < requests[b].task;
    });
    return order;
}

void finish(ComputeAllocation &out, double f_max) {
    const double used = std::accumulate(out.shares.begin(), out.shares.end(), 0.0);
    out.residual = std::max(0.0, f_max - used);
    std::sort(out.infeasible.begin(), out.infeasible.end());
}

}  // namespace

ComputeAllocation allocate_with_minimums(std::span<const ComputeRequest> requests, double f_max) {
    ComputeAllocation out;
    out.shares.assign(requests.size(), 0.0);

    std::vector<std::size_t> admitted;
    double committed = 0.0;
    for (auto k : ascending_by_minimum(requests)) {
        const double m = requests[k].min_share();
        if (std::isfinite(m) && committed + m <= f_max) {
            committed += m;
            admitted.push_back(k);
        } else {
            out.infeasible.push_back(requests[k].task);
        }
    }

    std::vector<bool> pinned(requests.size(), false);
    // Each pass pins at least one more request or stops, so |admitted| passes suffice.
    for (std::size_t pass = 0; pass <= admitted.size(); ++pass) {
        double budget = f_max;
        double scale = 0.0;
        for (auto k : admitted) {
            if (pinned[k]) {
                budget -= requests[k].min_share();
            } else {
                scale += std::sqrt(requests[k].weight());
            }
        }
        bool changed = false;
        for (auto k : admitted) {
            if (pinned[k]) {
                out.shares[k] = requests[k].min_share();
                continue;
            }
            out.shares[k] = std::sqrt(requests[k].weight()) / scale * std::max(budget, 0.0);
            if (out.shares[k] < requests[k].min_share()) {
                pinned[k] = true;
                changed = true;
            }
        }
        if (!changed) break;
    }
    for (auto k : admitted)
        if (pinned[k]) out.shares[k] = requests[k].min_share();

    finish(out, f_max);
    return out;
}

ComputeAllocation best_effort_uav(std::span<const ComputeRequest> requests, double f_max) {
    ComputeAllocation out;
    out.shares.assign(requests.size(), 0.0);
    const auto order = ascending_by_minimum(requests);

    double used = 0.0;
    std::size_t served = 0;
    for (; served < order.size(); ++served) {
        const double m = requests[order[served]].min_share();
        if (!std::isfinite(m) || used + m > f_max) break;
        out.shares[order[served]] = m;
        used += m;
    }
    const std::size_t rest = order.size() - served;
    if (rest > 0) {
        const double each = std::max(0.0, f_max - used) / static_cast<double>(rest);
        for (std::size_t k = served; k < order.size(); ++k) {
            const auto idx = order[k];
            out.shares[idx] = each;
            if (each < requests[idx].min_share()) out.infeasible.push_back(requests[idx].task);
        }
    }
    finish(out, f_max);
    return out;
}

double compute_objective(std::span<const ComputeRequest> requests, std::span<const double> shares) {
    double total = 0.0;
    for (std::size_t k = 0; k < requests.size(); ++k)
        total += shares[k] > 0.0 ? requests[k].weight() / shares[k] : kInf;
    return total;
}

}  // namespace ntnmec
