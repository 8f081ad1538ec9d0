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


#include "ntnmec/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ntnmec {

bool ConstraintReport::ok() const {
    return std::all_of(constraints.begin(), constraints.end(), [](const auto &c) { return c.ok; });
}

bool ConstraintReport::structural_ok() const {
    return std::all_of(constraints.begin() + 1, constraints.end(), [](const auto &c) { return c.ok; });
}

std::string ConstraintReport::summary() const {
    std::ostringstream out;
    for (std::size_t c = 0; c < kConstraints; ++c) {
        if (c > 0) out << "; ";
        out << 'C' << c + 1 << ' ';
        if (constraints[c].ok) {
            out << "ok";
            continue;
        }
        out << "violated:";
        for (const auto &v : constraints[c].violations) out << " [" << v << ']';
    }
    return out.str();
}

namespace {

void flag(ConstraintResult &r, std::string what) {
    r.ok = false;
    r.violations.push_back(std::move(what));
}

bool is_binary(std::uint8_t v) { return v == 0 || v == 1; }

/// Subchannel of cluster-local task l, straight from the rho row.
std::optional<std::size_t> assigned_subchannel(const UavDecision &d, std::size_t l) {
    for (std::size_t b = 0; b < d.subchannels; ++b)
        if (d.rho[l * d.subchannels + b] != 0) return b;
    return std::nullopt;
}

double link_seconds(double bits, double rate) {
    if (bits == 0.0) return 0.0;
    return rate > 0.0 ? bits / rate : kInf;
}

double leo_round_trip(const Scenario &s, std::size_t u) {
    const auto &a = s.uavs[u].position;
    const auto &b = s.leo.position;
    return 2.0 * std::hypot(a.x - b.x, a.y - b.y, a.z - b.z) / kSpeedOfLight;
}

}  // namespace

std::vector<double> reference_delays(const Allocation &allocation, const Scenario &scenario,
                                     const CapacityTable &capacities, double tau_op) {
    std::vector<double> out(scenario.num_tasks(), kInf);
    for (std::size_t u = 0; u < scenario.num_uavs(); ++u) {
        const auto &d = allocation.uavs[u];
        const auto &members = scenario.clusters[u].devices;
        double to_haps = 0.0;
        double to_leo = 0.0;
        for (std::size_t l = 0; l < members.size(); ++l) {
            to_haps += d.beta_h[l] != 0 ? scenario.tasks[members[l]].bits : 0.0;
            to_leo += d.beta_s[l] != 0 ? scenario.tasks[members[l]].bits : 0.0;
        }
        for (std::size_t l = 0; l < members.size(); ++l) {
            const auto b = assigned_subchannel(d, l);
            if (!b) continue;
            const auto &t = scenario.tasks[members[l]];
            double tau = tau_op + link_seconds(t.bits, capacities.access[u].rate[l * d.subchannels + *b]);
            if (d.beta_h[l] != 0) tau += link_seconds(to_haps, capacities.feeder_haps[u]);
            if (d.beta_s[l] != 0) tau += link_seconds(to_leo, capacities.feeder_leo[u]) + leo_round_trip(scenario, u);
            const double f = allocation.shares[members[l]];
            tau += f > 0.0 ? t.bits * t.density / f : kInf;
            out[members[l]] = tau;
        }
    }
    return out;
}

ConstraintReport check_constraints(const Allocation &allocation, const Scenario &scenario,
                                   const CapacityTable &capacities, const CheckOptions &options) {
    if (allocation.uavs.size() != scenario.num_uavs() || allocation.shares.size() != scenario.num_tasks())
        throw std::invalid_argument("allocation does not match the scenario shape");
    ConstraintReport report;
    auto &c1 = report.constraints[0];
    auto &c2 = report.constraints[1];
    auto &c3 = report.constraints[2];
    auto &c4 = report.constraints[3];
    auto &c5 = report.constraints[4];
    auto &c6 = report.constraints[5];
    auto &c7 = report.constraints[6];
    auto &c8 = report.constraints[7];
    const double tol = options.tolerance;

    double haps_load = 0.0;
    double leo_load = 0.0;
    for (std::size_t u = 0; u < scenario.num_uavs(); ++u) {
        const auto &d = allocation.uavs[u];
        const auto &members = scenario.clusters[u].devices;
        const std::string tag = "uav " + std::to_string(u);
        for (std::size_t l = 0; l < d.tasks; ++l) {
            const std::string task = tag + " task " + std::to_string(members[l]);
            unsigned row = 0;
            for (std::size_t b = 0; b < d.subchannels; ++b) {
                const auto v = d.rho[l * d.subchannels + b];
                if (!is_binary(v)) flag(c7, task + " subchannel " + std::to_string(b));
                row += v;
            }
            if (row > 1) flag(c3, task + ": " + std::to_string(row) + " subchannels");
            if (!is_binary(d.beta_h[l]) || !is_binary(d.beta_s[l])) flag(c6, task);
            if (static_cast<unsigned>(d.beta_h[l]) + d.beta_s[l] > row) flag(c5, task);
        }
        for (std::size_t b = 0; b < d.subchannels; ++b) {
            std::vector<std::size_t> users;
            for (std::size_t l = 0; l < d.tasks; ++l)
                if (d.rho[l * d.subchannels + b] != 0) users.push_back(members[l]);
            if (users.size() > 1) {
                std::string what = tag + " subchannel " + std::to_string(b) + ": tasks";
                for (auto i : users) what += " " + std::to_string(i);
                flag(c4, what);
            }
        }
        double uav_load = 0.0;
        for (std::size_t l = 0; l < d.tasks; ++l) {
            const double f = allocation.shares[members[l]];
            if (!(f >= 0.0) || !std::isfinite(f)) {
                flag(c8, "task " + std::to_string(members[l]));
                continue;
            }
            if (d.beta_h[l] != 0) haps_load += f;
            if (d.beta_s[l] != 0) leo_load += f;
            if (d.beta_h[l] == 0 && d.beta_s[l] == 0) uav_load += f;
        }
        if (uav_load > scenario.uavs[u].f_max * (1.0 + tol)) flag(c2, tag);
    }
    if (haps_load > scenario.haps.f_max * (1.0 + tol)) flag(c2, "haps");
    if (leo_load > scenario.leo.f_max * (1.0 + tol)) flag(c2, "leo");

    const auto delays = reference_delays(allocation, scenario, capacities, options.tau_op);
    for (std::size_t i = 0; i < scenario.num_tasks(); ++i) {
        const bool allocated = [&] {
            for (std::size_t u = 0; u < scenario.num_uavs(); ++u) {
                const auto &m = scenario.clusters[u].devices;
                const auto it = std::find(m.begin(), m.end(), i);
                if (it != m.end()) return assigned_subchannel(allocation.uavs[u], it - m.begin()).has_value();
            }
            return false;
        }();
        if (!allocated) continue;
        if (!options.exempt.empty() && options.exempt[i] != 0) continue;
        if (!(delays[i] <= scenario.tasks[i].deadline * (1.0 + tol))) {
            std::ostringstream what;
            what << "task " << i << ": " << delays[i] << " s > " << scenario.tasks[i].deadline << " s";
            flag(c1, what.str());
        }
    }
    return report;
}

std::optional<std::vector<double>> convex_shares_oracle(std::span<const double> weights, std::span<const double> lower,
                                                        double budget) {
    const std::size_t n = weights.size();
    auto bound = [&](std::size_t i) { return lower.empty() ? 0.0 : lower[i]; };
    double floor_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(bound(i))) return std::nullopt;
        floor_sum += bound(i);
    }
    if (floor_sum > budget) return std::nullopt;

    double root_sum = 0.0;
    for (auto w : weights) root_sum += std::sqrt(w);
    auto spend = [&](double lambda) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += std::max(bound(i), std::sqrt(weights[i]) * lambda);
        return s;
    };
    // spend(lo) <= budget <= spend(hi)
    double lo = 0.0;
    double hi = root_sum > 0.0 ? budget / root_sum : 0.0;
    for (int it = 0; it < 4000 && hi > lo; ++it) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        (spend(mid) <= budget ? lo : hi) = mid;
    }
    std::vector<double> shares(n);
    for (std::size_t i = 0; i < n; ++i) shares[i] = std::max(bound(i), std::sqrt(weights[i]) * lo);
    return shares;
}

std::optional<std::vector<double>> convex_shares_oracle(std::span<const ComputeRequest> requests, double budget,
                                                        bool with_minimums) {
    std::vector<double> w;
    std::vector<double> lower;
    for (const auto &r : requests) {
        w.push_back(r.weight());
        if (with_minimums) lower.push_back(r.min_share());
    }
    return convex_shares_oracle(w, lower, budget);
}

double kkt_residual(std::span<const double> weights, std::span<const double> lower, double budget,
                    std::span<const double> shares) {
    const std::size_t n = weights.size();
    auto bound = [&](std::size_t i) { return lower.empty() ? 0.0 : lower[i]; };
    double worst = 0.0;
    double spent = 0.0;
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < n; ++i) {
        spent += shares[i];
        const double l = bound(i);
        if (shares[i] < l) worst = std::max(worst, (l - shares[i]) / l);
        if (shares[i] > l * (1.0 + 1e-12)) free.push_back(i);
    }
    if (budget > 0.0) worst = std::max(worst, std::abs(spent - budget) / budget);
    if (free.empty()) return worst;

    double mu = 0.0;
    for (auto i : free) mu += weights[i] / (shares[i] * shares[i]);
    mu /= static_cast<double>(free.size());
    for (auto i : free) worst = std::max(worst, std::abs(weights[i] / (shares[i] * shares[i]) - mu) / mu);
    for (std::size_t i = 0; i < n; ++i) {
        if (std::find(free.begin(), free.end(), i) != free.end()) continue;
        const double l = bound(i);
        if (l > 0.0) worst = std::max(worst, (weights[i] / (l * l) - mu) / mu);
    }
    return worst;
}

namespace {

constexpr int kNone = -1;

/// One UAV's choice: subchannel (or none) and destination per local task.
struct UavPoint {
    std::vector<int> subchannel;
    std::vector<Destination> destination;
};

std::vector<Destination> allowed_list(const DestinationSet &allowed) {
    std::vector<Destination> out;
    for (auto d : {Destination::Local, Destination::Haps, Destination::Leo})
        if (allowed.allows(d)) out.push_back(d);
    return out;
}

void enumerate(std::size_t l, std::size_t n, std::size_t b_count, const std::vector<Destination> &dests,
               std::vector<bool> &used, UavPoint &cur, std::vector<UavPoint> &out) {
    if (l == n) {
        out.push_back(cur);
        return;
    }
    cur.subchannel[l] = kNone;
    cur.destination[l] = Destination::Local;
    enumerate(l + 1, n, b_count, dests, used, cur, out);
    for (std::size_t b = 0; b < b_count; ++b) {
        if (used[b]) continue;
        used[b] = true;
        cur.subchannel[l] = static_cast<int>(b);
        for (auto d : dests) {
            cur.destination[l] = d;
            enumerate(l + 1, n, b_count, dests, used, cur, out);
        }
        used[b] = false;
    }
    cur.subchannel[l] = kNone;
}

double per_uav_points(std::size_t n, std::size_t b, std::size_t d) {
    // sum_k C(n,k) * b!/(b-k)! * d^k
    double total = 0.0;
    for (std::size_t k = 0; k <= std::min(n, b); ++k) {
        double term = 1.0;
        for (std::size_t j = 0; j < k; ++j)
            term *= static_cast<double>(n - j) / static_cast<double>(j + 1) * static_cast<double>(b - j) *
                    static_cast<double>(d);
        total += term;
    }
    return total;
}

struct Member {
    std::size_t global;
    double arrival;  // tau_op + access + feeder
    double cycles;
    double deadline;
};

struct Evaluation {
    double objective = kInf;
    std::vector<double> shares;  // by global task
};

/// hat_tau of one joint point with optimal shares; +inf if any allocated task
/// ends with infinite delay (or, with deadlines enforced, misses one).
Evaluation evaluate(const Scenario &scenario, const CapacityTable &capacities, double tau_op,
                    const std::vector<const UavPoint *> &point, bool enforce_deadlines) {
    Evaluation ev;
    ev.shares.assign(scenario.num_tasks(), 0.0);
    std::vector<std::vector<Member>> groups(scenario.num_uavs() + 2);  // UAVs, then HAPS, LEO
    const std::size_t haps = scenario.num_uavs();
    const std::size_t leo = haps + 1;

    for (std::size_t u = 0; u < scenario.num_uavs(); ++u) {
        const auto &p = *point[u];
        const auto &members = scenario.clusters[u].devices;
        double bits_h = 0.0;
        double bits_s = 0.0;
        for (std::size_t l = 0; l < members.size(); ++l) {
            if (p.subchannel[l] == kNone) continue;
            if (p.destination[l] == Destination::Haps) bits_h += scenario.tasks[members[l]].bits;
            if (p.destination[l] == Destination::Leo) bits_s += scenario.tasks[members[l]].bits;
        }
        for (std::size_t l = 0; l < members.size(); ++l) {
            if (p.subchannel[l] == kNone) continue;
            const auto &t = scenario.tasks[members[l]];
            const auto b = static_cast<std::size_t>(p.subchannel[l]);
            double arrival = tau_op + link_seconds(t.bits, capacities.access[u].rate[l * capacities.access[u].cols + b]);
            std::size_t node = u;
            if (p.destination[l] == Destination::Haps) {
                arrival += link_seconds(bits_h, capacities.feeder_haps[u]);
                node = haps;
            } else if (p.destination[l] == Destination::Leo) {
                arrival += link_seconds(bits_s, capacities.feeder_leo[u]) + leo_round_trip(scenario, u);
                node = leo;
            }
            if (!std::isfinite(arrival)) return ev;
            groups[node].push_back({members[l], arrival, t.bits * t.density, t.deadline});
        }
    }

    double objective = 0.0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const auto &group = groups[g];
        if (group.empty()) continue;
        const double budget = g < haps ? scenario.uavs[g].f_max : (g == haps ? scenario.haps.f_max : scenario.leo.f_max);
        std::vector<double> w;
        std::vector<double> lower;
        for (const auto &m : group) {
            w.push_back(m.cycles / m.deadline);
            if (enforce_deadlines) {
                const double slack = m.deadline - m.arrival;
                lower.push_back(slack > 0.0 ? m.cycles / slack : kInf);
            }
        }
        const auto shares = convex_shares_oracle(w, lower, budget);
        if (!shares) return ev;
        for (std::size_t k = 0; k < group.size(); ++k) {
            const double f = (*shares)[k];
            if (!(f > 0.0)) return ev;
            objective += (group[k].arrival + group[k].cycles / f) / group[k].deadline;
            ev.shares[group[k].global] = f;
        }
    }
    ev.objective = objective;
    return ev;
}

Allocation to_allocation(const Scenario &scenario, const std::vector<const UavPoint *> &point,
                         std::vector<double> shares) {
    Allocation a = Allocation::empty(scenario);
    for (std::size_t u = 0; u < scenario.num_uavs(); ++u) {
        auto &d = a.uavs[u];
        for (std::size_t l = 0; l < d.tasks; ++l) {
            const int b = point[u]->subchannel[l];
            if (b == kNone) continue;
            d.rho_at(l, static_cast<std::size_t>(b)) = 1;
            if (point[u]->destination[l] == Destination::Haps) d.beta_h[l] = 1;
            if (point[u]->destination[l] == Destination::Leo) d.beta_s[l] = 1;
        }
    }
    a.shares = std::move(shares);
    return a;
}

}  // namespace

double search_space_size(const Scenario &scenario, const DestinationSet &allowed) {
    const auto b = static_cast<std::size_t>(scenario.bands().subchannels);
    const auto d = allowed_list(allowed).size();
    double total = 1.0;
    for (const auto &c : scenario.clusters) total *= per_uav_points(c.devices.size(), b, d);
    return total;
}

OracleResult exhaustive_search(const Scenario &scenario, const CapacityTable &capacities, double tau_op,
                               const DestinationSet &allowed, const OracleLimits &limits) {
    const auto b_count = static_cast<std::size_t>(scenario.bands().subchannels);
    const double size = search_space_size(scenario, allowed);
    if (scenario.num_tasks() > limits.max_tasks || b_count > limits.max_subchannels ||
        scenario.num_uavs() > limits.max_uavs || size > limits.max_points) {
        std::ostringstream msg;
        msg << "instance too large for exhaustive search: " << scenario.num_tasks() << " tasks, " << b_count
            << " subchannels, " << scenario.num_uavs() << " UAVs, " << size << " points (limits " << limits.max_tasks
            << ", " << limits.max_subchannels << ", " << limits.max_uavs << ", " << limits.max_points << ")";
        throw InstanceTooLarge(msg.str());
    }

    const auto dests = allowed_list(allowed);
    std::vector<std::vector<UavPoint>> per_uav(scenario.num_uavs());
    for (std::size_t u = 0; u < scenario.num_uavs(); ++u) {
        const std::size_t n = scenario.clusters[u].devices.size();
        UavPoint cur{std::vector<int>(n, kNone), std::vector<Destination>(n, Destination::Local)};
        std::vector<bool> used(b_count, false);
        enumerate(0, n, b_count, dests, used, cur, per_uav[u]);
    }

    OracleResult result;
    result.search_space_size = size;
    result.relaxed_unallocated = scenario.num_tasks() + 1;

    std::vector<std::size_t> index(scenario.num_uavs(), 0);
    std::vector<const UavPoint *> point(scenario.num_uavs());
    for (;;) {
        std::size_t unallocated = 0;
        for (std::size_t u = 0; u < point.size(); ++u) {
            point[u] = &per_uav[u][index[u]];
            unallocated += static_cast<std::size_t>(std::count(point[u]->subchannel.begin(), point[u]->subchannel.end(), kNone));
        }

        if (unallocated == 0) {
            auto ev = evaluate(scenario, capacities, tau_op, point, true);
            if (ev.objective < result.best_objective) {
                result.best_objective = ev.objective;
                result.best_allocation = to_allocation(scenario, point, std::move(ev.shares));
            }
        }
        if (unallocated <= result.relaxed_unallocated) {
            auto ev = evaluate(scenario, capacities, tau_op, point, false);
            if (std::isfinite(ev.objective) &&
                (unallocated < result.relaxed_unallocated || ev.objective < result.relaxed_objective)) {
                result.relaxed_unallocated = unallocated;
                result.relaxed_objective = ev.objective;
                result.relaxed_allocation = to_allocation(scenario, point, std::move(ev.shares));
            }
        }

        std::size_t u = 0;
        for (; u < index.size(); ++u) {
            if (++index[u] < per_uav[u].size()) break;
            index[u] = 0;
        }
        if (u == index.size()) break;
    }
    if (result.relaxed_unallocated > scenario.num_tasks()) {
        result.relaxed_unallocated = scenario.num_tasks();
        result.relaxed_objective = 0.0;
        result.relaxed_allocation = Allocation::empty(scenario);
    }
    if (!std::isfinite(result.best_objective)) result.best_allocation = Allocation::empty(scenario);
    return result;
}

}  // namespace ntnmec
