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

#include "ntnmec/qtcajosa.hpp"

#include <algorithm>
#include <cmath>

#include "ntnmec/compute_alloc.hpp"
#include "ntnmec/delay.hpp"

namespace ntnmec {

std::string_view to_string(Variant v) {
    switch (v) {
    case Variant::All: return "all";
    case Variant::NoLeo: return "no_leo";
    case Variant::NoHaps: return "no_haps";
    case Variant::NonAdaptive: return "nonadaptive";
    }
    return "?";
}

std::optional<Variant> parse_variant(std::string_view name) {
    for (auto v : {Variant::All, Variant::NoLeo, Variant::NoHaps, Variant::NonAdaptive})
        if (name == to_string(v)) return v;
    return std::nullopt;
}

bool DestinationSet::allows(Destination d) const {
    switch (d) {
    case Destination::Local: return local;
    case Destination::Haps: return haps;
    case Destination::Leo: return leo;
    }
    return false;
}

DestinationSet restrict_destinations(Variant variant) {
    DestinationSet s;
    if (variant == Variant::NoLeo) s.leo = false;
    if (variant == Variant::NoHaps) s.haps = false;
    return s;
}

namespace {

constexpr std::array<Destination, kDestinations> kOrder{Destination::Local, Destination::Haps, Destination::Leo};

constexpr std::size_t idx(Destination d) { return static_cast<std::size_t>(d); }

std::vector<ComputeRequest> cluster_requests(const Scenario &scenario, std::size_t u, const std::vector<std::uint8_t> *only) {
    std::vector<ComputeRequest> req;
    const auto &members = scenario.clusters[u].devices;
    for (std::size_t l = 0; l < members.size(); ++l) {
        if (only != nullptr && (*only)[l] == 0) continue;
        const auto &t = scenario.tasks[members[l]];
        req.push_back({l, t.cycles(), t.deadline, 0.0});
    }
    return req;
}

/// Closed-form shares over `base` (all tasks or pending ones), reported for
/// the pending tasks only.
std::vector<double> closed_form_for_pending(const Scenario &scenario, std::size_t u, const UavState &us, double pool,
                                            bool over_original_set) {
    const auto req = cluster_requests(scenario, u, over_original_set ? nullptr : &us.pending);
    const auto shares = closed_form_shares(req, pool);
    std::vector<double> out(us.pending.size(), 0.0);
    for (std::size_t k = 0; k < req.size(); ++k)
        if (us.pending[req[k].task] != 0) out[req[k].task] = shares[k];
    return out;
}

}  // namespace

DecisionState DecisionState::initial(const Scenario &scenario, Variant variant) {
    DecisionState s;
    const auto b = static_cast<std::size_t>(scenario.bands().subchannels);
    for (const auto &c : scenario.clusters) {
        UavState us;
        const auto n = c.devices.size();
        us.decision = UavDecision(n, b);
        us.blocked_pair.assign(n * b, 0);
        for (auto &m : us.blocked) m.assign(n, 0);
        us.pending.assign(n, 1);
        s.uavs.push_back(std::move(us));
        s.uav_pool.push_back(scenario.uavs[c.uav].f_max);
    }
    s.haps_pool = scenario.haps.f_max;
    s.leo_pool = scenario.leo.f_max;
    s.shares.assign(scenario.num_tasks(), 0.0);

    if (variant == Variant::NonAdaptive) {
        const double n_uavs = static_cast<double>(scenario.num_uavs());
        for (std::size_t u = 0; u < scenario.num_uavs(); ++u) {
            const std::array<double, kDestinations> pools{scenario.uavs[u].f_max, scenario.haps.f_max / n_uavs,
                                                          scenario.leo.f_max / n_uavs};
            s.orthogonal_pool.push_back(pools);
            std::array<std::vector<double>, kDestinations> fixed;
            for (auto d : kOrder) fixed[idx(d)] = closed_form_for_pending(scenario, u, s.uavs[u], pools[idx(d)], true);
            s.fixed_shares.push_back(std::move(fixed));
        }
    }
    return s;
}

std::size_t DecisionState::pending_count() const {
    std::size_t n = 0;
    for (const auto &us : uavs) n += static_cast<std::size_t>(std::count(us.pending.begin(), us.pending.end(), 1));
    return n;
}

Allocation DecisionState::allocation() const {
    Allocation a;
    for (const auto &us : uavs) a.uavs.push_back(us.decision);
    a.shares = shares;
    return a;
}

ProvisionalShares dynamic_init(const DecisionState &state, const Scenario &scenario) {
    ProvisionalShares p;
    for (std::size_t u = 0; u < state.uavs.size(); ++u) {
        const auto &us = state.uavs[u];
        std::array<std::vector<double>, kDestinations> s;
        s[idx(Destination::Local)] = closed_form_for_pending(scenario, u, us, state.uav_pool[u], false);
        s[idx(Destination::Haps)] = closed_form_for_pending(scenario, u, us, state.haps_pool, true);
        s[idx(Destination::Leo)] = closed_form_for_pending(scenario, u, us, state.leo_pool, false);
        p.per_uav.push_back(std::move(s));
    }
    return p;
}

ProvisionalShares fixed_init(const DecisionState &state, const Scenario &scenario) {
    (void)scenario;
    ProvisionalShares p;
    for (std::size_t u = 0; u < state.uavs.size(); ++u) {
        const auto &us = state.uavs[u];
        std::array<std::vector<double>, kDestinations> s;
        for (auto d : kOrder) {
            const auto &fixed = state.fixed_shares[u][idx(d)];
            const double left = state.orthogonal_pool[u][idx(d)];
            s[idx(d)].assign(us.pending.size(), 0.0);
            for (std::size_t l = 0; l < us.pending.size(); ++l)
                if (us.pending[l] != 0) s[idx(d)][l] = std::min(fixed[l], left);
        }
        p.per_uav.push_back(std::move(s));
    }
    return p;
}

OffloadLoad offload_load(const UavDecision &decision, const Scenario &scenario, std::size_t uav, Destination dest,
                         std::optional<std::size_t> exclude) {
    OffloadLoad load;
    if (dest == Destination::Local) return load;
    const auto &beta = dest == Destination::Haps ? decision.beta_h : decision.beta_s;
    const auto &members = scenario.clusters[uav].devices;
    for (std::size_t j = 0; j < members.size(); ++j) {
        if (beta[j] == 0 || (exclude && *exclude == j)) continue;
        const auto &t = scenario.tasks[members[j]];
        load.bits += t.bits;
        load.inverse_deadlines += 1.0 / t.deadline;
    }
    return load;
}

double local_cost(const Task &task, double local_share, double access_rate) {
    if (!(access_rate > 0.0) || !(local_share > 0.0)) return kInf;
    return (task.cycles() / local_share + task.bits / access_rate) / task.deadline;
}

double remote_path_cost(const Task &task, double remote_share, double feeder_rate, double propagation,
                        const OffloadLoad &others) {
    if (!(feeder_rate > 0.0) || !(remote_share > 0.0)) return kInf;
    const double own = task.bits / feeder_rate + others.bits / feeder_rate + task.cycles() / remote_share + propagation;
    return own / task.deadline + task.bits * others.inverse_deadlines / feeder_rate;
}

double remote_cost_increment(const Task &task, double local_share, double remote_share, double feeder_rate,
                             double propagation, const OffloadLoad &others) {
    return remote_path_cost(task, remote_share, feeder_rate, propagation, others) -
           compute_delay(task.bits, task.density, local_share) / task.deadline;
}

namespace {

/// a^2 - b^2 with both squares split exactly into hi + lo parts.
double difference_of_squares(double a, double b) {
    const double ha = a * a;
    const double la = std::fma(a, a, -ha);
    const double hb = b * b;
    const double lb = std::fma(b, b, -hb);
    return (ha - hb) + (la - lb);
}

}  // namespace

double qt_identity_check(std::span<const std::uint8_t> betas, std::span<const double> bits, double rate) {
    double total = 0.0;
    for (std::size_t j = 0; j < betas.size(); ++j) total += betas[j] != 0 ? bits[j] : 0.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < betas.size(); ++i) {
        const double beta = betas[i] != 0 ? 1.0 : 0.0;
        const double others = total - beta * bits[i];
        const double target = beta * others / rate;
        // Cross term as a difference of squares.
        const double squares = difference_of_squares(others + beta, others - beta) / (4.0 * rate);
        // Quadratic-transform expansion with the previous point equal to the current one.
        const double expanded = (beta / rate) * others + (others / rate) * beta - (beta * others / (rate * rate)) * rate;
        worst = std::max({worst, std::abs(target - squares), std::abs(target - expanded)});
    }
    return worst;
}

double CostMatrices::local(std::size_t l, std::size_t b) const {
    return access[l * subchannels + b] + path[idx(Destination::Local)][l];
}

double CostMatrices::combined(const UavState &state, std::size_t l, std::size_t b, Destination d) const {
    if (state.pair_blocked(l, b) || state.blocked[idx(d)][l] != 0) return kInf;
    const double a = access[l * subchannels + b];
    const double p = path[idx(d)][l];
    if (std::isinf(a) || std::isinf(p)) return kInf;
    return a + p;
}

CostMatrices build_costs(const DecisionState &state, const ProvisionalShares &shares, const Scenario &scenario,
                         const CapacityTable &capacities, std::size_t u, const DestinationSet &allowed) {
    const auto &us = state.uavs[u];
    const auto &members = scenario.clusters[u].devices;
    const auto &uav = scenario.uavs[u];
    CostMatrices c;
    c.tasks = members.size();
    c.subchannels = us.decision.subchannels;
    c.access.assign(c.tasks * c.subchannels, kInf);
    for (auto &p : c.path) p.assign(c.tasks, kInf);

    const OffloadLoad haps_load = offload_load(us.decision, scenario, u, Destination::Haps);
    const OffloadLoad leo_load = offload_load(us.decision, scenario, u, Destination::Leo);
    const double leo_rtt = 2.0 * distance(uav.position, scenario.leo.position) / kSpeedOfLight;

    for (std::size_t l = 0; l < c.tasks; ++l) {
        if (us.pending[l] == 0) continue;
        const auto &task = scenario.tasks[members[l]];
        for (std::size_t b = 0; b < c.subchannels; ++b) {
            const double rate = capacities.access[u].at(l, b);
            c.access[l * c.subchannels + b] = rate > 0.0 ? task.bits / rate / task.deadline : kInf;
        }
        if (allowed.local) {
            const double f = shares.at(u, Destination::Local, l);
            c.path[idx(Destination::Local)][l] = f > 0.0 ? task.cycles() / f / task.deadline : kInf;
        }
        if (allowed.haps)
            c.path[idx(Destination::Haps)][l] = remote_path_cost(task, shares.at(u, Destination::Haps, l),
                                                                 capacities.feeder_haps[u], 0.0, haps_load);
        if (allowed.leo)
            c.path[idx(Destination::Leo)][l] = remote_path_cost(task, shares.at(u, Destination::Leo, l),
                                                                capacities.feeder_leo[u], leo_rtt, leo_load);
    }
    return c;
}

namespace {

/// tau_i of a candidate commit at the given share.
double candidate_delay(const Scenario &scenario, const CapacityTable &capacities, const UavState &us,
                       const Selection &sel, double share, double tau_op) {
    const auto &task = scenario.tasks[scenario.clusters[sel.uav].devices[sel.local]];
    const double rate = capacities.access[sel.uav].at(sel.local, sel.subchannel);
    double delay = tau_op + (rate > 0.0 ? task.bits / rate : kInf) + compute_delay(task.bits, task.density, share);
    if (sel.destination != Destination::Local) {
        const auto load = offload_load(us.decision, scenario, sel.uav, sel.destination);
        const bool leo = sel.destination == Destination::Leo;
        const auto &remote = leo ? scenario.leo : scenario.haps;
        const double r = leo ? capacities.feeder_leo[sel.uav] : capacities.feeder_haps[sel.uav];
        delay += feeder_delay(load.bits + task.bits, r, distance(scenario.uavs[sel.uav].position, remote.position), leo);
    }
    return delay;
}

double &pool_for(DecisionState &state, bool orthogonal, std::size_t u, Destination d) {
    if (orthogonal) return state.orthogonal_pool[u][idx(d)];
    switch (d) {
    case Destination::Local: return state.uav_pool[u];
    case Destination::Haps: return state.haps_pool;
    case Destination::Leo: return state.leo_pool;
    }
    return state.uav_pool[u];
}

}  // namespace

QtcajosaResult qtcajosa(const Scenario &scenario, const CapacityTable &capacities, const QtcajosaOptions &options) {
    QtcajosaResult result;
    result.tau_op = algorithm_runtime(scenario);
    const bool orthogonal = options.variant == Variant::NonAdaptive;
    const DestinationSet allowed = restrict_destinations(options.variant);
    DecisionState &state = result.state;
    state = DecisionState::initial(scenario, options.variant);

    // Every pass commits a task or masks one (task, destination) pair.
    const std::size_t max_iterations = 4 * scenario.num_tasks() + 1;
    while (result.iterations < max_iterations) {
        ++result.iterations;
        const auto shares = orthogonal ? fixed_init(state, scenario) : dynamic_init(state, scenario);

        Selection best;
        best.cost = kInf;
        for (std::size_t u = 0; u < state.uavs.size(); ++u) {
            const auto costs = build_costs(state, shares, scenario, capacities, u, allowed);
            const auto &us = state.uavs[u];
            for (std::size_t l = 0; l < costs.tasks; ++l) {
                if (us.pending[l] == 0) continue;
                for (std::size_t b = 0; b < costs.subchannels; ++b) {
                    for (auto d : kOrder) {
                        const double v = costs.combined(us, l, b, d);
                        if (v < best.cost) best = Selection{u, l, b, d, v, shares.at(u, d, l), false};
                    }
                }
            }
        }
        if (std::isinf(best.cost)) break;

        auto &us = state.uavs[best.uav];
        const auto &task = scenario.tasks[scenario.clusters[best.uav].devices[best.local]];
        double &pool = pool_for(state, orthogonal, best.uav, best.destination);
        if (candidate_delay(scenario, capacities, us, best, best.share, result.tau_op) > task.deadline) {
            best.share = pool;
            best.repaired = true;
            if (candidate_delay(scenario, capacities, us, best, best.share, result.tau_op) > task.deadline) {
                us.blocked[idx(best.destination)][best.local] = 1;
                ++result.rejections;
                continue;
            }
        }

        const std::size_t l = best.local;
        for (std::size_t b = 0; b < us.decision.subchannels; ++b) us.blocked_pair[l * us.decision.subchannels + b] = 1;
        for (std::size_t k = 0; k < us.decision.tasks; ++k) us.blocked_pair[k * us.decision.subchannels + best.subchannel] = 1;
        us.blocked[idx(best.destination)][l] = 1;
        us.pending[l] = 0;
        us.decision.rho_at(l, best.subchannel) = 1;
        if (best.destination == Destination::Haps) us.decision.beta_h[l] = 1;
        if (best.destination == Destination::Leo) us.decision.beta_s[l] = 1;
        pool = std::max(0.0, pool - best.share);
        state.shares[scenario.clusters[best.uav].devices[l]] = best.share;
        result.commits.push_back(best);
        if (options.on_commit) options.on_commit(state, best);
    }

    result.committed = state.allocation();
    result.allocation = finalize_shares(result.committed, scenario, capacities, result.tau_op, &result.flagged);
    return result;
}

QtcajosaResult qtcajosa_nonadaptive(const Scenario &scenario, const CapacityTable &capacities) {
    QtcajosaOptions options;
    options.variant = Variant::NonAdaptive;
    return qtcajosa(scenario, capacities, options);
}

namespace {

struct TaskRef {
    std::size_t uav;
    std::size_t local;
    std::size_t global;
};

}  // namespace

Allocation finalize_shares(const Allocation &committed, const Scenario &scenario, const CapacityTable &capacities,
                           double tau_op, std::vector<std::uint8_t> *flagged) {
    Allocation a = committed;
    std::fill(a.shares.begin(), a.shares.end(), 0.0);
    std::vector<std::uint8_t> short_of_deadline(scenario.num_tasks(), 0);

    auto access_of = [&](const TaskRef &t) {
        return access_delay(scenario.tasks[t.global].bits, a.uavs[t.uav].rho_row(t.local), capacities.access[t.uav].row(t.local));
    };

    // Remote nodes first; tasks they cannot serve in time fall back to their UAV.
    for (auto dest : {Destination::Haps, Destination::Leo}) {
        const bool leo = dest == Destination::Leo;
        const auto &node = leo ? scenario.leo : scenario.haps;
        const auto &rates = leo ? capacities.feeder_leo : capacities.feeder_haps;
        for (std::size_t pass = 0; pass <= scenario.num_tasks(); ++pass) {
            std::vector<TaskRef> refs;
            std::vector<ComputeRequest> req;
            for (std::size_t u = 0; u < a.uavs.size(); ++u) {
                const auto &dec = a.uavs[u];
                const auto load = offload_load(dec, scenario, u, dest);
                const double feeder = feeder_delay(load.bits, rates[u], distance(scenario.uavs[u].position, node.position), leo);
                for (std::size_t l = 0; l < dec.tasks; ++l) {
                    if (!dec.allocated(l) || dec.destination(l) != dest) continue;
                    const TaskRef t{u, l, scenario.clusters[u].devices[l]};
                    const auto &task = scenario.tasks[t.global];
                    refs.push_back(t);
                    req.push_back({t.global, task.cycles(), task.deadline, tau_op + access_of(t) + feeder});
                }
            }
            const auto alloc = allocate_with_minimums(req, node.f_max);
            bool moved = false;
            std::vector<std::size_t> stranded;
            for (std::size_t k = 0; k < refs.size(); ++k) {
                a.shares[refs[k].global] = alloc.shares[k];
                if (!std::binary_search(alloc.infeasible.begin(), alloc.infeasible.end(), refs[k].global)) continue;
                if (scenario.uavs[refs[k].uav].f_max > 0.0) {
                    auto &dec = a.uavs[refs[k].uav];
                    dec.beta_h[refs[k].local] = 0;
                    dec.beta_s[refs[k].local] = 0;
                    a.shares[refs[k].global] = 0.0;
                    moved = true;
                } else {
                    stranded.push_back(k);
                }
            }
            if (moved) continue;
            // No compute at the UAV to fall back on: split the leftover evenly.
            if (!stranded.empty()) {
                const double each = alloc.residual / static_cast<double>(stranded.size());
                for (auto k : stranded) {
                    a.shares[refs[k].global] = each;
                    short_of_deadline[refs[k].global] = 1;
                }
            }
            break;
        }
    }

    for (std::size_t u = 0; u < a.uavs.size(); ++u) {
        const auto &dec = a.uavs[u];
        std::vector<TaskRef> refs;
        std::vector<ComputeRequest> req;
        for (std::size_t l = 0; l < dec.tasks; ++l) {
            if (!dec.allocated(l) || dec.destination(l) != Destination::Local) continue;
            const TaskRef t{u, l, scenario.clusters[u].devices[l]};
            const auto &task = scenario.tasks[t.global];
            refs.push_back(t);
            req.push_back({t.global, task.cycles(), task.deadline, tau_op + access_of(t)});
        }
        if (req.empty()) continue;
        const double pool = scenario.uavs[u].f_max;
        auto alloc = allocate_with_minimums(req, pool);
        if (!alloc.infeasible.empty()) alloc = best_effort_uav(req, pool);
        for (std::size_t k = 0; k < refs.size(); ++k) a.shares[refs[k].global] = alloc.shares[k];
        for (auto task : alloc.infeasible) short_of_deadline[task] = 1;
    }
    if (flagged != nullptr) *flagged = std::move(short_of_deadline);
    return a;
}

}  // namespace ntnmec
