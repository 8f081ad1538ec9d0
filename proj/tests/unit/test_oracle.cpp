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


#include <cmath>

#include "doctest.h"

#include "ntnmec/delay.hpp"
#include "ntnmec/oracle.hpp"
#include "ntnmec/qtcajosa.hpp"
#include "support.hpp"

using namespace ntnmec;

namespace {

Scenario three_tasks() {
    return testing::single_uav({{10, 0, 0}, {0, 10, 0}, {5, 5, 0}},
                               {Task{0, 1e6, 100, 30}, Task{0, 2e6, 100, 30}, Task{0, 3e6, 100, 30}}, 3);
}

/// Tiny generated instance: one UAV, I tasks and B subchannels.
Scenario tiny(std::uint64_t seed, std::size_t tasks, int subchannels) {
    auto s = testing::generated(seed, 1, tasks, subchannels, 500.0);
    for (auto &t : s.tasks) t.deadline = 0.5 + static_cast<double>(seed % 4);
    return s;
}

}  // namespace

TEST_SUITE("oracle") {
    TEST_CASE("empty allocation passes vacuously") {
        const auto s = three_tasks();
        const auto caps = testing::uniform_capacities(s, 1e6, 1e7, 1e7);
        const auto r = check_constraints(Allocation::empty(s), s, caps);
        CHECK(r.ok());
        CHECK(r.summary().find("violated") == std::string::npos);
    }

    TEST_CASE("two tasks on one subchannel violate C4") {
        const auto s = three_tasks();
        const auto caps = testing::uniform_capacities(s, 1e6, 1e7, 1e7);
        auto a = Allocation::empty(s);
        a.uavs[0].rho_at(0, 2) = 1;
        a.uavs[0].rho_at(1, 2) = 1;
        a.shares = {1e8, 1e8, 0};
        const auto r = check_constraints(a, s, caps);
        CHECK_FALSE(r[4].ok);
        REQUIRE(r[4].violations.size() == 1);
        CHECK(r[4].violations[0] == "uav 0 subchannel 2: tasks 0 1");
        CHECK(r[3].ok);
    }

    TEST_CASE("offloading without a subchannel violates C5") {
        const auto s = three_tasks();
        const auto caps = testing::uniform_capacities(s, 1e6, 1e7, 1e7);
        auto a = Allocation::empty(s);
        a.uavs[0].beta_s[1] = 1;
        const auto r = check_constraints(a, s, caps);
        CHECK_FALSE(r[5].ok);
        CHECK(r.structural_ok() == false);
    }

    TEST_CASE("each constraint reports its own violation") {
        const auto s = three_tasks();
        const auto caps = testing::uniform_capacities(s, 1e6, 1e7, 1e7);
        auto base = Allocation::empty(s);
        base.uavs[0].rho_at(0, 0) = 1;
        base.shares[0] = 1e8;
        CHECK(check_constraints(base, s, caps).ok());

        auto two_rows = base;
        two_rows.uavs[0].rho_at(0, 1) = 1;
        CHECK_FALSE(check_constraints(two_rows, s, caps)[3].ok);

        auto over = base;
        over.shares[0] = 2 * s.uavs[0].f_max;
        CHECK_FALSE(check_constraints(over, s, caps)[2].ok);

        auto bad_beta = base;
        bad_beta.uavs[0].beta_h[0] = 2;
        CHECK_FALSE(check_constraints(bad_beta, s, caps)[6].ok);

        auto bad_rho = base;
        bad_rho.uavs[0].rho_at(0, 0) = 3;
        CHECK_FALSE(check_constraints(bad_rho, s, caps)[7].ok);

        auto negative = base;
        negative.shares[1] = -1.0;
        CHECK_FALSE(check_constraints(negative, s, caps)[8].ok);

        auto late = base;
        late.shares[0] = 1e6;  // 100 s of compute against a 30 s deadline
        const auto r = check_constraints(late, s, caps);
        CHECK_FALSE(r[1].ok);
        CHECK(r.structural_ok());
        CheckOptions exempt;
        exempt.exempt = {1, 0, 0};
        CHECK(check_constraints(late, s, caps, exempt).ok());

        auto wrong_shape = base;
        wrong_shape.shares.pop_back();
        CHECK_THROWS_AS(check_constraints(wrong_shape, s, caps), std::invalid_argument);
    }

    TEST_CASE("reference delays agree with the delay module") {
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const auto s = testing::generated(seed, 3, 6, 6, 4000.0);
            const auto caps = build_capacity_table(s, seed);
            const auto r = qtcajosa(s, caps);
            const auto ref = reference_delays(r.allocation, s, caps, r.tau_op);
            const auto w = weighted_sum_delay(r.allocation, s, caps, r.tau_op);
            for (std::size_t i = 0; i < s.num_tasks(); ++i) {
                if (std::isinf(ref[i])) {
                    CHECK(std::isinf(w.per_task[i].total));
                } else {
                    CHECK(testing::relative_error(ref[i], w.per_task[i].total) < 1e-12);
                }
            }
        }
    }

    TEST_CASE("single task: optimum over subchannels and destinations") {
        const auto s = testing::single_uav({{40, 30, 0}}, {Task{0, 3e6, 200, 10}}, 3);
        auto caps = testing::uniform_capacities(s, 0.0, 4e7, 9e7);
        caps.access[0].rate = {2e6, 5e6, 3e6};
        const double tau_op = 0.02;
        CHECK(search_space_size(s) == 1.0 + 3.0 * 3.0);
        const auto o = exhaustive_search(s, caps, tau_op);

        const auto &t = s.tasks[0];
        const double access = t.bits / 5e6;
        const double local = tau_op + access + t.cycles() / s.uavs[0].f_max;
        const double haps = tau_op + access + t.bits / 4e7 + t.cycles() / s.haps.f_max;
        const double leo = tau_op + access + t.bits / 9e7 + 2.0 * distance(s.uavs[0].position, s.leo.position) / kSpeedOfLight +
                           t.cycles() / s.leo.f_max;
        const double best = std::min({local, haps, leo}) / t.deadline;
        CHECK(o.best_objective == doctest::Approx(best).epsilon(1e-12));
        CHECK(o.relaxed_unallocated == 0);
        CHECK(o.relaxed_objective == doctest::Approx(best).epsilon(1e-12));
        CHECK(o.best_allocation.uavs[0].rho_at(0, 1) == 1);

        const auto g = qtcajosa(s, caps);
        const auto w = weighted_sum_delay(g.allocation, s, caps, g.tau_op);
        CHECK(w.hat_tau == doctest::Approx(exhaustive_search(s, caps, g.tau_op).best_objective).epsilon(1e-12));
    }

    TEST_CASE("instances beyond the limits are refused with a size") {
        const auto s = testing::generated(1, 1, 6, 3);
        const auto caps = build_capacity_table(s, 1);
        CHECK_THROWS_WITH_AS(exhaustive_search(s, caps, 0.0), doctest::Contains("6 tasks"), InstanceTooLarge);
        OracleLimits tight;
        tight.max_points = 10;
        const auto small = testing::generated(1, 1, 3, 3);
        CHECK_THROWS_AS(exhaustive_search(small, build_capacity_table(small, 1), 0.0, {}, tight), InstanceTooLarge);
    }

    TEST_CASE("oracle optimum is consistent and dominates the greedy search") {
        std::size_t optimal_points = 0;
        for (std::uint64_t seed = 1; seed <= 40; ++seed) {
            const auto s = tiny(seed, 1 + seed % 4, 1 + static_cast<int>(seed % 3));
            const auto caps = build_capacity_table(s, seed);
            const auto g = qtcajosa(s, caps);
            const auto o = exhaustive_search(s, caps, g.tau_op);
            const auto w = weighted_sum_delay(g.allocation, s, caps, g.tau_op);
            if (std::isfinite(o.best_objective)) {
                ++optimal_points;
                CheckOptions c;
                c.tau_op = g.tau_op;
                CHECK(check_constraints(o.best_allocation, s, caps, c).ok());
                const bool greedy_complete = w.unallocated == 0;
                if (greedy_complete) CHECK(w.hat_tau >= o.best_objective * (1.0 - 1e-9));
            }
            CheckOptions relaxed;
            relaxed.tau_op = g.tau_op;
            CHECK(check_constraints(o.relaxed_allocation, s, caps, relaxed).structural_ok());
            // Lexicographic: never more unallocated tasks than the greedy, and no
            // smaller objective at an equal count.
            CHECK(o.relaxed_unallocated <= w.unallocated);
            if (o.relaxed_unallocated == w.unallocated) CHECK(w.hat_tau >= o.relaxed_objective * (1.0 - 1e-9));
        }
        CHECK(optimal_points > 10);
    }

    TEST_CASE("the full destination set dominates each restriction") {
        for (std::uint64_t seed = 100; seed < 130; ++seed) {
            const auto s = tiny(seed, 1 + seed % 4, 1 + static_cast<int>(seed % 3));
            const auto caps = build_capacity_table(s, seed);
            const double tau_op = algorithm_runtime(s);
            const auto all = exhaustive_search(s, caps, tau_op);
            for (auto v : {Variant::NoLeo, Variant::NoHaps}) {
                const auto restricted = exhaustive_search(s, caps, tau_op, restrict_destinations(v));
                CHECK(search_space_size(s, restrict_destinations(v)) <= all.search_space_size);
                CHECK(all.best_objective <= restricted.best_objective);
                CHECK(all.relaxed_unallocated <= restricted.relaxed_unallocated);
                if (all.relaxed_unallocated == restricted.relaxed_unallocated)
                    CHECK(all.relaxed_objective <= restricted.relaxed_objective);
            }
        }
    }
}
