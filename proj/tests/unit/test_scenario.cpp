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
#include <set>
#include <string>

#include "doctest.h"
#include "json.hpp"

#include "ntnmec/scenario.hpp"
#include "support.hpp"

using namespace ntnmec;
using nlohmann::json;

namespace {

json explicit_doc() {
    return json::parse(R"({
      "clusters": [{"uav": 0, "devices": [0, 1]}, {"uav": 1, "devices": [2]}],
      "nodes": {
        "IoMT": {"positions": [[10, 0], [0, 10], [500, 0]]},
        "UAV": {"positions": [[0, 0, 120], [500, 0, 120]]}
      },
      "tasks": [
        {"bits": 1e6, "density": 100, "deadline": 30},
        {"bits": 2e6, "density": 100, "deadline": 30},
        {"bits": 3e6, "density": 100, "deadline": 30}
      ]
    })");
}

}  // namespace

TEST_SUITE("scenario") {
    TEST_CASE("bands are taken from the document") {
        const auto s = load_scenario(R"({"bands": {"access_bandwidth": 1.4e6, "subchannels": 14},
                                        "generator": {"uavs": 2, "devices_per_cluster": 3}})");
        CHECK(s.bands().access_bandwidth == 1.4e6);
        CHECK(s.bands().subchannels == 14);
        CHECK(s.num_tasks() == 6);
    }

    TEST_CASE("noise density defaults to thermal noise plus a 7 dB figure") {
        const auto s = load_scenario(R"({"generator": {"uavs": 1, "devices_per_cluster": 1}})");
        // -174 dBm/Hz + 7 dB = -167 dBm/Hz = 10^(-19.7) W/Hz
        CHECK(s.model.noise_psd == doctest::Approx(std::pow(10.0, -19.7)).epsilon(1e-12));
    }

    TEST_CASE("explicit geometry round-trips") {
        const auto s = parse_config(explicit_doc()).instantiate();
        REQUIRE(s.num_uavs() == 2);
        CHECK(s.clusters[0].devices == std::vector<std::size_t>{0, 1});
        CHECK(s.devices[2].position == Position{500, 0, 0});
        CHECK(s.tasks[1].bits == 2e6);
    }

    TEST_CASE("a device listed in two clusters is rejected") {
        auto doc = explicit_doc();
        doc["clusters"][1]["devices"] = json::array({1, 2});
        CHECK_THROWS_WITH_AS(parse_config(doc), doctest::Contains("clusters[1].devices"), ConfigError);
    }

    TEST_CASE("unknown keys name their path") {
        auto doc = explicit_doc();
        doc["nodes"]["HAPS"]["f_maxx"] = 1;
        CHECK_THROWS_WITH_AS(parse_config(doc), doctest::Contains("nodes.HAPS.f_maxx"), ConfigError);
    }

    TEST_CASE("invalid task fields are rejected") {
        auto doc = explicit_doc();
        doc["tasks"][0]["deadline"] = 0;
        CHECK_THROWS_AS(parse_config(doc), ConfigError);
        CHECK_THROWS_AS(parse_config_text("{not json"), ConfigError);
        CHECK_THROWS_AS(load_scenario(R"({"generator": {"d_max": -1}})"), ConfigError);
        CHECK_THROWS_AS(load_scenario(R"({"bands": {"subchannels": 0}, "generator": {}})"), ConfigError);
    }

    TEST_CASE("generated altitudes follow the model defaults") {
        const auto s = testing::generated(3, 4, 10, 14);
        CHECK(s.haps.position.z == 20e3);
        CHECK(s.leo.position.z == 500e3);
        CHECK(s.haps.position.x == 0.0);
        CHECK(s.leo.position.y == 0.0);
        for (const auto &u : s.uavs) CHECK(u.position.z == 120.0);
        for (const auto &d : s.devices) CHECK(d.position.z == 0.0);
    }

    TEST_CASE("generation is deterministic in the seed") {
        CHECK(testing::generated(11, 4, 10, 14) == testing::generated(11, 4, 10, 14));
        CHECK_FALSE(testing::generated(11, 4, 10, 14) == testing::generated(12, 4, 10, 14));
    }

    TEST_CASE("clusters partition the devices and sizes stay in range") {
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const auto s = testing::generated(seed, 4, 10, 14, 5000.0);
            std::set<std::size_t> seen;
            std::size_t total = 0;
            for (const auto &c : s.clusters) {
                CHECK(c.devices.size() == 10);
                total += c.devices.size();
                seen.insert(c.devices.begin(), c.devices.end());
            }
            CHECK(total == s.num_tasks());
            CHECK(seen.size() == s.num_tasks());
            for (const auto &t : s.tasks) {
                CHECK(t.bits >= 1e5);
                CHECK(t.bits <= 1e7);
            }
            for (const auto &d : s.devices) CHECK(std::hypot(d.position.x, d.position.y) <= 5000.0);
        }
    }

    TEST_CASE("devices join their nearest cluster center") {
        const auto s = testing::generated(5, 3, 6, 4, 2000.0);
        for (std::size_t u = 0; u < s.num_uavs(); ++u) {
            for (auto d : s.clusters[u].devices) {
                const auto &p = s.devices[d].position;
                // Default centers sit evenly on a circle of radius d_max / 2.
                auto center_distance = [&](std::size_t k) {
                    const double a = 2.0 * kPi * (static_cast<double>(k) + 0.5) / 3.0;
                    return std::hypot(p.x - 1000.0 * std::cos(a), p.y - 1000.0 * std::sin(a));
                };
                for (std::size_t k = 0; k < 3; ++k) CHECK(center_distance(u) <= center_distance(k) + 1e-9);
            }
        }
    }

    TEST_CASE("overrides create nested objects and parse JSON values") {
        json doc = json::object();
        apply_override(doc, "nodes.LEO.f_max", "5e9");
        apply_override(doc, "defaults.environment", "urban");
        CHECK(doc["nodes"]["LEO"]["f_max"].get<double>() == 5e9);
        CHECK(doc["defaults"]["environment"] == "urban");
        json arr = json::parse(R"({"a": [1, 2]})");
        apply_override(arr, "a.1", "7");
        CHECK(arr["a"][1] == 7);
        CHECK_THROWS_AS(apply_override(arr, "a.5", "1"), ConfigError);
        CHECK_THROWS_AS(apply_override(arr, "a..b", "1"), ConfigError);
    }

    TEST_CASE("the run seed drives geometry and tasks") {
        const auto cfg = parse_config_text(R"({"seed": 4, "generator": {"uavs": 2, "devices_per_cluster": 3}})");
        CHECK(cfg.instantiate() == cfg.instantiate(4));
        CHECK_FALSE(cfg.instantiate(4) == cfg.instantiate(5));
    }
}
