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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ntnmec/scenario.hpp"

namespace ntnmec {

/// Where an offloaded task is computed.
enum class Destination : std::uint8_t { Local = 0, Haps = 1, Leo = 2 };

inline constexpr std::size_t kDestinations = 3;

std::string_view to_string(Destination d);

/// Subchannel and offloading decisions of one UAV, in cluster-local indices.
struct UavDecision {
    std::size_t tasks = 0;
    std::size_t subchannels = 0;
    std::vector<std::uint8_t> rho;     // tasks x subchannels, row-major
    std::vector<std::uint8_t> beta_h;  // per task
    std::vector<std::uint8_t> beta_s;  // per task

    UavDecision() = default;
    UavDecision(std::size_t n_tasks, std::size_t n_subchannels)
        : tasks(n_tasks), subchannels(n_subchannels), rho(n_tasks * n_subchannels, 0), beta_h(n_tasks, 0),
          beta_s(n_tasks, 0) {}

    std::uint8_t &rho_at(std::size_t l, std::size_t b) { return rho[l * subchannels + b]; }
    std::uint8_t rho_at(std::size_t l, std::size_t b) const { return rho[l * subchannels + b]; }
    std::span<const std::uint8_t> rho_row(std::size_t l) const { return {rho.data() + l * subchannels, subchannels}; }

    /// First assigned subchannel of task l, if any.
    std::optional<std::size_t> subchannel_of(std::size_t l) const;
    bool allocated(std::size_t l) const { return subchannel_of(l).has_value(); }
    Destination destination(std::size_t l) const;

    friend bool operator==(const UavDecision &, const UavDecision &) = default;
};

/// Complete decision {rho, beta, f}. A task computes at exactly one node, so
/// its share is stored once, indexed by global task id.
struct Allocation {
    std::vector<UavDecision> uavs;
    std::vector<double> shares;

    static Allocation empty(const Scenario &scenario);

    friend bool operator==(const Allocation &, const Allocation &) = default;
};

}  // namespace ntnmec
