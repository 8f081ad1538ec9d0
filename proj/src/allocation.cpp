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

#include "ntnmec/allocation.hpp"

namespace ntnmec {

std::string_view to_string(Destination d) {
    switch (d) {
    case Destination::Local: return "local";
    case Destination::Haps: return "HAPS";
    case Destination::Leo: return "LEO";
    }
    return "?";
}

std::optional<std::size_t> UavDecision::subchannel_of(std::size_t l) const {
    for (std::size_t b = 0; b < subchannels; ++b)
        if (rho_at(l, b) != 0) return b;
    return std::nullopt;
}

Destination UavDecision::destination(std::size_t l) const {
    if (beta_h[l] != 0) return Destination::Haps;
    if (beta_s[l] != 0) return Destination::Leo;
    return Destination::Local;
}

Allocation Allocation::empty(const Scenario &scenario) {
    Allocation a;
    const auto b = static_cast<std::size_t>(scenario.bands().subchannels);
    for (const auto &c : scenario.clusters) a.uavs.emplace_back(c.devices.size(), b);
    a.shares.assign(scenario.num_tasks(), 0.0);
    return a;
}

}  // namespace ntnmec
