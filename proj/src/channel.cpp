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

#include "ntnmec/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ntnmec {

double A2GChannel::power_gain() const {
    return std::accumulate(channel_vector.begin(), channel_vector.end(), 0.0,
                           [](double acc, const Complex &v) { return acc + std::norm(v); });
}

double wavelength(double carrier_hz) { return kSpeedOfLight / carrier_hz; }

double free_space_pathloss_db(double distance, double carrier_hz) {
    return 20.0 * std::log10(4.0 * kPi * distance * carrier_hz / kSpeedOfLight);
}

double elevation_deg(const Position &lower, const Position &upper) {
    const double rise = upper.z - lower.z;
    const double ground = horizontal_distance(lower, upper);
    return std::atan2(rise, ground) * 180.0 / kPi;
}

double a2g_pathloss_db(const Position &device, const Position &uav, Environment env, double carrier_hz) {
    const double d = distance(device, uav);
    if (!(d > 0.0)) throw std::invalid_argument("a2g_pathloss_db: device and UAV positions coincide");
    const auto p = environment_params(env);
    const double theta = elevation_deg(device, uav);
    const double p_los = 1.0 / (1.0 + p.a * std::exp(-p.b * (theta - p.a)));
    return free_space_pathloss_db(d, carrier_hz) + p_los * p.eta_los_db + (1.0 - p_los) * p.eta_nlos_db;
}

double rician_k_factor(double elevation_deg, double k_min, double k_max) {
    if (!(elevation_deg >= 0.0 && elevation_deg <= 90.0))
        throw std::invalid_argument("rician_k_factor: elevation must lie in [0, 90] degrees");
    const double theta = elevation_deg * kPi / 180.0;
    const double x = 2.0 * theta / kPi;
    return k_min * std::exp(std::log(k_max / k_min) * x * x);
}

namespace {

Position normalized(const Position &d) {
    const double n = std::hypot(d.x, d.y, d.z);
    if (!(n > 0.0)) return {0.0, 0.0, 0.0};
    return {d.x / n, d.y / n, d.z / n};
}

ComplexVector axis_vector(std::size_t n, double cosine) {
    ComplexVector v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = std::polar(1.0, kPi * static_cast<double>(k) * cosine);
    return v;
}

}  // namespace

ComplexVector ula_steering(std::size_t n, const Position &direction) {
    return axis_vector(n, normalized(direction).x);
}

std::pair<std::size_t, std::size_t> upa_shape(std::size_t n) {
    std::size_t rows = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
    while (rows > 1 && n % rows != 0) --rows;
    if (rows == 0) rows = 1;
    return {rows, n / rows};
}

ComplexVector upa_steering(std::size_t n, const Position &direction) {
    const auto [rows, cols] = upa_shape(n);
    const auto u = normalized(direction);
    const auto ax = axis_vector(rows, u.x);
    const auto ay = axis_vector(cols, u.y);
    ComplexVector v;
    v.reserve(n);
    for (const auto &x : ax)
        for (const auto &y : ay) v.push_back(x * y);
    return v;
}

ComplexVector rician_small_scale(double k_factor, const ComplexVector &los, Rng &rng) {
    if (std::isinf(k_factor)) return los;
    const double los_weight = std::sqrt(k_factor / (k_factor + 1.0));
    const double nlos_weight = std::sqrt(1.0 / (k_factor + 1.0));
    // CN(0, 1): real and imaginary parts each carry variance 1/2.
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    ComplexVector h(los.size());
    for (std::size_t k = 0; k < los.size(); ++k) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        h[k] = los_weight * los[k] + nlos_weight * Complex(re, im);
    }
    return h;
}

A2GChannel sample_a2g(const Position &device, const Position &uav, const A2GParams &params, Rng &rng) {
    A2GChannel ch;
    ch.pathloss_db = a2g_pathloss_db(device, uav, params.environment, params.carrier_hz);
    ch.elevation_deg = std::clamp(elevation_deg(device, uav), 0.0, 90.0);
    ch.rician_k = rician_k_factor(ch.elevation_deg, params.k_min, params.k_max);
    const Position arrival{device.x - uav.x, device.y - uav.y, device.z - uav.z};
    auto h = rician_small_scale(ch.rician_k, ula_steering(params.n_antennas, arrival), rng);
    const double scale = std::pow(10.0, -ch.pathloss_db / 20.0);
    for (auto &v : h) v *= scale;
    ch.channel_vector = std::move(h);
    return ch;
}

double shannon_capacity(double bandwidth, double snr) {
    return bandwidth * std::log1p(snr) / std::log(2.0);
}

double access_capacity(const A2GChannel &channel, double tx_power, double bandwidth, double noise_psd) {
    return shannon_capacity(bandwidth, channel.power_gain() * tx_power / (bandwidth * noise_psd));
}

double bessel_half_power_argument() {
    static const double root = [] {
        const double target = 1.0 / std::sqrt(2.0);
        double lo = 0.5;  // pattern above target
        double hi = 3.0;  // pattern below target
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double g = 2.0 * std::cyl_bessel_j(1.0, mid) / mid;
            (g > target ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }();
    return root;
}

double bessel_aperture_constant(double half_beamwidth_rad) {
    return bessel_half_power_argument() / std::sin(half_beamwidth_rad);
}

double element_gain(Role role, double theta, const ChannelModel &model) {
    const double a = std::abs(theta);
    switch (role) {
    case Role::HAPS:
        if (a >= kPi / 2.0) return 0.0;
        return std::pow(std::cos(a), model.haps_cos_exponent);
    case Role::LEO: {
        if (a > kPi / 2.0) return 0.0;
        const double x = bessel_aperture_constant(model.leo_half_beamwidth_deg * kPi / 180.0) * std::sin(a);
        if (x < 1e-12) return 1.0;
        return std::abs(2.0 * std::cyl_bessel_j(1.0, x) / x);
    }
    case Role::IoMT:
    case Role::UAV: break;
    }
    throw std::invalid_argument("element_gain: only HAPS and LEO carry a radiation pattern");
}

double off_boresight_angle(const Position &remote, const Position &uav) {
    const double d = distance(remote, uav);
    if (!(d > 0.0)) return 0.0;
    // Boresight points straight down (-z).
    return std::acos(std::clamp((remote.z - uav.z) / d, -1.0, 1.0));
}

FeederChannel feeder_channel(const NodeConfig &uav, const NodeConfig &remote, double carrier_hz, double atm_loss,
                             const ChannelModel &model) {
    if (remote.role != Role::HAPS && remote.role != Role::LEO)
        throw std::invalid_argument("feeder_channel: remote node must be a HAPS or a LEO satellite");
    FeederChannel ch;
    ch.distance = distance(uav.position, remote.position);
    if (!(ch.distance > 0.0)) throw std::invalid_argument("feeder_channel: UAV and remote node coincide");
    ch.off_boresight_rad = off_boresight_angle(remote.position, uav.position);
    const double lambda = wavelength(carrier_hz);
    const double g = element_gain(remote.role, ch.off_boresight_rad, model);
    const double magnitude = lambda * g * std::sqrt(atm_loss) / (4.0 * kPi * ch.distance);
    ch.amplitude = std::polar(magnitude, -2.0 * kPi * std::fmod(ch.distance / lambda, 1.0));

    const Position to_uav{uav.position.x - remote.position.x, uav.position.y - remote.position.y,
                          uav.position.z - remote.position.z};
    const Position to_remote{-to_uav.x, -to_uav.y, -to_uav.z};
    ch.aoa_steering = upa_steering(static_cast<std::size_t>(remote.n_antennas_upa), to_uav);
    ch.aod_steering = upa_steering(static_cast<std::size_t>(uav.n_antennas_upa), to_remote);
    ch.singular_value =
        magnitude * std::sqrt(static_cast<double>(remote.n_antennas_upa) * static_cast<double>(uav.n_antennas_upa));
    return ch;
}

double feeder_capacity(const FeederChannel &channel, double tx_power, double bandwidth, double noise_psd) {
    const double s = channel.singular_value;
    return shannon_capacity(bandwidth, tx_power * s * s / (bandwidth * noise_psd));
}

CapacityTable build_capacity_table(const Scenario &scenario, std::uint64_t seed) {
    const auto &m = scenario.model;
    const auto subchannels = static_cast<std::size_t>(m.bands.subchannels);
    CapacityTable table;
    table.access.resize(scenario.num_uavs());
    table.feeder_haps.resize(scenario.num_uavs());
    table.feeder_leo.resize(scenario.num_uavs());

    A2GParams params;
    params.environment = m.channel.environment;
    params.k_min = m.channel.k_min;
    params.k_max = m.channel.k_max;
    params.carrier_hz = m.bands.access_carrier;

    for (std::size_t u = 0; u < scenario.num_uavs(); ++u) {
        const auto &uav = scenario.uavs[u];
        const auto &members = scenario.clusters[u].devices;
        params.n_antennas = static_cast<std::size_t>(uav.n_antennas_ula);
        Rng rng(derive_seed(seed, streams::kAccessFading + u));

        auto &acc = table.access[u];
        acc.rows = members.size();
        acc.cols = subchannels;
        acc.rate.assign(acc.rows * acc.cols, 0.0);
        for (std::size_t l = 0; l < members.size(); ++l) {
            const auto &dev = scenario.devices[members[l]];
            for (std::size_t b = 0; b < subchannels; ++b) {
                const auto ch = sample_a2g(dev.position, uav.position, params, rng);
                acc.rate[l * subchannels + b] = access_capacity(ch, dev.tx_power, m.bands.access_bandwidth, m.noise_psd);
            }
        }

        const auto haps = feeder_channel(uav, scenario.haps, m.bands.feeder_carrier, m.atm_loss, m.channel);
        const auto leo = feeder_channel(uav, scenario.leo, m.bands.feeder_carrier, m.atm_loss, m.channel);
        table.feeder_haps[u] = feeder_capacity(haps, uav.tx_power, m.bands.haps_bandwidth, m.noise_psd);
        table.feeder_leo[u] = feeder_capacity(leo, uav.tx_power, m.bands.leo_bandwidth, m.noise_psd);
    }
    return table;
}

}  // namespace ntnmec
