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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ntnmec/scenario.hpp"

namespace ntnmec {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// IoMT device to UAV link on one subchannel.
struct A2GChannel {
    double pathloss_db = 0.0;      // L_{i,u}
    double rician_k = 0.0;         // linear K
    ComplexVector channel_vector;  // h = sqrt(1/L) * small-scale vector
    double elevation_deg = 0.0;

    /// ||h||^2, the post-MRC power gain.
    double power_gain() const;
};

/// Rank-1 line-of-sight link between a UAV feeder array and a HAPS/LEO array.
struct FeederChannel {
    Complex amplitude;           // lambda g(theta) sqrt(G) / (4 pi d), with carrier phase
    ComplexVector aoa_steering;  // at the remote node, N_k entries
    ComplexVector aod_steering;  // at the UAV, N_u^UPA entries
    double singular_value = 0.0;
    double off_boresight_rad = 0.0;
    double distance = 0.0;
};

/// Realized link capacities, bit/s.
struct CapacityTable {
    struct Access {
        std::size_t rows = 0;  // I_u
        std::size_t cols = 0;  // B
        std::vector<double> rate;

        double at(std::size_t local, std::size_t subchannel) const { return rate[local * cols + subchannel]; }
        std::span<const double> row(std::size_t local) const { return {rate.data() + local * cols, cols}; }
    };

    std::vector<Access> access;       // per UAV
    std::vector<double> feeder_haps;  // R_{u,h}
    std::vector<double> feeder_leo;   // R_{u,s}
};

double wavelength(double carrier_hz);
double free_space_pathloss_db(double distance, double carrier_hz);

/// Elevation of `upper` seen from `lower`, in degrees.
double elevation_deg(const Position &lower, const Position &upper);

/// Elevation-dependent LoS probability model for air-to-ground links.
/// Throws std::invalid_argument for coincident positions.
double a2g_pathloss_db(const Position &device, const Position &uav, Environment env, double carrier_hz);

/// K(theta) = k_min exp(ln(k_max / k_min) (2 theta / pi)^2), theta in radians.
/// Throws std::invalid_argument outside [0, 90] degrees.
double rician_k_factor(double elevation_deg, double k_min, double k_max);

/// Half-wavelength ULA along the x axis; `direction` need not be normalized.
ComplexVector ula_steering(std::size_t n, const Position &direction);

/// Half-wavelength UPA in the xy plane, Kronecker product of the axis vectors.
ComplexVector upa_steering(std::size_t n, const Position &direction);

/// Split of n elements into (rows, cols) with rows <= cols as square as possible.
std::pair<std::size_t, std::size_t> upa_shape(std::size_t n);

/// sqrt(K/(K+1)) a + sqrt(1/(K+1)) w with w ~ CN(0, I). K = +inf gives a.
ComplexVector rician_small_scale(double k_factor, const ComplexVector &los, Rng &rng);

struct A2GParams {
    Environment environment = Environment::Suburban;
    double k_min = 1.0;
    double k_max = 31.622776601683793;
    double carrier_hz = 2.1e9;
    std::size_t n_antennas = 8;
};

A2GChannel sample_a2g(const Position &device, const Position &uav, const A2GParams &params, Rng &rng);

/// bandwidth * log2(1 + snr)
double shannon_capacity(double bandwidth, double snr);

/// R = B log2(1 + ||h||^2 p / (B N_0))
double access_capacity(const A2GChannel &channel, double tx_power, double bandwidth, double noise_psd);

/// Solve |2 J1(x) / x| = 1/sqrt(2) for the -3 dB point of the Bessel pattern.
double bessel_half_power_argument();

/// Aperture constant k_a such that the Bessel pattern is -3 dB at the given
/// half-beamwidth.
double bessel_aperture_constant(double half_beamwidth_rad);

/// Normalized element amplitude pattern g_k(theta): cos^q for HAPS, Bessel
/// for LEO. Returns 0 outside the pattern's angular range.
double element_gain(Role role, double theta, const ChannelModel &model);

/// Off-boresight angle at a downward-facing array located at `remote`.
double off_boresight_angle(const Position &remote, const Position &uav);

FeederChannel feeder_channel(const NodeConfig &uav, const NodeConfig &remote, double carrier_hz, double atm_loss,
                             const ChannelModel &model);

/// R_{u,k} = B_k log2(1 + p sigma^2 / (B_k N_0))
double feeder_capacity(const FeederChannel &channel, double tx_power, double bandwidth, double noise_psd);

/// One access draw per (device, subchannel) and one feeder link per
/// (UAV, remote). UAV u draws from its own stream derived from `seed`.
CapacityTable build_capacity_table(const Scenario &scenario, std::uint64_t seed);

}  // namespace ntnmec
