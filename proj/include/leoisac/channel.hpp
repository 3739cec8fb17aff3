// SPDX-License-Identifier: Apache-2.0
//
// leoisac: bistatic LEO integrated sensing and communication toolkit
// Copyright (C) 2026 The leoisac Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef LEOISAC_CHANNEL_HPP
#define LEOISAC_CHANNEL_HPP

#include "leoisac/geometry.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace leoisac
{
    struct RicianParams
    {
        double kappa = 0.0; // Rician factor, linear
        double gamma = 1.0; // average channel power E[|g|^2], linear
    };

    // Downlink channel h = g * a of one single-antenna user
    struct CommChannel
    {
        cdouble g;
        CVec a;           // satellite steering vector at the user's AOD
        double rho = 1.0; // sigma_c^2 / gamma
    };

    enum class RadarStructure
    {
        bistatic,
        monostatic
    };

    // Static positions and RF constants of the radar link
    struct RadarScene
    {
        Vec3 sat = Vec3::Zero();
        Vec3 tar = Vec3::Zero();
        Vec3 rx = Vec3::Zero();
        double g_sat_dbi = 0.0;
        double g_rx_dbi = 0.0;
        double f_c = 1.0;      // Hz
        double rcs_mono = 1.0; // m^2
    };

    // Point-target echo channel H_R = alpha * b(aoa) * a(aod)^H
    struct RadarLink
    {
        cdouble alpha;
        AnglePair aod; // at the satellite
        AnglePair aoa; // at the receiver
        double r_tx = 0, r_rx = 0, r_los = 0; // meters
        double beta = 0;                      // bistatic angle, radians
    };

    // Free-space average channel power G_sat G_ut (c / (4 pi f_c d))^2
    double avg_channel_power(double g_sat_dbi, double g_ut_dbi, double f_c, double d);

    // One draw of the Rician coefficient: real and imaginary parts i.i.d.
    // N(sqrt(kappa gamma / (2 (kappa + 1))), gamma / (2 (kappa + 1)))
    cdouble draw_rician_gain(const RicianParams &params, std::mt19937_64 &rng);

    CommChannel sample_comm_channel(const RicianParams &params, const AnglePair &aod, const UpaSpec &upa,
                                    double noise_power, std::uint64_t seed);

    // |alpha|^2 from the radar equation; the bistatic RCS is rcs_mono * cos(beta / 2)
    double reflection_power(const RadarScene &scene, RadarStructure structure);

    // k_B * B * T
    double noise_power(double bandwidth_hz, double temp_k);

    RadarLink make_radar_link(const RadarScene &scene, double alpha_phase = 0.0);

    struct PathLossPoint
    {
        double altitude_m = 0;
        double loss_db = 0; // -10 log10 |alpha|^2
    };

    // Echo path loss of a target at (x, y) of `scene.tar` for each altitude
    std::vector<PathLossPoint> echo_path_loss_curve(const RadarScene &scene, const std::vector<double> &altitudes_m,
                                                    RadarStructure structure);
}

#endif
