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

#include "leoisac/channel.hpp"

#include <cmath>

namespace leoisac
{
    double avg_channel_power(double g_sat_dbi, double g_ut_dbi, double f_c, double d)
    {
        if (!(d > 0.0) || !(f_c > 0.0))
            throw std::invalid_argument("avg_channel_power: distance and frequency must be positive");
        const double fs = kSpeedOfLight / (4.0 * kPi * f_c * d);
        return db_to_linear(g_sat_dbi) * db_to_linear(g_ut_dbi) * fs * fs;
    }

    cdouble draw_rician_gain(const RicianParams &params, std::mt19937_64 &rng)
    {
        if (params.kappa < 0.0 || !(params.gamma > 0.0))
            throw std::invalid_argument("draw_rician_gain: kappa >= 0 and gamma > 0 required");
        const double k1 = params.kappa + 1.0;
        const double mean = std::sqrt(params.kappa * params.gamma / (2.0 * k1));
        const double sd = std::sqrt(params.gamma / (2.0 * k1));
        std::normal_distribution<double> n01(0.0, 1.0);
        const double re = mean + sd * n01(rng);
        const double im = mean + sd * n01(rng);
        return {re, im};
    }

    CommChannel sample_comm_channel(const RicianParams &params, const AnglePair &aod, const UpaSpec &upa,
                                    double noise_power, std::uint64_t seed)
    {
        if (!(noise_power > 0.0))
            throw std::invalid_argument("sample_comm_channel: noise power must be positive");
        std::mt19937_64 rng(seed);
        return {draw_rician_gain(params, rng), steering_vector(upa, aod), noise_power / params.gamma};
    }

    double reflection_power(const RadarScene &scene, RadarStructure structure)
    {
        const double r_tx = (scene.tar - scene.sat).norm();
        const double r_rx = (scene.tar - scene.rx).norm();
        if (!(r_tx > 0.0) || !(r_rx > 0.0))
            throw GeometryError("reflection_power: zero distance");

        const double gains = db_to_linear(scene.g_sat_dbi) * db_to_linear(scene.g_rx_dbi);
        const double c2 = kSpeedOfLight * kSpeedOfLight;
        const double fourpi3 = std::pow(4.0 * kPi, 3);
        const double f2 = scene.f_c * scene.f_c;

        if (structure == RadarStructure::monostatic)
            return gains * c2 * scene.rcs_mono / (fourpi3 * std::pow(r_tx, 4) * f2);

        const double beta = bistatic_angle(scene.sat, scene.tar, scene.rx);
        const double rcs_bi = scene.rcs_mono * std::cos(beta / 2.0);
        return gains * c2 * rcs_bi / (fourpi3 * r_tx * r_tx * r_rx * r_rx * f2);
    }

    double noise_power(double bandwidth_hz, double temp_k)
    {
        if (bandwidth_hz < 0.0 || temp_k < 0.0)
            throw std::invalid_argument("noise_power: negative bandwidth or temperature");
        return kBoltzmann * bandwidth_hz * temp_k;
    }

    RadarLink make_radar_link(const RadarScene &scene, double alpha_phase)
    {
        RadarLink link;
        link.alpha = std::polar(std::sqrt(reflection_power(scene, RadarStructure::bistatic)), alpha_phase);
        link.aod = angles_from_positions(scene.sat, scene.tar, ArrayFrame::satellite_looking_down);
        link.aoa = angles_from_positions(scene.rx, scene.tar, ArrayFrame::receiver_looking_up);
        link.r_tx = (scene.tar - scene.sat).norm();
        link.r_rx = (scene.tar - scene.rx).norm();
        link.r_los = (scene.sat - scene.rx).norm();
        link.beta = bistatic_angle(scene.sat, scene.tar, scene.rx);
        return link;
    }

    std::vector<PathLossPoint> echo_path_loss_curve(const RadarScene &scene, const std::vector<double> &altitudes_m,
                                                    RadarStructure structure)
    {
        std::vector<PathLossPoint> out;
        out.reserve(altitudes_m.size());
        RadarScene s = scene;
        for (double h : altitudes_m)
        {
            if (!(h > 0.0))
                throw std::invalid_argument("echo_path_loss_curve: altitudes must be positive");
            s.tar.z() = h;
            out.push_back({h, -linear_to_db(reflection_power(s, structure))});
        }
        return out;
    }
}
