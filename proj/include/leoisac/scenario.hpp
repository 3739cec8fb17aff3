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

#ifndef LEOISAC_SCENARIO_HPP
#define LEOISAC_SCENARIO_HPP

#include "leoisac/channel.hpp"
#include "leoisac/estimation.hpp"
#include "leoisac/precoder_opt.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace leoisac
{
    // Malformed or inconsistent configuration (CLI exit code 2)
    class ConfigError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    struct UserPlacement
    {
        std::string kind = "uniform-disk"; // or "explicit"
        double diameter_km = 100.0;        // disk centred below the satellite
        int count = 4;
        std::uint64_t seed = 1;
        std::vector<Vec3> positions_km; // explicit placement
    };

    struct OptimizerSettings
    {
        double eps_rank = 0.9999;
        double eps_obj = 1e-4;
        double delta0 = 0.1;
        int m_max = 60;
        int n_max = 30;
        std::vector<InitSplit> starts = OptConfig{}.starts;
    };

    // Complete experiment description. Member defaults are the full-scale reference parameters;
    // desk() swaps in the small interactive setup.
    struct ScenarioConfig
    {
        std::string profile = "paper";
        Vec3 satellite_km{30.0, -30.0, 340.0};
        Vec3 receiver_km{0.0, 0.0, 0.0};
        Vec3 target_km{3.0, 3.0, 5.0};
        UserPlacement users;
        UpaSpec tx_array{8, 8};
        UpaSpec rx_array{32, 32};
        double f_c_hz = 2e9;
        double bandwidth_hz = 10e6;
        double rx_noise_temp_k = 150.0;
        double user_noise_temp_k = 150.0;
        double g_sat_dbi = 6.0;
        double g_rx_dbi = 3.0;
        double g_ut_dbi = 0.0;
        double kappa_db = 10.0;
        double rcs_mono_m2 = 100.0;
        double p_t_dbw = 20.0;
        double crb_threshold_theta = 8e-7;
        double crb_threshold_phi = 8e-7;
        int frame_length = 4096;
        int tau_max = 256;
        double doppler_min_hz = -30e3;
        double doppler_max_hz = 30e3;
        std::string mode = "rsma-isac-sic";
        std::uint64_t seed = 1;
        OptimizerSettings optimizer;
        double angle_step_deg = 0.5;
        double detection_threshold = 20.0;
        int monte_carlo_drops = 20;
        std::vector<double> power_list_dbw{20.0, 25.0, 30.0};

        static ScenarioConfig paper();
        static ScenarioConfig desk();
        static ScenarioConfig for_profile(const std::string &name);

        void validate() const;
        nlohmann::json to_json() const;
        // Keys override the defaults of the profile named by "profile" (paper if absent); unknown keys are rejected
        static ScenarioConfig from_json(const nlohmann::json &j);
        static ScenarioConfig load(const std::string &path);

        // Hex SHA-256 of the canonical JSON serialization
        std::string hash() const;
        double p_t_watts() const { return db_to_linear(p_t_dbw); }
    };

    // Everything derived from a config for one user drop, in SI units
    struct Scenario
    {
        ScenarioConfig cfg;
        ModeConfig mode;
        Vec3 sat, rx, tar;       // meters
        std::vector<Vec3> users; // meters
        std::vector<AnglePair> user_aod;
        RVec user_gamma;
        double sigma_c2 = 0;
        double sigma_r2 = 0;
        double T_s = 0;
        RadarScene radar;
        RadarLink link;
        OptScene opt;
        long long window_start = 0; // samples, floor(R_LOS / (c T_s))

        OptConfig opt_config() const;
        MatchedFilterSetup matched_filter_setup() const;
        std::vector<double> doppler_grid() const;
        AngleGrid angle_grid() const;
    };

    // Drop d draws users from the seed sequence (users.seed, d)
    Scenario build_scenario(const ScenarioConfig &cfg, int drop = 0);

    // Moves the target onto the estimation grids: AOA to the nearest angle-grid point, bistatic range to a whole
    // delay sample, Doppler to the nearest grid value. Updates tar, link and the CRB context.
    struct GridTruth
    {
        AnglePair aoa;
        int tau = 0;
        double v = 0;
    };
    GridTruth snap_to_grid(Scenario &sc, double v_hz);
}

#endif
