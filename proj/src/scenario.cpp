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

#include "leoisac/scenario.hpp"
#include "leoisac/manifest.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <set>

namespace leoisac
{
    using nlohmann::json;

    namespace
    {
        json vec_json(const Vec3 &v) { return json::array({v.x(), v.y(), v.z()}); }

        Vec3 json_vec(const json &j, const std::string &key)
        {
            if (!j.is_array() || j.size() != 3)
                throw ConfigError("'" + key + "' must be an array of three numbers");
            return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
        }

        UpaSpec json_upa(const json &j, const std::string &key)
        {
            if (!j.is_array() || j.size() != 2)
                throw ConfigError("'" + key + "' must be [nx, ny]");
            const int nx = j.at(0).get<int>(), ny = j.at(1).get<int>();
            if (nx < 1 || ny < 1)
                throw ConfigError("'" + key + "' element counts must be positive");
            return UpaSpec(nx, ny);
        }

        void reject_unknown(const json &j, const std::set<std::string> &known, const std::string &where)
        {
            if (!j.is_object())
                throw ConfigError(where + " must be an object");
            for (auto it = j.begin(); it != j.end(); ++it)
                if (!known.count(it.key()))
                    throw ConfigError("unknown key '" + it.key() + "' in " + where);
        }
    }

    ScenarioConfig ScenarioConfig::paper() { return ScenarioConfig{}; }

    ScenarioConfig ScenarioConfig::desk()
    {
        ScenarioConfig c;
        c.profile = "desk";
        c.tx_array = UpaSpec(4, 4);
        c.rx_array = UpaSpec(8, 8);
        c.g_rx_dbi = 34.0;
        c.crb_threshold_theta = 5e-6;
        c.crb_threshold_phi = 5e-6;
        return c;
    }

    ScenarioConfig ScenarioConfig::for_profile(const std::string &name)
    {
        if (name == "paper")
            return paper();
        if (name == "desk")
            return desk();
        throw ConfigError("unknown profile '" + name + "' (expected desk or paper)");
    }

    void ScenarioConfig::validate() const
    {
        auto req = [](bool ok, const std::string &msg) {
            if (!ok)
                throw ConfigError(msg);
        };
        req(users.kind == "uniform-disk" || users.kind == "explicit", "users.placement must be uniform-disk or explicit");
        const int K = users.kind == "explicit" ? int(users.positions_km.size()) : users.count;
        req(K >= 1, "at least one communication user is required");
        req(users.kind != "uniform-disk" || users.diameter_km > 0.0, "users.diameter_km must be positive");
        req(f_c_hz > 0.0 && bandwidth_hz > 0.0, "f_c_hz and bandwidth_hz must be positive");
        req(rx_noise_temp_k > 0.0 && user_noise_temp_k > 0.0, "noise temperatures must be positive");
        req(rcs_mono_m2 > 0.0, "rcs_mono_m2 must be positive");
        req(crb_threshold_theta > 0.0 && crb_threshold_phi > 0.0, "CRB thresholds must be positive");
        req(frame_length >= K + 2, "frame_length must be at least K + 2");
        req(tau_max >= 1, "tau_max must be at least 1");
        req(doppler_min_hz <= doppler_max_hz, "doppler range is empty");
        req(std::max(std::abs(doppler_min_hz), std::abs(doppler_max_hz)) < 0.5 * bandwidth_hz,
            "Doppler range must stay below half the sampling rate");
        req(angle_step_deg > 0.0, "angle_step_deg must be positive");
        req(monte_carlo_drops >= 1, "monte_carlo_drops must be at least 1");
        req(!power_list_dbw.empty(), "power_list_dbw must not be empty");
        req(satellite_km.z() > target_km.z(), "the satellite must be above the target");
        try
        {
            ModeConfig::parse(mode);
        }
        catch (const std::exception &e)
        {
            throw ConfigError(e.what());
        }
        OptConfig oc;
        oc.eps_rank = optimizer.eps_rank;
        oc.eps_obj = optimizer.eps_obj;
        oc.delta0 = optimizer.delta0;
        oc.m_max = optimizer.m_max;
        oc.n_max = optimizer.n_max;
        oc.starts = optimizer.starts;
        try
        {
            oc.validate();
        }
        catch (const std::exception &e)
        {
            throw ConfigError(e.what());
        }
    }

    json ScenarioConfig::to_json() const
    {
        json u = {{"placement", users.kind}, {"diameter_km", users.diameter_km}, {"count", users.count},
                  {"seed", users.seed}};
        json pos = json::array();
        for (const auto &p : users.positions_km)
            pos.push_back(vec_json(p));
        u["positions_km"] = pos;
        json o = {{"eps_rank", optimizer.eps_rank},
                  {"eps_obj", optimizer.eps_obj},
                  {"delta0", optimizer.delta0},
                  {"m_max", optimizer.m_max},
                  {"n_max", optimizer.n_max}};
        json st = json::array();
        for (const auto &x : optimizer.starts)
            st.push_back({x.user_share, x.common_share});
        o["starts"] = st;
        return json{{"profile", profile},
                    {"satellite_km", vec_json(satellite_km)},
                    {"receiver_km", vec_json(receiver_km)},
                    {"target_km", vec_json(target_km)},
                    {"users", u},
                    {"tx_array", {tx_array.nx, tx_array.ny}},
                    {"rx_array", {rx_array.nx, rx_array.ny}},
                    {"f_c_hz", f_c_hz},
                    {"bandwidth_hz", bandwidth_hz},
                    {"rx_noise_temp_k", rx_noise_temp_k},
                    {"user_noise_temp_k", user_noise_temp_k},
                    {"g_sat_dbi", g_sat_dbi},
                    {"g_rx_dbi", g_rx_dbi},
                    {"g_ut_dbi", g_ut_dbi},
                    {"kappa_db", kappa_db},
                    {"rcs_mono_m2", rcs_mono_m2},
                    {"p_t_dbw", p_t_dbw},
                    {"crb_threshold_theta", crb_threshold_theta},
                    {"crb_threshold_phi", crb_threshold_phi},
                    {"frame_length", frame_length},
                    {"tau_max", tau_max},
                    {"doppler_min_hz", doppler_min_hz},
                    {"doppler_max_hz", doppler_max_hz},
                    {"mode", mode},
                    {"seed", seed},
                    {"optimizer", o},
                    {"angle_step_deg", angle_step_deg},
                    {"detection_threshold", detection_threshold},
                    {"monte_carlo_drops", monte_carlo_drops},
                    {"power_list_dbw", power_list_dbw}};
    }

    ScenarioConfig ScenarioConfig::from_json(const json &j)
    {
        static const std::set<std::string> known = {
            "profile", "satellite_km", "receiver_km", "target_km", "users", "tx_array", "rx_array", "f_c_hz",
            "bandwidth_hz", "rx_noise_temp_k", "user_noise_temp_k", "g_sat_dbi", "g_rx_dbi", "g_ut_dbi", "kappa_db",
            "rcs_mono_m2", "p_t_dbw", "crb_threshold_theta", "crb_threshold_phi", "frame_length", "tau_max",
            "doppler_min_hz", "doppler_max_hz", "mode", "seed", "optimizer", "angle_step_deg", "detection_threshold",
            "monte_carlo_drops", "power_list_dbw"};
        reject_unknown(j, known, "config");
        try
        {
            ScenarioConfig c = for_profile(j.value("profile", std::string("paper")));
            auto num = [&](const char *key, double &dst) {
                if (j.contains(key))
                    dst = j.at(key).get<double>();
            };
            auto integer = [&](const char *key, int &dst) {
                if (j.contains(key))
                    dst = j.at(key).get<int>();
            };
            if (j.contains("satellite_km"))
                c.satellite_km = json_vec(j.at("satellite_km"), "satellite_km");
            if (j.contains("receiver_km"))
                c.receiver_km = json_vec(j.at("receiver_km"), "receiver_km");
            if (j.contains("target_km"))
                c.target_km = json_vec(j.at("target_km"), "target_km");
            if (j.contains("users"))
            {
                const json &u = j.at("users");
                reject_unknown(u, {"placement", "diameter_km", "count", "seed", "positions_km"}, "users");
                c.users.kind = u.value("placement", c.users.kind);
                c.users.diameter_km = u.value("diameter_km", c.users.diameter_km);
                c.users.count = u.value("count", c.users.count);
                c.users.seed = u.value("seed", c.users.seed);
                if (u.contains("positions_km"))
                {
                    c.users.positions_km.clear();
                    for (const auto &p : u.at("positions_km"))
                        c.users.positions_km.push_back(json_vec(p, "users.positions_km"));
                }
                if (c.users.kind == "explicit")
                    c.users.count = int(c.users.positions_km.size());
            }
            if (j.contains("tx_array"))
                c.tx_array = json_upa(j.at("tx_array"), "tx_array");
            if (j.contains("rx_array"))
                c.rx_array = json_upa(j.at("rx_array"), "rx_array");
            num("f_c_hz", c.f_c_hz);
            num("bandwidth_hz", c.bandwidth_hz);
            num("rx_noise_temp_k", c.rx_noise_temp_k);
            num("user_noise_temp_k", c.user_noise_temp_k);
            num("g_sat_dbi", c.g_sat_dbi);
            num("g_rx_dbi", c.g_rx_dbi);
            num("g_ut_dbi", c.g_ut_dbi);
            num("kappa_db", c.kappa_db);
            num("rcs_mono_m2", c.rcs_mono_m2);
            num("p_t_dbw", c.p_t_dbw);
            num("crb_threshold_theta", c.crb_threshold_theta);
            num("crb_threshold_phi", c.crb_threshold_phi);
            integer("frame_length", c.frame_length);
            integer("tau_max", c.tau_max);
            num("doppler_min_hz", c.doppler_min_hz);
            num("doppler_max_hz", c.doppler_max_hz);
            if (j.contains("mode"))
                c.mode = j.at("mode").get<std::string>();
            if (j.contains("seed"))
                c.seed = j.at("seed").get<std::uint64_t>();
            if (j.contains("optimizer"))
            {
                const json &o = j.at("optimizer");
                reject_unknown(o, {"eps_rank", "eps_obj", "delta0", "m_max", "n_max", "starts"}, "optimizer");
                c.optimizer.eps_rank = o.value("eps_rank", c.optimizer.eps_rank);
                c.optimizer.eps_obj = o.value("eps_obj", c.optimizer.eps_obj);
                c.optimizer.delta0 = o.value("delta0", c.optimizer.delta0);
                c.optimizer.m_max = o.value("m_max", c.optimizer.m_max);
                c.optimizer.n_max = o.value("n_max", c.optimizer.n_max);
                if (o.contains("starts"))
                {
                    c.optimizer.starts.clear();
                    for (const auto &x : o.at("starts"))
                    {
                        if (!x.is_array() || x.size() != 2)
                            throw ConfigError("optimizer.starts entries must be [user_share, common_share]");
                        c.optimizer.starts.push_back({x.at(0).get<double>(), x.at(1).get<double>()});
                    }
                }
            }
            num("angle_step_deg", c.angle_step_deg);
            num("detection_threshold", c.detection_threshold);
            integer("monte_carlo_drops", c.monte_carlo_drops);
            if (j.contains("power_list_dbw"))
                c.power_list_dbw = j.at("power_list_dbw").get<std::vector<double>>();
            c.validate();
            return c;
        }
        catch (const json::exception &e)
        {
            throw ConfigError(std::string("config type error: ") + e.what());
        }
    }

    ScenarioConfig ScenarioConfig::load(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot open config file '" + path + "'");
        json j;
        try
        {
            j = json::parse(in);
        }
        catch (const json::exception &e)
        {
            throw ConfigError(std::string("config parse error: ") + e.what());
        }
        return from_json(j);
    }

    std::string ScenarioConfig::hash() const { return sha256_hex(to_json().dump()); }

    OptConfig Scenario::opt_config() const
    {
        OptConfig oc;
        oc.eps_rank = cfg.optimizer.eps_rank;
        oc.eps_obj = cfg.optimizer.eps_obj;
        oc.delta0 = cfg.optimizer.delta0;
        oc.m_max = cfg.optimizer.m_max;
        oc.n_max = cfg.optimizer.n_max;
        oc.starts = cfg.optimizer.starts;
        oc.P_t = cfg.p_t_watts();
        oc.crb_th_theta = cfg.crb_threshold_theta;
        oc.crb_th_phi = cfg.crb_threshold_phi;
        oc.mode = mode;
        return oc;
    }

    std::vector<double> Scenario::doppler_grid() const
    {
        const double step = 1.0 / (cfg.frame_length * T_s);
        std::vector<double> v;
        const long lo = long(std::ceil(cfg.doppler_min_hz / step - 1e-9));
        const long hi = long(std::floor(cfg.doppler_max_hz / step + 1e-9));
        for (long k = lo; k <= hi; ++k)
            v.push_back(double(k) * step);
        if (v.empty())
            v.push_back(0.0);
        return v;
    }

    AngleGrid Scenario::angle_grid() const { return AngleGrid::hemisphere(cfg.angle_step_deg * kPi / 180.0); }

    MatchedFilterSetup Scenario::matched_filter_setup() const
    {
        MatchedFilterSetup s;
        s.sat = sat;
        s.rx = rx;
        s.tx = cfg.tx_array;
        s.T_s = T_s;
        s.window_start = window_start;
        for (int t = 1; t <= cfg.tau_max; ++t)
            s.taus.push_back(t);
        s.dopplers = doppler_grid();
        s.detection_threshold = cfg.detection_threshold;
        return s;
    }

    namespace
    {
        void refresh_radar(Scenario &sc)
        {
            sc.radar.tar = sc.tar;
            sc.link = make_radar_link(sc.radar);
            sc.opt.crb.alpha2 = std::norm(sc.link.alpha);
            sc.opt.crb.sigma_r2 = sc.sigma_r2;
            sc.opt.crb.L = sc.cfg.frame_length;
            sc.opt.crb.a_tar = steering_vector(sc.cfg.tx_array, sc.link.aod);
            sc.opt.crb.b_derivs = steering_derivatives(sc.cfg.rx_array, sc.link.aoa);
        }
    }

    Scenario build_scenario(const ScenarioConfig &cfg, int drop)
    {
        cfg.validate();
        Scenario sc;
        sc.cfg = cfg;
        sc.mode = ModeConfig::parse(cfg.mode);
        sc.sat = cfg.satellite_km * 1e3;
        sc.rx = cfg.receiver_km * 1e3;
        sc.tar = cfg.target_km * 1e3;
        sc.T_s = 1.0 / cfg.bandwidth_hz;
        sc.sigma_c2 = noise_power(cfg.bandwidth_hz, cfg.user_noise_temp_k);
        sc.sigma_r2 = noise_power(cfg.bandwidth_hz, cfg.rx_noise_temp_k);

        if (cfg.users.kind == "explicit")
        {
            for (const auto &p : cfg.users.positions_km)
                sc.users.push_back(p * 1e3);
        }
        else
        {
            std::seed_seq seq{std::uint32_t(cfg.users.seed & 0xffffffffu), std::uint32_t(cfg.users.seed >> 32),
                              std::uint32_t(drop)};
            std::mt19937_64 rng(seq);
            std::uniform_real_distribution<double> U(0.0, 1.0);
            const double R = 0.5 * cfg.users.diameter_km * 1e3;
            for (int k = 0; k < cfg.users.count; ++k)
            {
                const double r = R * std::sqrt(U(rng)), a = 2.0 * kPi * U(rng);
                sc.users.push_back({sc.sat.x() + r * std::cos(a), sc.sat.y() + r * std::sin(a), 0.0});
            }
        }

        const int K = int(sc.users.size());
        sc.user_gamma.resize(K);
        sc.opt.rho.resize(K);
        for (int k = 0; k < K; ++k)
        {
            const AnglePair aod = angles_from_positions(sc.sat, sc.users[k], ArrayFrame::satellite_looking_down);
            sc.user_aod.push_back(aod);
            sc.opt.a.push_back(steering_vector(cfg.tx_array, aod));
            sc.user_gamma(k) = avg_channel_power(cfg.g_sat_dbi, cfg.g_ut_dbi, cfg.f_c_hz, (sc.users[k] - sc.sat).norm());
            sc.opt.rho(k) = sc.sigma_c2 / sc.user_gamma(k);
        }

        sc.radar = RadarScene{sc.sat, sc.tar, sc.rx, cfg.g_sat_dbi, cfg.g_rx_dbi, cfg.f_c_hz, cfg.rcs_mono_m2};
        sc.window_start = (long long)std::floor((sc.sat - sc.rx).norm() / (kSpeedOfLight * sc.T_s));
        refresh_radar(sc);
        return sc;
    }

    GridTruth snap_to_grid(Scenario &sc, double v_hz)
    {
        const AngleGrid grid = sc.angle_grid();
        const auto [it, ip] = grid.nearest(sc.link.aoa);
        GridTruth g;
        g.aoa = grid.at(it, ip);

        const double range = bistatic_range(sc.sat, sc.tar, sc.rx);
        g.tau = int(std::lround(range / (kSpeedOfLight * sc.T_s))) - int(sc.window_start);
        if (g.tau < 1 || g.tau > sc.cfg.tau_max)
            throw GeometryError("target delay falls outside the delay window");
        const auto fix = invert_bistatic_ellipsoid(sc.sat, direction_from_angles(g.aoa),
                                                   window_bistatic_range(sc.window_start, g.tau, sc.T_s), sc.rx);
        sc.tar = fix.target;
        refresh_radar(sc);
        // The receiver-frame AOA of the rebuilt target is the grid point up to rounding
        sc.link.aoa = g.aoa;
        sc.opt.crb.b_derivs = steering_derivatives(sc.cfg.rx_array, g.aoa);

        const auto dg = sc.doppler_grid();
        g.v = dg.front();
        for (double v : dg)
            if (std::abs(v - v_hz) < std::abs(g.v - v_hz))
                g.v = v;
        return g;
    }
}
