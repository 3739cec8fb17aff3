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

#include "leoisac/experiments.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <map>

namespace leoisac
{
    using nlohmann::json;

    std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream)
    {
        std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    int exit_code(OptStatus status)
    {
        switch (status)
        {
        case OptStatus::converged:
            return 0;
        case OptStatus::infeasible:
            return 3;
        case OptStatus::iter_cap:
            return 4;
        }
        return 1;
    }

    std::vector<PathlossRow> pathloss_sweep(const ScenarioConfig &cfg, double alt_min_km, double alt_max_km, int steps)
    {
        if (!(alt_min_km > 0.0) || !(alt_max_km >= alt_min_km))
            throw ConfigError("pathloss: need 0 < alt-min <= alt-max");
        if (steps < 1 || (steps == 1 && alt_max_km != alt_min_km))
            throw ConfigError("pathloss: steps must be at least 2 for a nonempty range");
        if (!(cfg.satellite_km.z() > alt_max_km))
            throw ConfigError("pathloss: altitudes must stay below the satellite");
        std::vector<double> alts;
        for (int i = 0; i < steps; ++i)
            alts.push_back(1e3 * (steps == 1 ? alt_min_km : alt_min_km + (alt_max_km - alt_min_km) * i / (steps - 1)));
        const RadarScene scene{cfg.satellite_km * 1e3, cfg.target_km * 1e3, cfg.receiver_km * 1e3, cfg.g_sat_dbi,
                               cfg.g_rx_dbi, cfg.f_c_hz, cfg.rcs_mono_m2};
        const auto bi = echo_path_loss_curve(scene, alts, RadarStructure::bistatic);
        const auto mono = echo_path_loss_curve(scene, alts, RadarStructure::monostatic);
        std::vector<PathlossRow> rows;
        for (std::size_t i = 0; i < alts.size(); ++i)
            rows.push_back({alts[i] / 1e3, bi[i].loss_db, mono[i].loss_db});
        return rows;
    }

    CsvTable pathloss_csv(const std::vector<PathlossRow> &rows)
    {
        CsvTable t({"altitude_km", "bistatic_db", "monostatic_db"});
        for (const auto &r : rows)
            t.row({cell(r.altitude_km), cell(r.bistatic_db), cell(r.monostatic_db)});
        return t;
    }

    CsvTable precoder_csv(const PrecoderMatrix &P)
    {
        CsvTable t({"column", "antenna", "re_sqrt_w", "im_sqrt_w"});
        const int K = P.users();
        for (int c = 0; c < int(P.P.cols()); ++c)
        {
            const std::string name = c < K ? "private_" + std::to_string(c + 1) : (c == K ? "common" : "radar");
            for (int n = 0; n < P.antennas(); ++n)
                t.row({name, cell(n), cell(P.P(n, c).real()), cell(P.P(n, c).imag())});
        }
        return t;
    }

    SweepPoint run_sweep_task(const SweepTask &task)
    {
        const auto t0 = std::chrono::steady_clock::now();
        const Scenario sc = build_scenario(task.cfg, task.drop);
        const OptResult r = solve(sc.opt, sc.opt_config());
        SweepPoint p;
        p.mode = task.cfg.mode;
        p.p_t_dbw = task.cfg.p_t_dbw;
        p.crb_threshold_theta = task.cfg.crb_threshold_theta;
        p.crb_threshold_phi = task.cfg.crb_threshold_phi;
        p.drop = task.drop;
        p.status = r.status;
        p.R_min = r.status == OptStatus::infeasible ? 0.0 : r.R_min;
        p.outer_iterations = r.outer_iterations;
        p.subproblem_solves = r.subproblem_solves;
        p.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return p;
    }

    std::vector<SweepPoint> run_sweep(const std::vector<SweepTask> &tasks, int workers)
    {
        std::vector<SweepPoint> out(tasks.size());
        parallel_for(int(tasks.size()), workers, [&](int i) { out[i] = run_sweep_task(tasks[i]); });
        return out;
    }

    std::vector<SweepTask> minrate_tasks(const ScenarioConfig &base, const std::vector<std::string> &modes,
                                         const std::vector<double> &power_dbw, int drops)
    {
        if (modes.empty() || power_dbw.empty() || drops < 1)
            throw ConfigError("minrate-sweep: modes, powers and drops must be nonempty");
        std::vector<SweepTask> tasks;
        for (const auto &m : modes)
            for (double p : power_dbw)
                for (int d = 0; d < drops; ++d)
                {
                    SweepTask t{base, d};
                    t.cfg.mode = m;
                    t.cfg.p_t_dbw = p;
                    t.cfg.validate();
                    tasks.push_back(t);
                }
        return tasks;
    }

    namespace
    {
        int severity(OptStatus s) { return s == OptStatus::converged ? 0 : (s == OptStatus::iter_cap ? 1 : 2); }
    }

    CsvTable minrate_summary_csv(const std::vector<SweepPoint> &points)
    {
        CsvTable t({"mode", "P_t_dbw", "R_min_bps_per_hz", "status", "iters", "drops", "converged", "iter_cap",
                    "infeasible"});
        // Keyed by first appearance so the row order follows the task order
        std::vector<std::pair<std::string, double>> keys;
        std::map<std::pair<std::string, double>, std::vector<const SweepPoint *>> groups;
        for (const auto &p : points)
        {
            const auto key = std::make_pair(p.mode, p.p_t_dbw);
            if (!groups.count(key))
                keys.push_back(key);
            groups[key].push_back(&p);
        }
        for (const auto &key : keys)
        {
            const auto &g = groups[key];
            double rate = 0, iters = 0;
            int counts[3] = {0, 0, 0};
            OptStatus worst = OptStatus::converged;
            for (const SweepPoint *p : g)
            {
                rate += p->R_min;
                iters += p->outer_iterations;
                ++counts[severity(p->status)];
                if (severity(p->status) > severity(worst))
                    worst = p->status;
            }
            const double n = double(g.size());
            t.row({key.first, cell(key.second), cell(rate / n), to_string(worst), cell(iters / n), cell(int(g.size())),
                   cell(counts[0]), cell(counts[1]), cell(counts[2])});
        }
        return t;
    }

    CsvTable minrate_drops_csv(const std::vector<SweepPoint> &points)
    {
        CsvTable t({"mode", "P_t_dbw", "drop", "R_min_bps_per_hz", "status", "iters", "subproblems"});
        for (const auto &p : points)
            t.row({p.mode, cell(p.p_t_dbw), cell(p.drop), cell(p.R_min), to_string(p.status), cell(p.outer_iterations),
                   cell(p.subproblem_solves)});
        return t;
    }

    BeampatternOutcome beampattern_experiment(const Scenario &sc, double step_deg)
    {
        if (!(step_deg > 0.0))
            throw ConfigError("beampattern: step must be positive");
        BeampatternOutcome b;
        try
        {
            b.grid = AngleGrid::hemisphere(step_deg * kPi / 180.0);
        }
        catch (const std::invalid_argument &e)
        {
            throw ConfigError(std::string("beampattern: ") + e.what());
        }
        b.opt = solve(sc.opt, sc.opt_config());
        if (b.opt.status == OptStatus::infeasible)
            return b;
        b.patterns = beampatterns(b.opt.P, sc.cfg.tx_array, b.grid.theta, b.grid.phi);
        b.shares = power_shares(b.opt.P);
        return b;
    }

    CsvTable beampattern_csv(const BeampatternOutcome &b)
    {
        CsvTable t({"theta_deg", "phi_deg", "P_radar", "P_common", "P_private"});
        for (std::size_t i = 0; i < b.grid.theta.size(); ++i)
            for (std::size_t j = 0; j < b.grid.phi.size(); ++j)
                t.row({cell(b.grid.theta[i] * 180.0 / kPi), cell(b.grid.phi[j] * 180.0 / kPi),
                       cell(b.patterns.radar(i, j)), cell(b.patterns.common(i, j)), cell(b.patterns.priv(i, j))});
        return t;
    }

    CsvTable power_ratio_csv(const PowerShares &s)
    {
        CsvTable t({"stream", "power_ratio"});
        for (int k = 0; k < int(s.priv.size()); ++k)
            t.row({"private_" + std::to_string(k + 1), cell(s.priv(k))});
        t.row({"common", cell(s.common)});
        t.row({"radar", cell(s.radar)});
        return t;
    }

    EchoExperiment prepare_echo(const ScenarioConfig &cfg, const EchoOptions &opt)
    {
        EchoExperiment ex;
        ex.sc = build_scenario(cfg, 0);
        try
        {
            ex.truth = snap_to_grid(ex.sc, opt.doppler_hz);
        }
        catch (const GeometryError &e)
        {
            throw ConfigError(std::string("target: ") + e.what());
        }
        ex.opt = solve(ex.sc.opt, ex.sc.opt_config());
        if (ex.opt.status == OptStatus::infeasible)
            return ex;
        synthesize_trial(ex, cfg.seed, opt.noise);
        return ex;
    }

    void synthesize_trial(EchoExperiment &ex, std::uint64_t seed, bool noise)
    {
        const ScenarioConfig &cfg = ex.sc.cfg;
        const SymbolFrame frame = generate_streams(ex.sc.opt.users(), cfg.frame_length, derive_seed(seed, 1), ex.sc.mode);
        ex.X = precode(ex.opt.P, frame);
        ex.echo = synthesize_echo(ex.X, ex.sc.link, cfg.tx_array, cfg.rx_array, ex.truth.tau, ex.truth.v, ex.sc.T_s,
                                  cfg.tau_max, noise ? ex.sc.sigma_r2 : 0.0, derive_seed(seed, 2));
    }

    MusicOutcome music_experiment(const EchoExperiment &ex)
    {
        MusicOutcome m;
        m.grid = ex.sc.angle_grid();
        const CMat R = sample_covariance(ex.echo);
        m.music = music_spectrum(R, ex.sc.cfg.rx_array, m.grid, 1);
        m.residual_at_truth = music_residual(R, ex.sc.cfg.rx_array, ex.truth.aoa, 1);
        return m;
    }

    CsvTable music_csv(const MusicOutcome &m)
    {
        CsvTable t({"theta_deg", "phi_deg", "spectrum_db"});
        for (std::size_t i = 0; i < m.grid.theta.size(); ++i)
            for (std::size_t j = 0; j < m.grid.phi.size(); ++j)
                t.row({cell(m.grid.theta[i] * 180.0 / kPi), cell(m.grid.phi[j] * 180.0 / kPi),
                       cell(linear_to_db(m.music.spectrum(i, j) / m.music.peak_value))});
        return t;
    }

    TrackOutcome track_experiment(const EchoExperiment &ex, const TrackOptions &opt)
    {
        TrackOutcome t;
        AnglePair aoa = ex.truth.aoa;
        if (opt.use_music)
            aoa = music_experiment(ex).music.peak;
        const double off = opt.aoa_offset_deg * kPi / 180.0;
        aoa.theta = std::remainder(aoa.theta + off, 2.0 * kPi);
        if (aoa.theta <= -kPi)
            aoa.theta += 2.0 * kPi;
        aoa.phi = std::clamp(aoa.phi + off, 0.0, kPi / 2.0);
        t.aoa_used = aoa;

        const auto y = receive_combine(ex.echo, steering_vector(ex.sc.cfg.rx_array, aoa));
        t.setup = ex.sc.matched_filter_setup();
        t.report = matched_filter_joint(ex.X, y, aoa, t.setup);
        t.position_error_m = (t.report.position_hat - ex.sc.tar).norm();
        t.exact_bins = t.report.tau_hat == ex.truth.tau &&
                       std::abs(t.report.v_hat - ex.truth.v) <= 1e-9 * ex.sc.cfg.bandwidth_hz;

        const Vec3 dir = direction_from_angles(ex.truth.aoa);
        const double r = bistatic_range(ex.sc.sat, ex.sc.tar, ex.sc.rx);
        const double half = 0.5 * kSpeedOfLight * ex.sc.T_s;
        for (double dr : {-half, half})
        {
            const auto fix = invert_bistatic_ellipsoid(ex.sc.sat, dir, r + dr, ex.sc.rx);
            t.range_bin_bound_m = std::max(t.range_bin_bound_m, (fix.target - ex.sc.tar).norm());
        }
        return t;
    }

    CsvTable track_csv(const TrackOutcome &t)
    {
        CsvTable tab({"tau_samples", "bistatic_range_m", "doppler_hz", "magnitude", "valid"});
        for (std::size_t i = 0; i < t.setup.taus.size(); ++i)
            for (std::size_t k = 0; k < t.setup.dopplers.size(); ++k)
            {
                const double v = t.report.surface(i, k);
                const bool ok = std::isfinite(v);
                tab.row({cell(t.setup.taus[i]),
                         cell(window_bistatic_range(t.setup.window_start, t.setup.taus[i], t.setup.T_s)),
                         cell(t.setup.dopplers[k]), cell(ok ? v : 0.0), cell(ok ? 1 : 0)});
            }
        return tab;
    }

    namespace
    {
        json angle_json(const AnglePair &a) { return {{"theta_deg", a.theta * 180.0 / kPi}, {"phi_deg", a.phi * 180.0 / kPi}}; }
        json vec_json(const Vec3 &v) { return json::array({v.x(), v.y(), v.z()}); }

        json truth_json(const EchoExperiment &ex)
        {
            return {{"aoa", angle_json(ex.truth.aoa)},
                    {"aod", angle_json(ex.sc.link.aod)},
                    {"tau_samples", ex.truth.tau},
                    {"doppler_hz", ex.truth.v},
                    {"target_m", vec_json(ex.sc.tar)},
                    {"optimizer_status", to_string(ex.opt.status)},
                    {"R_min_bps_per_hz", ex.opt.R_min}};
        }
    }

    json music_report_json(const EchoExperiment &ex, const MusicOutcome &m)
    {
        return {{"truth", truth_json(ex)},
                {"peak", angle_json(m.music.peak)},
                {"peak_index", {m.music.i_theta, m.music.i_phi}},
                {"peak_to_sidelobe_db", m.music.peak_to_sidelobe_db},
                {"peak_to_median_db", linear_to_db(m.music.peak_value / m.music.median)},
                {"residual_at_truth", m.residual_at_truth},
                {"on_truth", m.music.peak == ex.truth.aoa}};
    }

    json track_report_json(const EchoExperiment &ex, const TrackOutcome &t)
    {
        const auto &r = t.report;
        return {{"truth", truth_json(ex)},
                {"aoa_used", angle_json(t.aoa_used)},
                {"tau_hat", r.tau_hat},
                {"v_hat_hz", r.v_hat},
                {"aod_hat", angle_json(r.aod_hat)},
                {"position_hat_m", vec_json(r.position_hat)},
                {"r_rx_m", r.r_rx},
                {"bistatic_range_m", r.bistatic_range},
                {"peak_to_median", r.peak_to_median},
                {"failed", r.failed},
                {"invalid_cells", r.invalid_cells},
                {"exact_bins", t.exact_bins},
                {"position_error_m", t.position_error_m},
                {"range_bin_bound_m", t.range_bin_bound_m}};
    }
}
