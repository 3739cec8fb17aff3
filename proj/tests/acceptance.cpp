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

// Acceptance suite: one PASS/FAIL line per criterion, followed by indented measurements.
// Usage: leoisac_acceptance [criterion ...]; no arguments runs every criterion except paper-scale-gain.

#include "leoisac/experiments.hpp"

#include <fmt/core.h>

#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <random>

using namespace leoisac;

namespace
{
    struct Verdict
    {
        bool pass = true;
        std::vector<std::string> details;

        // Records one sub-check
        void check(bool ok, const std::string &what)
        {
            pass = pass && ok;
            details.push_back(fmt::format("{} {}", ok ? "ok  " : "FAIL", what));
        }
        void note(const std::string &what) { details.push_back("     " + what); }
    };

    class Stopwatch
    {
    public:
        double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

    private:
        std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
    };

    AnglePair random_angle(std::mt19937_64 &rng, double phi_lo = 0.0)
    {
        std::uniform_real_distribution<double> th(-kPi, kPi), ph(phi_lo, kPi / 2.0 - 0.05);
        return {th(rng), ph(rng)};
    }

    CMat random_cmat(std::mt19937_64 &rng, int r, int c)
    {
        std::normal_distribution<double> n(0.0, std::sqrt(0.5));
        CMat m(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j)
            {
                const double re = n(rng), im = n(rng);
                m(i, j) = cdouble(re, im);
            }
        return m;
    }

    // Desk-scale CRB context at random angles
    CrbContext random_crb_context(std::mt19937_64 &rng, const ScenarioConfig &cfg, AnglePair &aoa)
    {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        aoa = random_angle(rng, 0.1);
        CrbContext ctx;
        ctx.alpha2 = std::pow(10.0, -3.0 * u(rng));
        ctx.sigma_r2 = std::pow(10.0, -2.0 + 3.0 * u(rng));
        ctx.L = cfg.frame_length;
        ctx.a_tar = steering_vector(cfg.tx_array, random_angle(rng));
        ctx.b_derivs = steering_derivatives(cfg.rx_array, aoa);
        return ctx;
    }

    Verdict fim_oracle()
    {
        Stopwatch sw;
        Verdict v;
        const ScenarioConfig cfg = ScenarioConfig::desk();
        std::mt19937_64 rng(101);
        double worst = 0;
        for (int t = 0; t < 20; ++t)
        {
            AnglePair aoa;
            const CrbContext ctx = random_crb_context(rng, cfg, aoa);
            const PrecoderMatrix P(random_cmat(rng, cfg.tx_array.size(), cfg.users.count + 2));
            const CMat X = P.P * orthogonal_streams(int(P.P.cols()), ctx.L);
            const Eigen::Matrix2d num = numeric_fim_oracle(cfg.rx_array, aoa, std::sqrt(ctx.alpha2), ctx.sigma_r2, ctx.a_tar, X);
            worst = std::max(worst, (fim(ctx, P) - num).norm() / num.norm());
        }
        const double s = sw.seconds();
        v.check(worst <= 1e-5, fmt::format("max relative error {:.3e} over 20 desk scenes (tol 1e-5)", worst));
        v.check(s <= 60.0, fmt::format("runtime {:.2f} s (limit 60 s)", s));
        return v;
    }

    Verdict crb_identity()
    {
        Verdict v;
        const ScenarioConfig cfg = ScenarioConfig::desk();
        std::mt19937_64 rng(102);
        double worst = 0;
        const int scenes = 220;
        for (int t = 0; t < scenes; ++t)
        {
            AnglePair aoa;
            const CrbContext ctx = random_crb_context(rng, cfg, aoa);
            const PrecoderMatrix P(random_cmat(rng, cfg.tx_array.size(), cfg.users.count + 2));
            const Eigen::Matrix2d Finv = fim(ctx, P).inverse();
            const CrbPair c = crb_pair(ctx, P);
            worst = std::max({worst, std::abs(c.theta - Finv(0, 0)) / Finv(0, 0), std::abs(c.phi - Finv(1, 1)) / Finv(1, 1)});
        }
        v.check(worst <= 1e-10, fmt::format("max relative deviation {:.3e} over {} scenes (tol 1e-10)", worst, scenes));
        return v;
    }

    // Path loss in dB evaluated term by term
    double loss_db_oracle(const RadarScene &s, bool bistatic)
    {
        const double rt = (s.tar - s.sat).norm(), rr = (s.tar - s.rx).norm(), rl = (s.sat - s.rx).norm();
        const double beta = std::acos((rt * rt + rr * rr - rl * rl) / (2 * rt * rr));
        const double rcs = bistatic ? s.rcs_mono * std::cos(beta / 2) : s.rcs_mono;
        const double r2 = bistatic ? rr : rt;
        return -(s.g_sat_dbi + s.g_rx_dbi + 20 * std::log10(kSpeedOfLight) + 10 * std::log10(rcs) -
                 30 * std::log10(4 * kPi) - 20 * std::log10(rt) - 20 * std::log10(r2) - 20 * std::log10(s.f_c));
    }

    Verdict pathloss()
    {
        Stopwatch sw;
        Verdict v;
        const ScenarioConfig cfg = ScenarioConfig::paper();
        const auto rows = pathloss_sweep(cfg, 1.0, 50.0, 50);
        const double s = sw.seconds();

        RadarScene sc{cfg.satellite_km * 1e3, cfg.target_km * 1e3, cfg.receiver_km * 1e3, cfg.g_sat_dbi,
                      cfg.g_rx_dbi,           cfg.f_c_hz,          cfg.rcs_mono_m2};
        double worst = 0, gap5 = 0;
        bool monotone = true;
        for (std::size_t i = 0; i < rows.size(); ++i)
        {
            sc.tar.z() = rows[i].altitude_km * 1e3;
            const double ob = loss_db_oracle(sc, true), om = loss_db_oracle(sc, false);
            worst = std::max({worst, std::abs(rows[i].bistatic_db - ob) / ob, std::abs(rows[i].monostatic_db - om) / om});
            const double gap = rows[i].monostatic_db - rows[i].bistatic_db;
            if (i > 0)
                monotone = monotone && gap < rows[i - 1].monostatic_db - rows[i - 1].bistatic_db;
            if (rows[i].altitude_km == 5.0)
                gap5 = gap;
        }
        v.check(gap5 >= 30.0, fmt::format("bistatic advantage at 5 km: {:.3f} dB (required >= 30 dB)", gap5));
        v.check(monotone, fmt::format("gap strictly decreasing over 1-50 km: {:.3f} dB at 1 km to {:.3f} dB at 50 km",
                                      rows.front().monostatic_db - rows.front().bistatic_db,
                                      rows.back().monostatic_db - rows.back().bistatic_db));
        v.check(worst <= 1e-12, fmt::format("max relative deviation from the dB-domain oracle {:.3e} (tol 1e-12)", worst));
        v.check(s < 1.0, fmt::format("runtime {:.4f} s (limit 1 s)", s));
        return v;
    }

    Scenario desk_scene(const std::string &mode, double p_t_dbw, double threshold = 0.0)
    {
        ScenarioConfig cfg = ScenarioConfig::desk();
        cfg.mode = mode;
        cfg.p_t_dbw = p_t_dbw;
        if (threshold > 0.0)
            cfg.crb_threshold_theta = cfg.crb_threshold_phi = threshold;
        return build_scenario(cfg);
    }

    double lifted_trace(const SdrLift &lift)
    {
        double t = 0;
        for (const auto &P : lift.Pbar)
            t += P.trace().real();
        return t;
    }

    Verdict optimizer()
    {
        Stopwatch sw;
        Verdict v;

        // (a) single user, communication only
        {
            OptScene scene;
            const UpaSpec upa = ScenarioConfig::desk().tx_array;
            scene.a = {steering_vector(upa, {0.7, 0.3})};
            scene.rho = RVec::Constant(1, 0.16);
            OptConfig oc;
            oc.mode = ModeConfig::parse("rsma-comm-only");
            oc.P_t = 1.0;
            const OptResult r = solve(scene, oc);
            const double closed = std::log2(1.0 + oc.P_t * upa.size() / 0.16);
            v.check(r.status == OptStatus::converged && std::abs(r.R_min - closed) <= 1e-3,
                    fmt::format("(a) K=1: {:.6f} vs closed form {:.6f} bits/s/Hz, status {} (tol 1e-3)", r.R_min, closed,
                                to_string(r.status)));
        }

        const std::vector<double> powers = ScenarioConfig::desk().power_list_dbw;
        std::map<std::pair<std::string, double>, double> rate;
        int runs = 0, converged = 0;
        double worst_power = 0, worst_crb = 0, worst_trace = 0, worst_ratio = 1;
        for (const std::string mode : {"rsma-comm-only", "rsma-isac-sic", "rsma-isac-nosic", "rsma-isac-nors",
                                       "sdma-comm-only", "sdma-isac-sic", "sdma-isac-nosic", "sdma-isac-nors"})
            for (double p : powers)
            {
                const Scenario sc = desk_scene(mode, p);
                const OptConfig oc = sc.opt_config();
                const OptResult r = solve(sc.opt, oc);
                ++runs;
                rate[{mode, p}] = r.status == OptStatus::infeasible ? 0.0 : r.R_min;
                if (r.status != OptStatus::converged)
                {
                    v.note(fmt::format("{} at {} dBW: {}", mode, p, to_string(r.status)));
                    continue;
                }
                ++converged;
                worst_power = std::max(worst_power, r.P.total_power() / oc.P_t - 1.0);
                worst_ratio = std::min(worst_ratio, r.eigen_ratio.minCoeff());
                if (oc.mode.enforces_crb())
                {
                    const CrbPair c = crb_pair(sc.opt.crb, r.P);
                    worst_crb = std::max({worst_crb, c.theta / oc.crb_th_theta - 1.0, c.phi / oc.crb_th_phi - 1.0});
                    const double need = crb_gain_requirement(sc.opt.crb, oc.crb_th_theta, oc.crb_th_phi);
                    const double have = (r.P.P.adjoint() * sc.opt.crb.a_tar).squaredNorm();
                    worst_trace = std::max(worst_trace, 1.0 - have / need);
                    worst_power = std::max(worst_power, lifted_trace(r.lift) / oc.P_t - 1.0);
                }
            }
        v.check(converged == runs, fmt::format("(b) {} of {} desk runs converged", converged, runs));
        v.check(worst_power <= 1e-6, fmt::format("(b) worst power excess {:.3e} relative (tol 1e-6)", worst_power));
        v.check(worst_crb <= 1e-6 && worst_trace <= 1e-6,
                fmt::format("(b) worst CRB excess {:.3e}, worst beam-gain shortfall {:.3e} relative (tol 1e-6)", worst_crb,
                            worst_trace));
        v.check(worst_ratio >= 0.9999, fmt::format("(b) smallest eigen ratio {:.8f} (required >= 0.9999)", worst_ratio));

        for (const std::string tail : {"comm-only", "isac-sic", "isac-nosic", "isac-nors"})
        {
            double margin = 1e300;
            for (double p : powers)
                margin = std::min(margin, rate[{"rsma-" + tail, p}] - rate[{"sdma-" + tail, p}]);
            v.check(margin >= -1e-6, fmt::format("(c) {}: min over powers of R_min(RSMA) - R_min(SDMA) = {:.6f}", tail, margin));
        }
        for (double p : powers)
        {
            const double a = rate[{"rsma-isac-sic", p}], b = rate[{"rsma-isac-nors", p}];
            const double rel = std::abs(a - b) / std::max(a, b);
            v.check(rel <= 0.02, fmt::format("(d) {} dBW: with radar sequence {:.6f}, without {:.6f}, difference {:.3e} (tol 2%)",
                                             p, a, b, rel));
        }
        for (double p : powers)
            v.note(fmt::format("{} dBW: RSMA/SDMA isac-sic {:.4f} / {:.4f} bits/s/Hz", p, rate[{"rsma-isac-sic", p}],
                               rate[{"sdma-isac-sic", p}]));
        const double s = sw.seconds();
        v.check(s <= 900.0, fmt::format("runtime {:.1f} s (limit 900 s)", s));
        return v;
    }

    Verdict jensen()
    {
        Verdict v;
        const Scenario sc = desk_scene("rsma-isac-nosic", 20.0);
        const int K = sc.opt.users(), n = 10000;
        std::mt19937_64 rng(103);
        PrecoderMatrix P(random_cmat(rng, sc.opt.antennas(), K + 2));
        P.P *= std::sqrt(sc.cfg.p_t_watts() / P.total_power());
        const double delta = sc.mode.delta_sic();
        const RatePair bound = ergodic_bounds(sc.opt.a, sc.opt.rho, P, delta);

        RMat rc(n, K), rp(n, K);
        const double kappa = db_to_linear(sc.cfg.kappa_db);
        for (int i = 0; i < n; ++i)
        {
            std::vector<CVec> h;
            for (int k = 0; k < K; ++k)
                h.push_back(draw_rician_gain({kappa, sc.user_gamma(k)}, rng) * sc.opt.a[k]);
            const RatePair r = instantaneous_rates(h, P, delta, sc.sigma_c2);
            rc.row(i) = r.common.transpose();
            rp.row(i) = r.priv.transpose();
        }
        double worst = -1e300;
        for (int k = 0; k < K; ++k)
            for (int which = 0; which < 2; ++which)
            {
                const RVec col = which == 0 ? RVec(rc.col(k)) : RVec(rp.col(k));
                const double mean = col.mean();
                const double se = std::sqrt((col.array() - mean).square().sum() / (n - 1) / n);
                const double b = which == 0 ? bound.common(k) : bound.priv(k);
                worst = std::max(worst, (mean - b) / se);
            }
        v.check(worst <= 3.0, fmt::format("largest (mean - bound) / standard error over {} users and both streams: {:.2f} "
                                          "(required <= 3), {} draws",
                                          K, worst, n));
        return v;
    }

    Verdict estimation()
    {
        Stopwatch sw;
        Verdict v;
        EchoExperiment ex = prepare_echo(ScenarioConfig::desk(), {});
        if (ex.opt.status != OptStatus::converged)
        {
            v.check(false, "desk precoder design did not converge: " + to_string(ex.opt.status));
            return v;
        }
        const int n_rx = ex.sc.cfg.rx_array.size();

        synthesize_trial(ex, 1, false);
        const MusicOutcome m = music_experiment(ex);
        v.check(m.music.peak == ex.truth.aoa && m.residual_at_truth <= 1e-12 * n_rx,
                fmt::format("noise-free MUSIC: peak on the true cell {}, projector residual {:.3e} (tol {:.1e})",
                            m.music.peak == ex.truth.aoa, m.residual_at_truth, 1e-12 * n_rx));
        const TrackOutcome t0 = track_experiment(ex, {0.0, false});
        const double aod_err = std::max(std::abs(std::remainder(t0.report.aod_hat.theta - ex.sc.link.aod.theta, 2 * kPi)),
                                        std::abs(t0.report.aod_hat.phi - ex.sc.link.aod.phi));
        v.check(t0.exact_bins && aod_err <= 1e-6,
                fmt::format("noise-free matched filter: exact bins {}, AOD error {:.3e} rad (tol 1e-6)", t0.exact_bins, aod_err));

        std::mt19937_64 rng(104);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double worst_rt = 0;
        int trips = 0;
        while (trips < 1000)
        {
            const Vec3 sat(4e5 * (u(rng) - 0.5), 4e5 * (u(rng) - 0.5), 3e5 + 3e5 * u(rng));
            const Vec3 tar(1e5 * (u(rng) - 0.5), 1e5 * (u(rng) - 0.5), 100.0 + 2e4 * u(rng));
            const double range = bistatic_range(sat, tar);
            if (range <= sat.norm() * (1 + 1e-9))
                continue;
            const auto aoa = angles_from_positions(Vec3::Zero(), tar, ArrayFrame::receiver_looking_up);
            const auto fix = invert_bistatic_ellipsoid(sat, direction_from_angles(aoa), range);
            worst_rt = std::max(worst_rt, (fix.target - tar).norm() / tar.norm());
            ++trips;
        }
        v.check(worst_rt <= 1e-9, fmt::format("ellipsoid round trip: max relative error {:.3e} over 1000 geometries (tol 1e-9)", worst_rt));

        const double step = ex.sc.angle_grid().theta_step();
        int exact = 0, chain = 0, music_ok = 0;
        double worst_pos = 0;
        const int trials = 100;
        for (int s = 0; s < trials; ++s)
        {
            synthesize_trial(ex, 1000 + s, true);
            const TrackOutcome t = track_experiment(ex, {0.0, false});
            exact += t.exact_bins;
            if (t.exact_bins)
                worst_pos = std::max(worst_pos, t.position_error_m);
            const MusicOutcome mm = music_experiment(ex);
            music_ok += std::abs(std::remainder(mm.music.peak.theta - ex.truth.aoa.theta, 2 * kPi)) <= step * (1 + 1e-9) &&
                        std::abs(mm.music.peak.phi - ex.truth.aoa.phi) <= step * (1 + 1e-9);
            chain += track_experiment(ex, {0.0, true}).exact_bins;
        }
        v.check(exact >= 95, fmt::format("noisy desk echo, true AOA: exact delay/Doppler bins in {}/{} trials (required >= 95)",
                                         exact, trials));
        v.note(fmt::format("MUSIC within one grid step in {}/{}; MUSIC-fed matched filter exact in {}/{}", music_ok, trials,
                           chain, trials));
        v.note(fmt::format("worst position error with exact bins {:.3f} m", worst_pos));
        const double s = sw.seconds();
        v.check(s <= 600.0, fmt::format("runtime {:.1f} s (limit 600 s)", s));
        return v;
    }

    Verdict monotonicity()
    {
        Verdict v;
        const std::vector<double> thresholds{1e-5, 5e-6, 2.5e-6};
        const std::vector<double> powers = ScenarioConfig::desk().power_list_dbw;
        // Solver precision: changes below 1e-6 relative are not resolved
        const double tol = 1e-6;
        for (const std::string mode : {"rsma-isac-sic", "sdma-isac-sic"})
        {
            RMat R(thresholds.size(), powers.size());
            int bad_status = 0;
            for (std::size_t i = 0; i < thresholds.size(); ++i)
                for (std::size_t j = 0; j < powers.size(); ++j)
                {
                    const Scenario sc = desk_scene(mode, powers[j], thresholds[i]);
                    const OptResult r = solve(sc.opt, sc.opt_config());
                    bad_status += r.status != OptStatus::converged;
                    R(i, j) = r.status == OptStatus::infeasible ? 0.0 : r.R_min;
                }
            double worst_p = 1e300, worst_t = 1e300;
            for (Eigen::Index i = 0; i < R.rows(); ++i)
                for (Eigen::Index j = 0; j < R.cols(); ++j)
                {
                    if (j > 0)
                        worst_p = std::min(worst_p, (R(i, j) - R(i, j - 1)) / R(i, j - 1));
                    if (i > 0)
                        worst_t = std::min(worst_t, (R(i - 1, j) - R(i, j)) / R(i - 1, j));
                }
            v.check(bad_status == 0, fmt::format("{}: all 9 grid points converged ({} did not)", mode, bad_status));
            v.check(worst_p >= -tol, fmt::format("{}: smallest relative step along P_t {:.3e} (tol -1e-6)", mode, worst_p));
            v.check(worst_t >= -tol,
                    fmt::format("{}: smallest relative drop when tightening thresholds {:.3e} (tol -1e-6)", mode, worst_t));
            for (Eigen::Index i = 0; i < R.rows(); ++i)
                v.note(fmt::format("{} threshold {:.1e}: {:.6f} {:.6f} {:.6f}", mode, thresholds[i], R(i, 0), R(i, 1), R(i, 2)));
        }
        return v;
    }

    Verdict paper_scale_gain()
    {
        Verdict v;
        ScenarioConfig cfg = ScenarioConfig::paper();
        cfg.p_t_dbw = 20.0;
        cfg.crb_threshold_theta = cfg.crb_threshold_phi = 8e-7;
        double sum_r = 0, sum_s = 0;
        int infeasible = 0;
        for (int d = 0; d < cfg.monte_carlo_drops; ++d)
        {
            for (const std::string mode : {"rsma-isac-sic", "sdma-isac-sic"})
            {
                ScenarioConfig c = cfg;
                c.mode = mode;
                const SweepPoint p = run_sweep_task({c, d});
                infeasible += p.status == OptStatus::infeasible;
                (mode[0] == 'r' ? sum_r : sum_s) += p.R_min;
            }
            if (d == 0 && infeasible == 2)
                break;
        }
        if (infeasible > 0)
        {
            const Scenario sc = build_scenario(cfg);
            const double need = crb_gain_requirement(sc.opt.crb, 8e-7, 8e-7);
            const double avail = cfg.p_t_watts() * sc.opt.crb.a_tar.squaredNorm();
            v.check(false, fmt::format("{} infeasible runs: CRB needs beam gain {:.1f}, P_t N_Tx allows {:.1f}", infeasible,
                                       need, avail));
            return v;
        }
        const double gain = sum_r / sum_s - 1.0;
        v.check(gain >= 0.2 && gain <= 0.8, fmt::format("RSMA over SDMA gain {:.1f}% (required 20%..80%)", 100 * gain));
        return v;
    }
}

int main(int argc, char **argv)
{
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"fim-oracle", fim_oracle},     {"crb-identity", crb_identity}, {"pathloss", pathloss},
        {"optimizer", optimizer},       {"jensen", jensen},             {"estimation", estimation},
        {"monotonicity", monotonicity}, {"paper-scale-gain", paper_scale_gain}};

    std::vector<std::string> wanted(argv + 1, argv + argc);
    if (wanted.empty())
        for (const auto &c : criteria)
            if (c.first != "paper-scale-gain")
                wanted.push_back(c.first);

    int failures = 0;
    for (const auto &name : wanted)
    {
        const auto it = std::find_if(criteria.begin(), criteria.end(), [&](const auto &c) { return c.first == name; });
        if (it == criteria.end())
        {
            std::cerr << "unknown criterion '" << name << "'\n";
            return 2;
        }
        Stopwatch sw;
        Verdict v;
        try
        {
            v = it->second();
        }
        catch (const std::exception &e)
        {
            v.check(false, std::string("exception: ") + e.what());
        }
        failures += !v.pass;
        std::cout << fmt::format("{} {} ({:.1f} s)", v.pass ? "PASS" : "FAIL", name, sw.seconds()) << '\n';
        for (const auto &d : v.details)
            std::cout << "    " << d << '\n';
        std::cout.flush();
    }
    return failures == 0 ? 0 : 1;
}
