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

#include "leoisac/precoder_opt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace leoisac
{
    namespace
    {
        constexpr double kLn2 = std::numbers::ln2;

        std::vector<bool> present_columns(const ModeConfig &mode, int K)
        {
            std::vector<bool> on(K + 2, true);
            on[K] = mode.has_common();
            on[K + 1] = mode.has_radar();
            return on;
        }

        double quad(const CVec &a, const CMat &P) { return a.dot(P * a).real(); }

        // Interference-plus-noise terms of user k, in watts
        struct Denominators
        {
            double uc = 0; // all privates + common + delta radar + rho
            double ue = 0; // all privates + delta radar + rho
            double uf = 0; // privates except k + delta radar + rho
        };

        Denominators denominators(const OptScene &scene, const ModeConfig &mode, const std::vector<CMat> &Pbar,
                                  int k)
        {
            const int K = scene.users();
            const double delta = mode.delta_sic();
            Denominators d;
            double priv_all = 0, own = 0;
            for (int j = 0; j < K; ++j)
            {
                const double g = quad(scene.a[k], Pbar[j]);
                priv_all += g;
                if (j == k)
                    own = g;
            }
            const double radar = mode.has_radar() ? delta * quad(scene.a[k], Pbar[K + 1]) : 0.0;
            const double common = mode.has_common() ? quad(scene.a[k], Pbar[K]) : 0.0;
            d.ue = priv_all + radar + scene.rho(k);
            d.uf = priv_all - own + radar + scene.rho(k);
            d.uc = d.ue + common;
            return d;
        }

        CVec normalized(const CVec &v) { return v / v.norm(); }
    }

    std::string to_string(OptStatus status)
    {
        switch (status)
        {
        case OptStatus::converged:
            return "converged";
        case OptStatus::iter_cap:
            return "iter-cap";
        default:
            return "infeasible";
        }
    }

    std::string to_string(ConstraintTag tag)
    {
        switch (tag)
        {
        case ConstraintTag::power:
            return "power";
        case ConstraintTag::crb:
            return "crb";
        case ConstraintTag::rank_relaxed:
            return "rank-relaxed";
        case ConstraintTag::common_nonneg:
            return "common-nonneg";
        case ConstraintTag::min_rate:
            return "min-rate";
        case ConstraintTag::common_decoding:
            return "common-decoding";
        case ConstraintTag::common_exp_bound:
            return "common-exp-bound";
        case ConstraintTag::private_exp_bound:
            return "private-exp-bound";
        case ConstraintTag::common_sca:
            return "common-sca";
        default:
            return "private-sca";
        }
    }

    void OptScene::validate() const
    {
        if (a.empty())
            throw std::invalid_argument("OptScene: at least one user is required");
        if (rho.size() != int(a.size()))
            throw std::invalid_argument("OptScene: rho length must equal the user count");
        for (const auto &v : a)
            if (v.size() != a.front().size() || v.size() == 0)
                throw std::invalid_argument("OptScene: steering vectors must share one nonzero length");
        for (int k = 0; k < rho.size(); ++k)
            if (!(rho(k) > 0.0))
                throw std::invalid_argument("OptScene: rho must be positive");
    }

    void OptConfig::validate() const
    {
        if (!(eps_rank > 0.0 && eps_rank < 1.0))
            throw std::invalid_argument("OptConfig: eps_rank must lie in (0, 1)");
        if (!(delta0 > 0.0) || !(eps_obj > 0.0))
            throw std::invalid_argument("OptConfig: delta0 and eps_obj must be positive");
        if (m_max < 1 || n_max < 1)
            throw std::invalid_argument("OptConfig: iteration caps must be at least 1");
        if (!(P_t > 0.0))
            throw std::invalid_argument("OptConfig: P_t must be positive");
        if (mode.enforces_crb() && (!(crb_th_theta > 0.0) || !(crb_th_phi > 0.0)))
            throw std::invalid_argument("OptConfig: CRB thresholds must be positive");
        if (starts.empty())
            throw std::invalid_argument("OptConfig: at least one start is required");
        for (const auto &s : starts)
            if (!(s.user_share >= 0.0) || !(s.common_share >= 0.0) || s.user_share + s.common_share > 1.0)
                throw std::invalid_argument("OptConfig: start shares must be nonnegative and sum to at most 1");
    }

    double eigen_ratio(const CMat &P)
    {
        const double tr = P.trace().real();
        if (!(tr > 0.0))
            return 1.0;
        return std::min(1.0, principal_component(P).value / tr);
    }

    PrincipalPair principal_component(const CMat &P)
    {
        Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (P + P.adjoint()));
        const int n = int(P.rows());
        const double top = es.eigenvalues()(n - 1);
        int pick = n - 1;
        while (pick > 0 && top - es.eigenvalues()(pick - 1) <= 1e-9 * std::max(1.0, std::abs(top)))
            --pick;
        PrincipalPair pp;
        pp.value = std::max(0.0, top);
        pp.vector = es.eigenvectors().col(pick);
        Eigen::Index imax = 0;
        pp.vector.cwiseAbs().maxCoeff(&imax);
        const cdouble ph = pp.vector(imax) / std::abs(pp.vector(imax));
        pp.vector *= std::conj(ph);
        return pp;
    }

    LinearizationPoint linearize_at(const OptScene &scene, const ModeConfig &mode, const std::vector<CMat> &Pbar)
    {
        const int K = scene.users();
        LinearizationPoint lin;
        lin.d0.resize(K);
        lin.f0.resize(K);
        for (int k = 0; k < K; ++k)
        {
            const auto d = denominators(scene, mode, Pbar, k);
            lin.d0(k) = std::log(d.ue);
            lin.f0(k) = std::log(d.uf);
        }
        return lin;
    }

    Subproblem build_subproblem(const OptScene &scene, const OptConfig &cfg, const RankState &rank,
                                const LinearizationPoint &lin)
    {
        scene.validate();
        const int K = scene.users(), N = scene.antennas();
        const auto &mode = cfg.mode;
        const bool common = mode.has_common(), radar = mode.has_radar(), crb = mode.enforces_crb();
        const double delta = mode.delta_sic();
        const double s = cfg.P_t, logs = std::log(s);
        if (rank.w.size() != K + 2 || int(rank.v.size()) != K + 2)
            throw std::invalid_argument("build_subproblem: rank state must cover K+2 columns");
        if (lin.f0.size() != K || (common && lin.d0.size() != K))
            throw std::invalid_argument("build_subproblem: linearization point has the wrong length");

        Subproblem sub;
        sub.power_scale = s;
        auto &prog = sub.program;
        const auto on = present_columns(mode, K);
        sub.column_block.assign(K + 2, -1);
        sub.rank_implied.assign(K + 2, false);

        const int q_tar = K;
        for (int j = 0; j < K + 2; ++j)
        {
            if (!on[j])
                continue;
            PsdBlock blk;
            const double w = rank.w(j);
            if (w >= 1.0)
            {
                blk.basis = normalized(rank.v[j]);
                sub.rank_implied[j] = true;
            }
            else
                blk.basis = CMat::Identity(N, N);
            blk.dictionary = scene.a;
            blk.dictionary.push_back(crb ? scene.crb.a_tar : CVec(CVec::Zero(N)));
            blk.dictionary.push_back(rank.v[j]);
            sub.column_block[j] = int(prog.blocks.size());
            sub.block_column.push_back(j);
            prog.blocks.push_back(std::move(blk));
        }
        const int q_v = K + 1;

        auto add_scalar = [&](double lo, double hi) {
            prog.scalars.push_back({lo, hi});
            return int(prog.scalars.size()) - 1;
        };
        sub.i_rmin = add_scalar(-50.0, 100.0);
        for (int k = 0; k < K; ++k)
        {
            if (common)
            {
                sub.i_C.push_back(add_scalar(-1.0, 100.0));
                sub.i_c.push_back(add_scalar(-80.0, 80.0));
                sub.i_d.push_back(add_scalar(-80.0, 80.0));
            }
            sub.i_e.push_back(add_scalar(-80.0, 80.0));
            sub.i_f.push_back(add_scalar(-80.0, 80.0));
        }
        prog.objective = RVec::Zero(int(prog.scalars.size()));
        prog.objective(sub.i_rmin) = -1.0;

        auto add = [&](ConeConstraint c, ConstraintTag tag, int index) {
            prog.constraints.push_back(std::move(c));
            sub.tags.push_back(tag);
            sub.tag_index.push_back(index);
        };
        auto user_terms = [&](AffineForm &f, int k, double sign, bool with_common, int skip_private) {
            for (int j = 0; j < K; ++j)
                if (j != skip_private)
                    f.blocks.push_back({sub.column_block[j], 0.0, {{k, sign}}});
            if (with_common && common)
                f.blocks.push_back({sub.column_block[K], 0.0, {{k, sign}}});
            if (radar && delta > 0.0)
                f.blocks.push_back({sub.column_block[K + 1], 0.0, {{k, sign * delta}}});
        };

        {
            ConeConstraint c;
            c.form.constant = 1.0;
            for (size_t b = 0; b < prog.blocks.size(); ++b)
                c.form.blocks.push_back({int(b), -1.0, {}});
            add(std::move(c), ConstraintTag::power, -1);
        }
        if (crb)
        {
            ConeConstraint c;
            c.form.constant = -crb_gain_requirement(scene.crb, cfg.crb_th_theta, cfg.crb_th_phi) / s;
            for (size_t b = 0; b < prog.blocks.size(); ++b)
                c.form.blocks.push_back({int(b), 0.0, {{q_tar, 1.0}}});
            add(std::move(c), ConstraintTag::crb, -1);
        }
        for (int j = 0; j < K + 2; ++j)
        {
            if (!on[j] || sub.rank_implied[j] || !(rank.w(j) > 0.0))
                continue;
            ConeConstraint c;
            c.form.blocks.push_back({sub.column_block[j], -rank.w(j), {{q_v, 1.0}}});
            add(std::move(c), ConstraintTag::rank_relaxed, j);
        }
        for (int k = 0; k < K; ++k)
        {
            const double rho = scene.rho(k) / s;
            if (common)
            {
                ConeConstraint c;
                c.form.scalars = {{sub.i_C[k], 1.0}};
                add(std::move(c), ConstraintTag::common_nonneg, k);
            }
            {
                ConeConstraint c;
                c.form.scalars = {{sub.i_e[k], 1.0 / kLn2}, {sub.i_f[k], -1.0 / kLn2}, {sub.i_rmin, -1.0}};
                if (common)
                    c.form.scalars.push_back({sub.i_C[k], 1.0});
                add(std::move(c), ConstraintTag::min_rate, k);
            }
            if (common)
            {
                ConeConstraint c;
                c.form.scalars = {{sub.i_c[k], 1.0 / kLn2}, {sub.i_d[k], -1.0 / kLn2}};
                for (int i = 0; i < K; ++i)
                    c.form.scalars.push_back({sub.i_C[i], -1.0});
                add(std::move(c), ConstraintTag::common_decoding, k);

                ConeConstraint e;
                e.kind = ConeKind::log_hypograph;
                e.form.scalars = {{sub.i_c[k], 1.0}};
                e.arg.constant = rho;
                user_terms(e.arg, k, 1.0, true, -1);
                add(std::move(e), ConstraintTag::common_exp_bound, k);
            }
            {
                ConeConstraint e;
                e.kind = ConeKind::log_hypograph;
                e.form.scalars = {{sub.i_e[k], 1.0}};
                e.arg.constant = rho;
                user_terms(e.arg, k, 1.0, false, -1);
                add(std::move(e), ConstraintTag::private_exp_bound, k);
            }
            // u <= exp(x0) (x - x0 + 1), written as exp(x0)(1 - x0) - rho + exp(x0) x - (interference) >= 0
            if (common)
            {
                const double x0 = lin.d0(k) - logs, ex = std::exp(x0);
                ConeConstraint c;
                c.form.constant = ex * (1.0 - x0) - rho;
                c.form.scalars = {{sub.i_d[k], ex}};
                user_terms(c.form, k, -1.0, false, -1);
                add(std::move(c), ConstraintTag::common_sca, k);
            }
            {
                const double x0 = lin.f0(k) - logs, ex = std::exp(x0);
                ConeConstraint c;
                c.form.constant = ex * (1.0 - x0) - rho;
                c.form.scalars = {{sub.i_f[k], ex}};
                user_terms(c.form, k, -1.0, false, k);
                add(std::move(c), ConstraintTag::private_sca, k);
            }
        }
        return sub;
    }

    SdrLift point_to_lift(const Subproblem &sub, const ConicPoint &pt, int k_users, int n_tx)
    {
        const double s = sub.power_scale, logs = std::log(s);
        SdrLift L;
        L.Pbar.assign(k_users + 2, CMat::Zero(n_tx, n_tx));
        for (size_t b = 0; b < sub.block_column.size(); ++b)
        {
            CMat P = s * lift_block(sub.program.blocks[b], pt.X[b]);
            L.Pbar[sub.block_column[b]] = 0.5 * (P + P.adjoint());
        }
        L.R_min = pt.s(sub.i_rmin);
        auto gather = [&](const std::vector<int> &idx, double shift) {
            RVec v(int(idx.size()));
            for (size_t i = 0; i < idx.size(); ++i)
                v(i) = pt.s(idx[i]) + shift;
            return v;
        };
        L.C = sub.i_C.empty() ? RVec(RVec::Zero(k_users)) : gather(sub.i_C, 0.0);
        L.c = gather(sub.i_c, logs);
        L.d = gather(sub.i_d, logs);
        L.e = gather(sub.i_e, logs);
        L.f = gather(sub.i_f, logs);
        return L;
    }

    ConicPoint lift_to_point(const Subproblem &sub, const SdrLift &lift)
    {
        const double s = sub.power_scale, logs = std::log(s);
        ConicPoint pt;
        for (size_t b = 0; b < sub.block_column.size(); ++b)
            pt.X.push_back(reduce_block(sub.program.blocks[b], lift.Pbar[sub.block_column[b]]) / s);
        pt.s = RVec::Zero(int(sub.program.scalars.size()));
        pt.s(sub.i_rmin) = lift.R_min;
        auto scatter = [&](const std::vector<int> &idx, const RVec &v, double shift) {
            for (size_t i = 0; i < idx.size() && int(i) < v.size(); ++i)
                pt.s(idx[i]) = v(i) - shift;
        };
        scatter(sub.i_C, lift.C, 0.0);
        scatter(sub.i_c, lift.c, logs);
        scatter(sub.i_d, lift.d, logs);
        scatter(sub.i_e, lift.e, logs);
        scatter(sub.i_f, lift.f, logs);
        return pt;
    }

    InitPoint init_linearization(const OptScene &scene, const OptConfig &cfg, const InitSplit &split)
    {
        scene.validate();
        cfg.validate();
        const int K = scene.users(), N = scene.antennas();
        const auto &mode = cfg.mode;
        InitPoint ip;
        auto &L = ip.lift;
        L.Pbar.assign(K + 2, CMat::Zero(N, N));

        double p_tar = 0.0;
        if (mode.enforces_crb())
        {
            const double need = crb_gain_requirement(scene.crb, cfg.crb_th_theta, cfg.crb_th_phi);
            const double per_watt = scene.crb.a_tar.squaredNorm(); // MRT beam gain per watt
            if (need > cfg.P_t * per_watt)
                return ip;
            p_tar = std::min(1.1 * need / per_watt, cfg.P_t);
            const CVec u = normalized(scene.crb.a_tar);
            const CMat T = u * u.adjoint();
            if (mode.has_radar())
                L.Pbar[K + 1] = p_tar * T;
            else if (mode.has_common())
                L.Pbar[K] = p_tar * T;
            else
                for (int k = 0; k < K; ++k)
                    L.Pbar[k] = (p_tar / K) * T;
        }
        const double rest = cfg.P_t - p_tar;
        for (int k = 0; k < K; ++k)
        {
            const CVec u = normalized(scene.a[k]);
            L.Pbar[k] += (split.user_share * rest / K) * u * u.adjoint();
        }
        if (mode.has_common() && split.common_share > 0.0)
        {
            CVec sum = CVec::Zero(N);
            for (int k = 0; k < K; ++k)
                sum += normalized(scene.a[k]);
            if (sum.norm() > 0.0)
            {
                const CVec u = normalized(sum);
                L.Pbar[K] += split.common_share * rest * u * u.adjoint();
            }
        }
        ip.feasible = true;
        ip.lin = linearize_at(scene, mode, L.Pbar);

        L.C = RVec::Zero(K);
        L.e.resize(K);
        L.f = ip.lin.f0;
        if (mode.has_common())
        {
            L.c.resize(K);
            L.d = ip.lin.d0;
        }
        L.R_min = std::numeric_limits<double>::infinity();
        for (int k = 0; k < K; ++k)
        {
            const auto d = denominators(scene, mode, L.Pbar, k);
            L.e(k) = std::log(d.ue);
            if (mode.has_common())
                L.c(k) = std::log(d.uc);
            L.R_min = std::min(L.R_min, (L.e(k) - L.f(k)) / kLn2);
        }
        return ip;
    }

    SrocUpdate sroc_schedule_update(const SrocState &prev, const std::vector<CMat> &solved, bool solvable,
                                    double delta0)
    {
        SrocUpdate up;
        up.next.delta = solvable ? delta0 : prev.delta / 2.0;
        up.next.Pbar = solvable ? solved : prev.Pbar;
        up.underflow = up.next.delta < 1e-12;
        up.next.w.resize(int(up.next.Pbar.size()));
        for (size_t j = 0; j < up.next.Pbar.size(); ++j)
            up.next.w(j) = std::min(1.0, eigen_ratio(up.next.Pbar[j]) + up.next.delta);
        return up;
    }

    namespace
    {
        RankState rank_state(const SrocState &st, const std::vector<bool> &on, const OptScene &scene)
        {
            RankState r;
            const int cols = int(st.Pbar.size());
            r.w = st.w;
            r.v.resize(cols);
            for (int j = 0; j < cols; ++j)
            {
                if (on[j] && st.Pbar[j].trace().real() > 0.0)
                    r.v[j] = principal_component(st.Pbar[j]).vector;
                else
                    r.v[j] = normalized(scene.a[std::min(j, scene.users() - 1)]);
            }
            return r;
        }

        void extract(const OptScene &scene, const OptConfig &cfg, const std::vector<bool> &on, OptResult &res)
        {
            const int K = scene.users(), N = scene.antennas();
            res.P = PrecoderMatrix(N, K);
            res.eigen_ratio = RVec::Ones(K + 2);
            for (int j = 0; j < K + 2; ++j)
            {
                if (!on[j])
                    continue;
                const auto pc = principal_component(res.lift.Pbar[j]);
                res.P.P.col(j) = std::sqrt(pc.value) * pc.vector;
                res.eigen_ratio(j) = eigen_ratio(res.lift.Pbar[j]);
            }
            res.P.apply_mode(cfg.mode);
            res.R_min_lifted = res.lift.R_min;

            const auto bounds = ergodic_bounds(scene.a, scene.rho, res.P, cfg.mode.delta_sic());
            RVec C = res.lift.C.cwiseMax(0.0);
            if (!cfg.mode.has_common())
                C.setZero();
            const double cap = bounds.common.minCoeff();
            if (C.sum() > cap)
                C *= cap > 0.0 ? cap / C.sum() : 0.0;
            res.C.C = C;
            res.R_min = min_total_rate(bounds, res.C, 1e-9);
        }
    }

    namespace
    {
        OptResult solve_from(const OptScene &scene, const OptConfig &cfg, const InitSplit &split)
        {
            const int K = scene.users(), N = scene.antennas();
            const auto on = present_columns(cfg.mode, K);
            OptResult res;

            const auto init = init_linearization(scene, cfg, split);
            if (!init.feasible)
            {
                res.status = OptStatus::infeasible;
                res.P = PrecoderMatrix(N, K);
                return res;
            }

            SrocState st;
            st.delta = cfg.delta0;
            st.w = RVec::Zero(K + 2);
            for (int j = 0; j < K + 2; ++j)
                if (!on[j])
                    st.w(j) = 1.0;
            st.Pbar = init.lift.Pbar;
            SdrLift accepted = init.lift;
            bool have_accepted = false;
            bool rank_met = false; // the last accepted solve already satisfies eps_rank
            res.status = OptStatus::iter_cap;

            for (int m = 0; m < cfg.m_max; ++m)
            {
                res.outer_iterations = m + 1;
                const RankState rank = rank_state(st, on, scene);
                res.w_trajectory.push_back(rank.w);

                // Inner SCA loop, linearized at the retained matrices
                LinearizationPoint lin = linearize_at(scene, cfg.mode, st.Pbar);
                SdrLift cur = accepted;
                cur.Pbar = st.Pbar;
                std::vector<double> trace;
                ConicPoint guess;
                for (int n = 0; n < cfg.n_max; ++n)
                {
                    const Subproblem sub = build_subproblem(scene, cfg, rank, lin);
                    if (n == 0)
                        guess = lift_to_point(sub, cur);
                    const auto sol = solve_conic(sub.program, guess, cfg.solver);
                    ++res.subproblem_solves;
                    if (sol.status != SolveStatus::optimal)
                        break;
                    // The previous iterate stays feasible, so a lower value is solver error: stop at the previous one
                    SdrLift next = point_to_lift(sub, sol.point, K, N);
                    if (!trace.empty() && next.R_min < trace.back())
                        break;
                    cur = std::move(next);
                    guess = sol.point;
                    trace.push_back(cur.R_min);
                    lin = linearize_at(scene, cfg.mode, cur.Pbar);
                    if (trace.size() >= 2 && std::abs(trace.back() - trace[trace.size() - 2]) <= cfg.eps_obj)
                        break;
                }
                res.inner_trace.push_back(trace);
                const bool solvable = !trace.empty();

                if (!solvable)
                {
                    if (!have_accepted)
                    {
                        res.status = OptStatus::infeasible;
                        res.P = PrecoderMatrix(N, K);
                        return res;
                    }
                    if (rank_met)
                    {
                        // The exact rank-one pass failed; keep the accepted iterate, which meets eps_rank
                        res.status = OptStatus::converged;
                        break;
                    }
                }
                else
                {
                    accepted = cur;
                    have_accepted = true;
                    bool all_one = true;
                    rank_met = true;
                    for (int j = 0; j < K + 2; ++j)
                    {
                        if (!on[j])
                            continue;
                        all_one = all_one && rank.w(j) >= 1.0;
                        if (cur.Pbar[j].trace().real() > 1e-9 * cfg.P_t && eigen_ratio(cur.Pbar[j]) < cfg.eps_rank)
                            rank_met = false;
                    }
                    if (all_one || (rank_met && m + 1 == cfg.m_max))
                    {
                        res.status = OptStatus::converged;
                        break;
                    }
                }

                auto up = sroc_schedule_update(st, cur.Pbar, solvable, cfg.delta0);
                for (int j = 0; j < K + 2; ++j)
                    if (!on[j])
                        up.next.w(j) = 1.0;
                if (up.underflow)
                    break;
                st = std::move(up.next);
            }

            res.lift = accepted;
            if (!have_accepted)
                res.status = OptStatus::iter_cap;
            extract(scene, cfg, on, res);
            return res;
        }
    }

    OptResult solve(const OptScene &scene, const OptConfig &cfg)
    {
        scene.validate();
        cfg.validate();
        auto rank = [](const OptResult &r) { return r.status == OptStatus::converged ? 0 : (r.status == OptStatus::iter_cap ? 1 : 2); };
        OptResult best;
        int solves = 0;
        for (std::size_t i = 0; i < cfg.starts.size(); ++i)
        {
            OptResult r = solve_from(scene, cfg, cfg.starts[i]);
            solves += r.subproblem_solves;
            if (i == 0 || rank(r) < rank(best) || (rank(r) == rank(best) && r.R_min > best.R_min))
                best = std::move(r);
            if (best.status == OptStatus::infeasible && i == 0)
                break;
        }
        best.subproblem_solves = solves;
        return best;
    }
}
