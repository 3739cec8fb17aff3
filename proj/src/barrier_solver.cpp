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

#include "leoisac/barrier_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace leoisac
{
    namespace
    {
        constexpr double kInf = std::numeric_limits<double>::infinity();

        // Flattened view of a program: every constraint owns one (nonnegative) or two (log) rows
        class Engine
        {
        public:
            explicit Engine(const ConicProgram &p) : prog(p)
            {
                const int nb = int(prog.blocks.size());
                ns = int(prog.scalars.size());
                Z.resize(nb);
                brow.resize(nb);
                dict_norm2.resize(nb);
                for (int j = 0; j < nb; ++j)
                {
                    const auto &blk = prog.blocks[j];
                    const int Q = int(blk.dictionary.size());
                    Z[j].resize(blk.basis.cols(), Q);
                    dict_norm2[j].resize(Q);
                    for (int q = 0; q < Q; ++q)
                    {
                        Z[j].col(q) = blk.basis.adjoint() * blk.dictionary[q];
                        dict_norm2[j](q) = Z[j].col(q).squaredNorm();
                    }
                }
                for (const auto &con : prog.constraints)
                {
                    con_row.push_back(int(rows.size()));
                    rows.push_back(&con.form);
                    if (con.kind == ConeKind::log_hypograph)
                        rows.push_back(&con.arg);
                }
                m = int(rows.size());
                constant = RVec::Zero(m);
                A = RMat::Zero(m, ns);
                std::vector<std::vector<std::pair<int, const BlockTerm *>>> touch(nb);
                for (int r = 0; r < m; ++r)
                {
                    constant(r) = rows[r]->constant;
                    for (auto [s, a] : rows[r]->scalars)
                        A(r, s) += a;
                    for (const auto &bt : rows[r]->blocks)
                        touch[bt.block].push_back({r, &bt});
                }
                for (int j = 0; j < nb; ++j)
                {
                    auto &br = brow[j];
                    const int mj = int(touch[j].size());
                    br.row.resize(mj);
                    br.alpha = RVec::Zero(mj);
                    br.w = RMat::Zero(mj, Z[j].cols());
                    for (int i = 0; i < mj; ++i)
                    {
                        br.row[i] = touch[j][i].first;
                        br.alpha(i) += touch[j][i].second->identity;
                        for (auto [q, w] : touch[j][i].second->rank_one)
                            br.w(i, q) += w;
                    }
                }
            }

            const ConicProgram &prog;
            int ns = 0, m = 0;
            std::vector<CMat> Z;
            std::vector<RVec> dict_norm2;
            std::vector<const AffineForm *> rows;
            std::vector<int> con_row;
            RVec constant;
            RMat A;
            struct BlockRows
            {
                std::vector<int> row;
                RVec alpha;
                RMat w;
            };
            std::vector<BlockRows> brow;

            // Row values without constants
            RVec linear_part(const ConicPoint &pt) const
            {
                RVec v = A * pt.s;
                for (size_t j = 0; j < brow.size(); ++j)
                {
                    const auto &br = brow[j];
                    if (br.row.empty())
                        continue;
                    const CMat XZ = pt.X[j] * Z[j];
                    RVec diagS(Z[j].cols());
                    for (int q = 0; q < Z[j].cols(); ++q)
                        diagS(q) = Z[j].col(q).dot(XZ.col(q)).real();
                    const double trX = pt.X[j].trace().real();
                    const RVec contrib = br.alpha * trX + br.w * diagS;
                    for (size_t i = 0; i < br.row.size(); ++i)
                        v(br.row[i]) += contrib(i);
                }
                return v;
            }

            RVec values(const ConicPoint &pt) const { return constant + linear_part(pt); }

            // Barrier plus t c^T s; +inf outside the domain
            double merit(const ConicPoint &pt, const RVec &fv, double t) const
            {
                double f = t * prog.objective.dot(pt.s);
                for (size_t j = 0; j < pt.X.size(); ++j)
                {
                    Eigen::LLT<CMat> llt(pt.X[j]);
                    if (llt.info() != Eigen::Success)
                        return kInf;
                    const auto &Lm = llt.matrixLLT();
                    for (int i = 0; i < Lm.rows(); ++i)
                    {
                        const double d = Lm(i, i).real();
                        if (!(d > 0.0))
                            return kInf;
                        f -= 2.0 * std::log(d);
                    }
                }
                for (size_t c = 0; c < prog.constraints.size(); ++c)
                {
                    const int r = con_row[c];
                    if (prog.constraints[c].kind == ConeKind::nonnegative)
                    {
                        if (!(fv(r) > 0.0))
                            return kInf;
                        f -= std::log(fv(r));
                    }
                    else
                    {
                        const double u = fv(r + 1);
                        if (!(u > 0.0))
                            return kInf;
                        const double psi = std::log(u) - fv(r);
                        if (!(psi > 0.0))
                            return kInf;
                        f -= std::log(psi) + std::log(u);
                    }
                }
                for (int s = 0; s < ns; ++s)
                {
                    const double a = pt.s(s) - prog.scalars[s].lo, b = prog.scalars[s].hi - pt.s(s);
                    if (!(a > 0.0) || !(b > 0.0))
                        return kInf;
                    f -= std::log(a) + std::log(b);
                }
                return f;
            }

            struct Step
            {
                ConicPoint dir;
                double decrement2 = 0; // -g^T dir
                double slope = 0;      // g^T dir
            };

            Step newton(const ConicPoint &pt, const RVec &fv, double t) const
            {
                const int nb = int(pt.X.size());
                RVec lam = RVec::Zero(m);
                RMat Lam = RMat::Zero(m, m);
                for (size_t c = 0; c < prog.constraints.size(); ++c)
                {
                    const int r = con_row[c];
                    if (prog.constraints[c].kind == ConeKind::nonnegative)
                    {
                        lam(r) = -1.0 / fv(r);
                        Lam(r, r) = 1.0 / (fv(r) * fv(r));
                    }
                    else
                    {
                        const double u = fv(r + 1), psi = std::log(u) - fv(r);
                        lam(r + 1) = -1.0 / (psi * u) - 1.0 / u;
                        lam(r) = 1.0 / psi;
                        Lam(r + 1, r + 1) = 1.0 / (psi * psi * u * u) + 1.0 / (psi * u * u) + 1.0 / (u * u);
                        Lam(r, r + 1) = Lam(r + 1, r) = -1.0 / (psi * psi * u);
                        Lam(r, r) = 1.0 / (psi * psi);
                    }
                }

                RVec gD(ns), hD(ns);
                for (int s = 0; s < ns; ++s)
                {
                    const double a = pt.s(s) - prog.scalars[s].lo, b = prog.scalars[s].hi - pt.s(s);
                    gD(s) = t * prog.objective(s) - 1.0 / a + 1.0 / b;
                    hD(s) = 1.0 / (a * a) + 1.0 / (b * b);
                }

                // W = M D^-1 M^T and h = M D^-1 g_D
                RMat W = A * hD.cwiseInverse().asDiagonal() * A.transpose();
                RVec h = A * gD.cwiseQuotient(hD);
                std::vector<CMat> XZ(nb), X2(nb);
                std::vector<RVec> diagS(nb);
                for (int j = 0; j < nb; ++j)
                {
                    const auto &br = brow[j];
                    const CMat &X = pt.X[j];
                    XZ[j] = X * Z[j];
                    X2[j] = X * X;
                    const int Q = int(Z[j].cols());
                    diagS[j].resize(Q);
                    for (int q = 0; q < Q; ++q)
                        diagS[j](q) = Z[j].col(q).dot(XZ[j].col(q)).real();
                    if (br.row.empty())
                        continue;
                    const CMat S = Z[j].adjoint() * XZ[j];
                    const RMat S2 = S.cwiseAbs2();
                    const CMat T = XZ[j].adjoint() * XZ[j];
                    RVec diagT(Q);
                    for (int q = 0; q < Q; ++q)
                        diagT(q) = T(q, q).real();
                    const double trX2 = X.squaredNorm();
                    const double trX = X.trace().real();
                    const RVec wT = br.w * diagT;
                    const RMat Wj = br.alpha * br.alpha.transpose() * trX2 + br.alpha * wT.transpose() +
                                    wT * br.alpha.transpose() + br.w * S2 * br.w.transpose();
                    const RVec lin = br.alpha * trX + br.w * diagS[j];
                    const int mj = int(br.row.size());
                    for (int a = 0; a < mj; ++a)
                    {
                        h(br.row[a]) -= lin(a);
                        for (int b = 0; b < mj; ++b)
                            W(br.row[a], br.row[b]) += Wj(a, b);
                    }
                }

                // (I + W Lam) z = -h - W lam, solved in symmetric form through Lam = L L^T
                const RVec rhs = -h - W * lam;
                RMat Lf;
                {
                    // Lam is block diagonal with 1x1 and 2x2 positive definite blocks
                    Eigen::LLT<RMat> llt(Lam);
                    Lf = llt.matrixL();
                }
                RMat K = Lf.transpose() * W * Lf;
                K.diagonal().array() += 1.0;
                const RVec y = K.ldlt().solve(Lf.transpose() * rhs);
                const RVec gam = lam + Lf * y;

                Step st;
                st.dir.X.resize(nb);
                double gtd = 0.0;
                for (int j = 0; j < nb; ++j)
                {
                    const auto &br = brow[j];
                    const CMat &X = pt.X[j];
                    double a = 0.0;
                    RVec bq = RVec::Zero(Z[j].cols());
                    for (size_t i = 0; i < br.row.size(); ++i)
                    {
                        a += gam(br.row[i]) * br.alpha(i);
                        bq += gam(br.row[i]) * br.w.row(i).transpose();
                    }
                    CMat D = X - a * X2[j] - XZ[j] * bq.cast<cdouble>().asDiagonal() * XZ[j].adjoint();
                    st.dir.X[j] = 0.5 * (D + D.adjoint());
                    const double trGX = a * X.trace().real() + bq.dot(diagS[j]);
                    gtd += -double(X.rows()) + trGX;
                }
                st.dir.s = -(gD + A.transpose() * gam).cwiseQuotient(hD);
                gtd += gD.dot(st.dir.s) + lam.dot(linear_part(st.dir));
                st.slope = gtd;
                st.decrement2 = -gtd;
                return st;
            }
        };

        ConicPoint axpy(const ConicPoint &x, double a, const ConicPoint &d)
        {
            ConicPoint r;
            r.X.resize(x.X.size());
            for (size_t j = 0; j < x.X.size(); ++j)
                r.X[j] = x.X[j] + a * d.X[j];
            r.s = x.s + a * d.s;
            return r;
        }

        enum class CenterOutcome
        {
            centered,
            stalled,
            early_stop
        };

        template <class Stop>
        CenterOutcome center(const Engine &eng, ConicPoint &pt, double t, const SolverOptions &opt, int &total,
                             Stop &&stop)
        {
            for (int it = 0; it < opt.max_newton_per_center; ++it)
            {
                if (total >= opt.max_newton_total)
                    return CenterOutcome::stalled;
                const RVec fv = eng.values(pt);
                const double f0 = eng.merit(pt, fv, t);
                const auto st = eng.newton(pt, fv, t);
                if (!std::isfinite(st.decrement2))
                    return CenterOutcome::stalled;
                if (st.decrement2 / 2.0 <= opt.newton_tol)
                    return CenterOutcome::centered;
                ++total;

                // Largest step keeping affine rows and boxes positive
                const RVec dv = eng.linear_part(st.dir);
                double amax = 1.0;
                for (size_t c = 0; c < eng.prog.constraints.size(); ++c)
                {
                    const int r = eng.con_row[c];
                    const int rr = eng.prog.constraints[c].kind == ConeKind::nonnegative ? r : r + 1;
                    if (dv(rr) < 0.0)
                        amax = std::min(amax, -0.99 * fv(rr) / dv(rr));
                }
                for (int s = 0; s < eng.ns; ++s)
                {
                    const double d = st.dir.s(s);
                    if (d < 0.0)
                        amax = std::min(amax, -0.99 * (pt.s(s) - eng.prog.scalars[s].lo) / d);
                    else if (d > 0.0)
                        amax = std::min(amax, 0.99 * (eng.prog.scalars[s].hi - pt.s(s)) / d);
                }
                double alpha = amax;
                bool accepted = false;
                for (int ls = 0; ls < 80; ++ls, alpha *= 0.5)
                {
                    ConicPoint trial = axpy(pt, alpha, st.dir);
                    const double f1 = eng.merit(trial, fv + alpha * dv, t);
                    if (!std::isfinite(f1))
                        continue;
                    if (f1 <= f0 + 0.01 * alpha * st.slope + 1e-13 * std::abs(f0))
                    {
                        pt = std::move(trial);
                        accepted = true;
                        break;
                    }
                }
                if (!accepted)
                    return st.decrement2 < 1e-6 ? CenterOutcome::centered : CenterOutcome::stalled;
                if (stop(pt))
                    return CenterOutcome::early_stop;
            }
            return CenterOutcome::stalled;
        }

        double objective_scale(const ConicProgram &prog, const ConicPoint &pt)
        {
            return std::max(1.0, std::abs(prog.objective.dot(pt.s)));
        }
    }

    std::string to_string(SolveStatus status)
    {
        switch (status)
        {
        case SolveStatus::optimal:
            return "optimal";
        case SolveStatus::infeasible:
            return "infeasible";
        default:
            return "numerical-failure";
        }
    }

    void ConicProgram::validate() const
    {
        if (objective.size() != int(scalars.size()))
            throw std::invalid_argument("ConicProgram: objective length must equal the scalar count");
        for (const auto &s : scalars)
            if (!(s.lo < s.hi))
                throw std::invalid_argument("ConicProgram: empty scalar box");
        auto check = [&](const AffineForm &f) {
            for (const auto &bt : f.blocks)
            {
                if (bt.block < 0 || bt.block >= int(blocks.size()))
                    throw std::invalid_argument("ConicProgram: block index out of range");
                for (auto [q, w] : bt.rank_one)
                    if (q < 0 || q >= int(blocks[bt.block].dictionary.size()))
                        throw std::invalid_argument("ConicProgram: dictionary index out of range");
            }
            for (auto [s, a] : f.scalars)
                if (s < 0 || s >= int(scalars.size()))
                    throw std::invalid_argument("ConicProgram: scalar index out of range");
        };
        for (const auto &c : constraints)
        {
            check(c.form);
            if (c.kind == ConeKind::log_hypograph)
                check(c.arg);
        }
        for (const auto &b : blocks)
        {
            if (b.basis.cols() < 1 || b.basis.cols() > b.basis.rows())
                throw std::invalid_argument("ConicProgram: bad block basis");
            for (const auto &d : b.dictionary)
                if (d.size() != b.basis.rows())
                    throw std::invalid_argument("ConicProgram: dictionary vector length mismatch");
        }
    }

    int ConicProgram::barrier_parameter() const
    {
        int nu = 2 * int(scalars.size());
        for (const auto &b : blocks)
            nu += int(b.basis.cols());
        for (const auto &c : constraints)
            nu += c.kind == ConeKind::nonnegative ? 1 : 2;
        return nu;
    }

    CMat lift_block(const PsdBlock &block, const CMat &X) { return block.basis * X * block.basis.adjoint(); }

    CMat reduce_block(const PsdBlock &block, const CMat &P) { return block.basis.adjoint() * P * block.basis; }

    double evaluate_form(const ConicProgram &prog, const AffineForm &form, const ConicPoint &pt)
    {
        double v = form.constant;
        for (auto [s, a] : form.scalars)
            v += a * pt.s(s);
        for (const auto &bt : form.blocks)
        {
            const CMat &X = pt.X[bt.block];
            const auto &blk = prog.blocks[bt.block];
            v += bt.identity * X.trace().real();
            for (auto [q, w] : bt.rank_one)
            {
                const CVec z = blk.basis.adjoint() * blk.dictionary[q];
                v += w * z.dot(X * z).real();
            }
        }
        return v;
    }

    double constraint_value(const ConicProgram &prog, const ConeConstraint &con, const ConicPoint &pt)
    {
        const double f = evaluate_form(prog, con.form, pt);
        if (con.kind == ConeKind::nonnegative)
            return f;
        const double u = evaluate_form(prog, con.arg, pt);
        if (!(u > 0.0))
            return std::numeric_limits<double>::quiet_NaN();
        return std::log(u) - f;
    }

    SolveResult solve_conic(const ConicProgram &prog, const ConicPoint &guess, const SolverOptions &opt)
    {
        prog.validate();
        const int nb = int(prog.blocks.size());
        const int ns = int(prog.scalars.size());
        SolveResult res;

        // Starting point: PSD part of the guess, scalars clamped into their boxes
        ConicPoint x0;
        x0.X.resize(nb);
        for (int j = 0; j < nb; ++j)
        {
            const int r = int(prog.blocks[j].basis.cols());
            if (int(guess.X.size()) == nb && guess.X[j].rows() == r && guess.X[j].cols() == r)
            {
                Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (guess.X[j] + guess.X[j].adjoint()));
                const RVec ev = es.eigenvalues().cwiseMax(0.0);
                x0.X[j] = es.eigenvectors() * ev.cast<cdouble>().asDiagonal() * es.eigenvectors().adjoint();
            }
            else
                x0.X[j] = CMat::Zero(r, r);
        }
        x0.s = RVec::Zero(ns);
        for (int s = 0; s < ns; ++s)
        {
            const auto &b = prog.scalars[s];
            const double margin = 1e-3 * (b.hi - b.lo);
            const double g = guess.s.size() == ns ? guess.s(s) : 0.5 * (b.lo + b.hi);
            x0.s(s) = std::clamp(g, b.lo + margin, b.hi - margin);
        }

        // Arguments of log rows must be positive before any shifting
        for (const auto &c : prog.constraints)
            if (c.kind == ConeKind::log_hypograph && !(evaluate_form(prog, c.arg, x0) > 0.0))
            {
                for (auto &X : x0.X)
                    X.setZero();
                break;
            }

        // Phase I: minimize tau with every row relaxed by tau and X = Y - tau I
        double viol = 0.0;
        for (const auto &X : x0.X)
            if (X.rows() > 0)
                viol = std::max(viol, -Eigen::SelfAdjointEigenSolver<CMat>(X).eigenvalues().minCoeff());
        for (const auto &c : prog.constraints)
        {
            const double v = constraint_value(prog, c, x0);
            if (std::isnan(v))
            {
                res.status = SolveStatus::numerical_failure;
                return res;
            }
            viol = std::max(viol, -v);
        }
        const double tau0 = viol + 0.5;

        ConicProgram p1;
        p1.blocks = prog.blocks;
        p1.scalars = prog.scalars;
        p1.scalars.push_back({-1.0, 4.0 * tau0 + 1.0});
        const int itau = ns;
        p1.objective = RVec::Zero(ns + 1);
        p1.objective(itau) = 1.0;
        auto shift = [&](AffineForm f) {
            double coef = 0.0;
            for (const auto &bt : f.blocks)
            {
                coef -= bt.identity * double(prog.blocks[bt.block].basis.cols());
                for (auto [q, w] : bt.rank_one)
                    coef -= w * (prog.blocks[bt.block].basis.adjoint() * prog.blocks[bt.block].dictionary[q])
                                    .squaredNorm();
            }
            f.scalars.push_back({itau, coef});
            return f;
        };
        for (const auto &c : prog.constraints)
        {
            ConeConstraint c1;
            c1.kind = c.kind;
            c1.form = shift(c.form);
            if (c.kind == ConeKind::nonnegative)
                c1.form.scalars.push_back({itau, 1.0});
            else
            {
                c1.form.scalars.push_back({itau, -1.0});
                c1.arg = shift(c.arg);
            }
            p1.constraints.push_back(std::move(c1));
        }

        ConicPoint y;
        y.X.resize(nb);
        for (int j = 0; j < nb; ++j)
            y.X[j] = x0.X[j] + tau0 * CMat::Identity(x0.X[j].rows(), x0.X[j].cols());
        y.s.resize(ns + 1);
        y.s.head(ns) = x0.s;
        y.s(itau) = tau0;

        const Engine e1(p1);
        const double nu1 = p1.barrier_parameter();
        int total = 0;
        double t = opt.t0;
        bool feasible = false;
        auto early = [&](const ConicPoint &p) { return p.s(itau) < -1e-3; };
        for (int outer = 0; outer < 200; ++outer)
        {
            const auto oc = center(e1, y, t, opt, total, early);
            const double tau = y.s(itau);
            if (tau < 0.0)
            {
                feasible = true;
                break;
            }
            if (oc == CenterOutcome::stalled)
                break;
            const double gap = nu1 / t;
            if (tau - gap > 0.0)
            {
                res.status = SolveStatus::infeasible;
                res.newton_steps = total;
                return res;
            }
            if (gap < 1e-13)
                break;
            t *= opt.mu;
        }
        res.newton_steps = total;
        if (!feasible)
        {
            // Phase I could not separate tau from zero: report the boundary case as infeasible
            res.status = y.s(itau) >= -1e-10 && total < opt.max_newton_total ? SolveStatus::infeasible
                                                                            : SolveStatus::numerical_failure;
            return res;
        }

        ConicPoint x;
        x.X.resize(nb);
        const double tau = y.s(itau);
        for (int j = 0; j < nb; ++j)
            x.X[j] = y.X[j] - tau * CMat::Identity(y.X[j].rows(), y.X[j].cols());
        x.s = y.s.head(ns);

        // Phase II
        const Engine e2(prog);
        const double nu = prog.barrier_parameter();
        auto never = [](const ConicPoint &) { return false; };
        t = opt.t0;
        ConicPoint best = x;
        bool centered_once = false;
        for (int outer = 0; outer < 200; ++outer)
        {
            const auto oc = center(e2, x, t, opt, total, never);
            if (oc == CenterOutcome::stalled)
                break;
            centered_once = true;
            best = x;
            res.gap = nu / t;
            if (res.gap <= opt.rel_gap * objective_scale(prog, x))
            {
                res.status = SolveStatus::optimal;
                break;
            }
            t *= opt.mu;
        }
        res.point = best;
        res.objective = prog.objective.dot(best.s);
        res.newton_steps = total;
        if (res.status != SolveStatus::optimal && centered_once && res.gap <= 1e-6 * objective_scale(prog, best))
            res.status = SolveStatus::optimal; // precision floor reached; report the last centered point
        return res;
    }
}
