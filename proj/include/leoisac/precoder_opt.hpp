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

#ifndef LEOISAC_PRECODER_OPT_HPP
#define LEOISAC_PRECODER_OPT_HPP

#include "leoisac/barrier_solver.hpp"
#include "leoisac/crb.hpp"
#include "leoisac/rates.hpp"

#include <string>
#include <vector>

namespace leoisac
{
    // What the optimizer needs to know about users and target
    struct OptScene
    {
        std::vector<CVec> a; // user steering vectors at the satellite
        RVec rho;            // sigma_c^2 / gamma_k, watts
        CrbContext crb;      // target AOD/AOA context; unused in comm-only modes

        int users() const { return int(a.size()); }
        int antennas() const { return a.empty() ? 0 : int(a.front().size()); }
        void validate() const;
    };

    // Heuristic starting point: after the target beam, `user_share` of the remaining power goes to per-user MRT
    // beams and `common_share` to a common beam along the sum of the normalized user steering vectors
    struct InitSplit
    {
        double user_share = 1.0;
        double common_share = 0.0;
    };

    struct OptConfig
    {
        double eps_rank = 0.9999;
        double eps_obj = 1e-4; // bits/s/Hz
        double delta0 = 0.1;
        int m_max = 60;
        int n_max = 30;
        double P_t = 1.0;        // watts
        double crb_th_theta = 1; // CRB threshold on the AOA azimuth
        double crb_th_phi = 1;   // CRB threshold on the AOA off-boresight angle
        ModeConfig mode;
        SolverOptions solver;
        // The design is run from each start and the best converged result kept
        std::vector<InitSplit> starts{{1.0, 0.0}, {0.5, 0.0}, {0.05, 0.05}};

        void validate() const;
    };

    // Lifted variables; Pbar has K+2 entries (absent columns are zero matrices)
    struct SdrLift
    {
        std::vector<CMat> Pbar;
        RVec C;
        double R_min = 0;
        RVec c, d, e, f; // c and d are empty without a common stream
    };

    enum class OptStatus
    {
        converged,
        iter_cap,
        infeasible
    };

    std::string to_string(OptStatus status);

    struct OptResult
    {
        OptStatus status = OptStatus::infeasible;
        PrecoderMatrix P;
        CommonRateAlloc C;
        double R_min = 0;        // min_k (R_p,k + C_k) re-evaluated from the extracted P
        double R_min_lifted = 0; // objective of the last accepted subproblem
        std::vector<RVec> w_trajectory;               // rank weights used by each outer iteration
        std::vector<std::vector<double>> inner_trace; // lifted R_min after each inner solve, per outer iteration
        RVec eigen_ratio;                             // lambda_max / tr per column; 1 for absent columns
        SdrLift lift;
        int outer_iterations = 0;
        int subproblem_solves = 0;
    };

    enum class ConstraintTag
    {
        power,
        crb,
        rank_relaxed,
        common_nonneg,
        min_rate,
        common_decoding,
        common_exp_bound,
        private_exp_bound,
        common_sca,
        private_sca
    };

    std::string to_string(ConstraintTag tag);

    struct LinearizationPoint
    {
        RVec d0; // log of the common-stream interference-plus-noise term, per user
        RVec f0; // log of the private-stream interference-plus-noise term, per user
    };

    // Rank weights and reference directions for every column (length K+2)
    struct RankState
    {
        RVec w;
        std::vector<CVec> v;
    };

    // One [m, n] subproblem in solver units: Pbar_j = power_scale * V_j X_j V_j^H, log variables shifted by log(power_scale)
    struct Subproblem
    {
        ConicProgram program;
        std::vector<ConstraintTag> tags; // parallel to program.constraints
        std::vector<int> tag_index;      // user k, or column j for rank rows, or -1
        std::vector<int> block_column;   // column j of each block
        std::vector<int> column_block;   // block of each column, -1 if absent
        std::vector<bool> rank_implied;  // per column: w == 1 enforced by a one-dimensional basis
        double power_scale = 1.0;
        int i_rmin = 0;
        std::vector<int> i_C, i_c, i_d, i_e, i_f; // scalar indices per user (empty vectors if absent)
    };

    Subproblem build_subproblem(const OptScene &scene, const OptConfig &cfg, const RankState &rank,
                                const LinearizationPoint &lin);

    // Conversions between solver coordinates and the lifted variables
    SdrLift point_to_lift(const Subproblem &sub, const ConicPoint &pt, int k_users, int n_tx);
    ConicPoint lift_to_point(const Subproblem &sub, const SdrLift &lift);

    // The interference-plus-noise terms whose logs the SCA rows linearize
    LinearizationPoint linearize_at(const OptScene &scene, const ModeConfig &mode, const std::vector<CMat> &Pbar);

    struct InitPoint
    {
        bool feasible = false;
        SdrLift lift; // scalars consistent with every subproblem row at w = 0
        LinearizationPoint lin;
    };

    // Heuristic start: MRT towards the target with 10% margin over the CRB requirement, the rest per-user MRT
    InitPoint init_linearization(const OptScene &scene, const OptConfig &cfg, const InitSplit &split = {});

    struct SrocState
    {
        RVec w;
        double delta = 0.1;
        std::vector<CMat> Pbar; // last accepted lifted matrices
    };

    struct SrocUpdate
    {
        SrocState next;
        bool underflow = false; // delta dropped below 1e-12
    };

    // Outer-loop schedule: on success accept `solved` and reset delta, otherwise halve delta and keep prev.Pbar;
    // then w_j = min(1, lambda_max / tr + delta) of the retained matrices.
    SrocUpdate sroc_schedule_update(const SrocState &prev, const std::vector<CMat> &solved, bool solvable,
                                    double delta0);

    // lambda_max / tr, 1 for a zero matrix
    double eigen_ratio(const CMat &P);

    struct PrincipalPair
    {
        double value = 0;
        CVec vector;
    };

    // Largest eigenpair; ties within 1e-9 resolved towards the first in ascending solver order,
    // phase fixed so the largest-magnitude entry is real positive
    PrincipalPair principal_component(const CMat &P);

    // Two-layer SDR / SROCR / SCA optimization
    OptResult solve(const OptScene &scene, const OptConfig &cfg);
}

#endif
