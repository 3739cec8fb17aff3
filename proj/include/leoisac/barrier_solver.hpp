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

#ifndef LEOISAC_BARRIER_SOLVER_HPP
#define LEOISAC_BARRIER_SOLVER_HPP

#include "leoisac/geometry.hpp"

#include <string>
#include <utility>
#include <vector>

// Primal log-barrier interior-point method for programs of the form
//
//   minimize    c^T s
//   subject to  X_j >= 0 (Hermitian PSD, P_j = V_j X_j V_j^H)
//               f(X, s) >= 0                  (nonnegative rows)
//               log(u(X, s)) - x(X, s) >= 0   (log-hypograph rows, a 2D slice of the exponential cone)
//               lo <= s <= hi
//
// where every row is affine in (X, s). Matrix coefficients are restricted to  a*I + sum_q w_q d_q d_q^H
// with d_q drawn from a small per-block dictionary, which keeps each Newton step at O(m^2) rather than
// O(N^4) in the block size.

namespace leoisac
{
    struct BlockTerm
    {
        int block = 0;
        double identity = 0.0;                       // weight of tr(P_j)
        std::vector<std::pair<int, double>> rank_one; // (dictionary index q, w_q): w_q d_q^H P_j d_q
    };

    struct AffineForm
    {
        double constant = 0.0;
        std::vector<BlockTerm> blocks;
        std::vector<std::pair<int, double>> scalars; // (scalar index, coefficient)
    };

    enum class ConeKind
    {
        nonnegative,  // form >= 0
        log_hypograph // log(arg) - form >= 0
    };

    struct ConeConstraint
    {
        ConeKind kind = ConeKind::nonnegative;
        AffineForm form;
        AffineForm arg; // used by log_hypograph only
    };

    struct PsdBlock
    {
        CMat basis;                  // N x r, orthonormal columns
        std::vector<CVec> dictionary; // length-N vectors referenced by rank_one terms
    };

    struct ScalarVar
    {
        double lo = -1e3;
        double hi = 1e3;
    };

    struct ConicProgram
    {
        std::vector<PsdBlock> blocks;
        std::vector<ScalarVar> scalars;
        RVec objective; // minimized; one entry per scalar
        std::vector<ConeConstraint> constraints;

        void validate() const;
        int barrier_parameter() const;
    };

    // Blocks in reduced (basis) coordinates
    struct ConicPoint
    {
        std::vector<CMat> X;
        RVec s;
    };

    struct SolverOptions
    {
        double rel_gap = 1e-8;      // stop once nu / t <= rel_gap * max(1, |objective|)
        double mu = 20.0;           // barrier parameter growth
        double t0 = 1.0;
        double newton_tol = 1e-9;   // lambda^2 / 2 at which centering stops
        int max_newton_per_center = 400;
        int max_newton_total = 8000;
    };

    enum class SolveStatus
    {
        optimal,
        infeasible,
        numerical_failure
    };

    std::string to_string(SolveStatus status);

    struct SolveResult
    {
        SolveStatus status = SolveStatus::numerical_failure;
        ConicPoint point;
        double objective = 0.0;
        double gap = 0.0; // nu / t at exit
        int newton_steps = 0;
    };

    // Two-phase solve. `guess` only seeds phase I and need not be feasible.
    SolveResult solve_conic(const ConicProgram &prog, const ConicPoint &guess, const SolverOptions &opt = {});

    double evaluate_form(const ConicProgram &prog, const AffineForm &form, const ConicPoint &pt);

    // form value for nonnegative rows, log(arg) - form for log rows (NaN if arg <= 0)
    double constraint_value(const ConicProgram &prog, const ConeConstraint &con, const ConicPoint &pt);

    // V X V^H
    CMat lift_block(const PsdBlock &block, const CMat &X);

    // Least-squares reduced coordinates V^H P V of a full matrix
    CMat reduce_block(const PsdBlock &block, const CMat &P);
}

#endif
