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

#ifndef LEOISAC_CRB_HPP
#define LEOISAC_CRB_HPP

#include "leoisac/geometry.hpp"
#include "leoisac/rates.hpp"

namespace leoisac
{
    // Everything the AOA Fisher information needs besides the precoder
    struct CrbContext
    {
        double alpha2 = 0;   // |alpha|^2
        double sigma_r2 = 0; // radar receiver noise power
        int L = 1;           // frame length, samples
        CVec a_tar;          // satellite steering vector at the target AOD
        SteeringDerivatives b_derivs; // receiver steering derivatives at the target AOA

        void validate() const;
        double norm_theta2() const { return b_derivs.d_theta.squaredNorm(); }
        double norm_phi2() const { return b_derivs.d_phi.squaredNorm(); }
        double cross() const { return b_derivs.d_theta.dot(b_derivs.d_phi).real(); } // Re(bt^H bp)
    };

    class UnidentifiableError : public std::runtime_error
    {
    public:
        UnidentifiableError() : std::runtime_error("unidentifiable") {}
    };

    // 2x2 FIM of xi = [theta_rx, phi_rx] for X X^H = L P P^H
    Eigen::Matrix2d fim(const CrbContext &ctx, const PrecoderMatrix &P);

    // Same, with the precoder entering only through the beam gain ||P^H a_tar||^2
    Eigen::Matrix2d fim_from_gain(const CrbContext &ctx, double beam_gain);

    struct CrbPair
    {
        double theta = 0;
        double phi = 0;
    };

    // sigma_R^2 / (2 L |alpha|^2 (|bt|^2 |bp|^2 - Re(bt^H bp)^2)). Throws UnidentifiableError for parallel derivatives.
    double crb_q(const CrbContext &ctx);

    // Closed-form diag(F^-1). Throws UnidentifiableError when the beam gain vanishes.
    CrbPair crb_pair(const CrbContext &ctx, const PrecoderMatrix &P);
    CrbPair crb_pair_from_gain(const CrbContext &ctx, double beam_gain);

    // Minimum beam gain tr(A_tar sum_j Pbar_j) that keeps CRB_theta <= th_theta and CRB_phi <= th_phi
    double crb_gain_requirement(const CrbContext &ctx, double th_theta, double th_phi);

    // Test oracle: finite-difference FIM of mu(xi) = alpha vec(b(xi) a_tar^H X) with noise sigma_r2 I.
    // Independent of steering_derivatives; uses only steering_vector.
    Eigen::Matrix2d numeric_fim_oracle(const UpaSpec &rx_upa, const AnglePair &aoa, cdouble alpha, double sigma_r2,
                                       const CVec &a_tar, const CMat &X, double step = 1e-6);
}

#endif
