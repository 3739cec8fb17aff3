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

#include "leoisac/crb.hpp"

#include <algorithm>
#include <cmath>

namespace leoisac
{
    void CrbContext::validate() const
    {
        if (L < 1)
            throw std::invalid_argument("CrbContext: L must be at least 1");
        if (!(alpha2 > 0.0) || !(sigma_r2 > 0.0))
            throw std::invalid_argument("CrbContext: |alpha|^2 and sigma_R^2 must be positive");
        if (b_derivs.d_theta.size() != b_derivs.d_phi.size() || a_tar.size() == 0)
            throw std::invalid_argument("CrbContext: inconsistent vector sizes");
    }

    Eigen::Matrix2d fim_from_gain(const CrbContext &ctx, double beam_gain)
    {
        const double scale = 2.0 * ctx.L * ctx.alpha2 / ctx.sigma_r2 * beam_gain;
        Eigen::Matrix2d F;
        F << ctx.norm_theta2(), ctx.cross(), ctx.cross(), ctx.norm_phi2();
        return scale * F;
    }

    Eigen::Matrix2d fim(const CrbContext &ctx, const PrecoderMatrix &P)
    {
        return fim_from_gain(ctx, (P.P.adjoint() * ctx.a_tar).squaredNorm());
    }

    double crb_q(const CrbContext &ctx)
    {
        const double tt = ctx.norm_theta2(), pp = ctx.norm_phi2(), tp = ctx.cross();
        const double det = tt * pp - tp * tp;
        if (!(det > 1e-12 * tt * pp))
            throw UnidentifiableError();
        return ctx.sigma_r2 / (2.0 * ctx.L * ctx.alpha2 * det);
    }

    CrbPair crb_pair_from_gain(const CrbContext &ctx, double beam_gain)
    {
        if (!(beam_gain > 0.0))
            throw UnidentifiableError();
        const double q = crb_q(ctx);
        return {q * ctx.norm_phi2() / beam_gain, q * ctx.norm_theta2() / beam_gain};
    }

    CrbPair crb_pair(const CrbContext &ctx, const PrecoderMatrix &P)
    {
        return crb_pair_from_gain(ctx, (P.P.adjoint() * ctx.a_tar).squaredNorm());
    }

    double crb_gain_requirement(const CrbContext &ctx, double th_theta, double th_phi)
    {
        if (!(th_theta > 0.0) || !(th_phi > 0.0))
            throw std::invalid_argument("crb_gain_requirement: thresholds must be positive");
        const double q = crb_q(ctx);
        return std::max(q * ctx.norm_phi2() / th_theta, q * ctx.norm_theta2() / th_phi);
    }

    Eigen::Matrix2d numeric_fim_oracle(const UpaSpec &rx_upa, const AnglePair &aoa, cdouble alpha, double sigma_r2,
                                       const CVec &a_tar, const CMat &X, double step)
    {
        // mu(xi) = alpha * kron(s^T, b(xi)) with s = a_tar^H X; only b depends on xi
        const Eigen::RowVectorXcd s = a_tar.adjoint() * X;
        auto mu = [&](const AnglePair &ang) {
            const CVec b = steering_vector(rx_upa, ang);
            return CMat(alpha * b * s);
        };
        const CMat d_theta = (mu({aoa.theta + step, aoa.phi}) - mu({aoa.theta - step, aoa.phi})) / (2.0 * step);
        const CMat d_phi = (mu({aoa.theta, aoa.phi + step}) - mu({aoa.theta, aoa.phi - step})) / (2.0 * step);

        auto inner = [](const CMat &u, const CMat &v) { return (u.conjugate().cwiseProduct(v)).sum().real(); };
        Eigen::Matrix2d F;
        F(0, 0) = 2.0 * inner(d_theta, d_theta) / sigma_r2;
        F(0, 1) = 2.0 * inner(d_theta, d_phi) / sigma_r2;
        F(1, 0) = 2.0 * inner(d_phi, d_theta) / sigma_r2;
        F(1, 1) = 2.0 * inner(d_phi, d_phi) / sigma_r2;
        return F;
    }
}
