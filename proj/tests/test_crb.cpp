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
#include "leoisac/waveform.hpp"
#include "support.hpp"

#include <catch_amalgamated.hpp>

using namespace leoisac;
using leoisac::test::Gen;
using Catch::Approx;

namespace
{
    struct CrbScene
    {
        UpaSpec tx, rx;
        AnglePair aoa;
        cdouble alpha;
        CrbContext ctx;
        PrecoderMatrix P;
    };

    CrbScene random_scene(Gen &g, int L = 512)
    {
        CrbScene s;
        s.tx = UpaSpec(g.integer(2, 4), g.integer(2, 4));
        s.rx = UpaSpec(g.integer(2, 5), g.integer(2, 5));
        s.aoa = {g.uniform(-kPi, kPi), g.uniform(0.1, 1.4)};
        s.alpha = std::polar(std::pow(10.0, g.uniform(-3, 0)), g.uniform(0, 2 * kPi));
        s.ctx.alpha2 = std::norm(s.alpha);
        s.ctx.sigma_r2 = std::pow(10.0, g.uniform(-2, 1));
        s.ctx.L = L;
        s.ctx.a_tar = steering_vector(s.tx, g.angle());
        s.ctx.b_derivs = steering_derivatives(s.rx, s.aoa);
        s.P = PrecoderMatrix(g.cmat(s.tx.size(), g.integer(1, 3) + 2));
        return s;
    }

    double rel(const Eigen::Matrix2d &a, const Eigen::Matrix2d &b) { return (a - b).norm() / b.norm(); }
}

TEST_CASE("FIM examples", "[crb]")
{
    Gen g(41);
    CrbScene s = random_scene(g);
    CHECK(fim(s.ctx, PrecoderMatrix(s.tx.size(), 2)).norm() == 0.0);
    const Eigen::Matrix2d F = fim(s.ctx, s.P);
    PrecoderMatrix Q = s.P;
    Q.P *= std::sqrt(2.0);
    CHECK(rel(fim(s.ctx, Q), 2.0 * F) < 1e-13);
    CHECK(F(0, 1) == F(1, 0));
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(F);
    CHECK(es.eigenvalues().minCoeff() >= -1e-12 * F.norm());
}

TEST_CASE("FIM matches the finite-difference oracle", "[crb][property]")
{
    Gen g(42);
    for (int t = 0; t < 20; ++t)
    {
        CrbScene s = random_scene(g);
        const CMat X = s.P.P * orthogonal_streams(int(s.P.P.cols()), s.ctx.L);
        const Eigen::Matrix2d num = numeric_fim_oracle(s.rx, s.aoa, s.alpha, s.ctx.sigma_r2, s.ctx.a_tar, X);
        CHECK(rel(fim(s.ctx, s.P), num) <= 1e-5);
        CHECK(num(0, 1) == Approx(num(1, 0)).epsilon(1e-14));
        // Doppler rotates each column by a unit phase and leaves the FIM unchanged
        const CMat XV = apply_doppler(X, g.uniform(-3e4, 3e4), 1e-7);
        const Eigen::Matrix2d numv = numeric_fim_oracle(s.rx, s.aoa, s.alpha, s.ctx.sigma_r2, s.ctx.a_tar, XV);
        CHECK(rel(numv, num) <= 1e-8);
    }
}

TEST_CASE("closed-form CRBs equal the FIM inverse diagonal", "[crb][property]")
{
    Gen g(43);
    for (int t = 0; t < 200; ++t)
    {
        CrbScene s = random_scene(g, g.integer(1, 4096));
        const Eigen::Matrix2d Finv = fim(s.ctx, s.P).inverse();
        const CrbPair c = crb_pair(s.ctx, s.P);
        CHECK(std::abs(c.theta - Finv(0, 0)) <= 1e-10 * Finv(0, 0));
        CHECK(std::abs(c.phi - Finv(1, 1)) <= 1e-10 * Finv(1, 1));
    }
}

TEST_CASE("CRB scaling and monotonicity", "[crb][property]")
{
    Gen g(44);
    for (int t = 0; t < 100; ++t)
    {
        CrbScene s = random_scene(g);
        const CrbPair c1 = crb_pair(s.ctx, s.P);
        CrbContext c2ctx = s.ctx;
        c2ctx.L *= 2;
        const CrbPair c2 = crb_pair(c2ctx, s.P);
        CHECK(c2.theta == Approx(c1.theta / 2).epsilon(1e-13));
        CHECK(c2.phi == Approx(c1.phi / 2).epsilon(1e-13));

        const double gain = (s.P.P.adjoint() * s.ctx.a_tar).squaredNorm();
        const CrbPair more = crb_pair_from_gain(s.ctx, gain * (1.0 + g.uniform(1e-3, 1.0)));
        CHECK(more.theta < c1.theta);
        CHECK(more.phi < c1.phi);
    }
}

TEST_CASE("gain requirement is equivalent to the CRB thresholds", "[crb][property]")
{
    Gen g(45);
    for (int t = 0; t < 100; ++t)
    {
        CrbScene s = random_scene(g);
        const double th_t = std::pow(10.0, g.uniform(-8, -3)), th_p = std::pow(10.0, g.uniform(-8, -3));
        const double req = crb_gain_requirement(s.ctx, th_t, th_p);
        const double q = crb_q(s.ctx);
        CHECK(req == Approx(std::max(q * s.ctx.norm_phi2() / th_t, q * s.ctx.norm_theta2() / th_p)).epsilon(1e-14));
        const CrbPair at = crb_pair_from_gain(s.ctx, req * (1 + 1e-12));
        CHECK(at.theta <= th_t * (1 + 1e-9));
        CHECK(at.phi <= th_p * (1 + 1e-9));
        const CrbPair below = crb_pair_from_gain(s.ctx, req * 0.99);
        CHECK((below.theta > th_t || below.phi > th_p));
    }
}

TEST_CASE("unidentifiable configurations", "[crb]")
{
    Gen g(46);
    CrbScene s = random_scene(g);
    CHECK_THROWS_WITH(crb_pair(s.ctx, PrecoderMatrix(s.tx.size(), 1)), "unidentifiable");
    // Single-row receive array: the derivative vectors are parallel
    CrbContext c = s.ctx;
    c.b_derivs = steering_derivatives(UpaSpec(1, 8), {0.3, 0.5});
    CHECK_THROWS_AS(crb_pair(c, s.P), UnidentifiableError);
}
