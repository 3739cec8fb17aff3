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
#include "support.hpp"

#include <catch_amalgamated.hpp>

using namespace leoisac;
using Catch::Approx;

namespace
{
    ConeConstraint nonneg(AffineForm f) { return {ConeKind::nonnegative, std::move(f), {}}; }

    ConicPoint scalars_only(int n) { return {{}, RVec::Zero(n)}; }
}

TEST_CASE("linear program on a simplex", "[solver]")
{
    ConicProgram p;
    p.scalars = {{0.0, 10.0}, {0.0, 10.0}};
    p.objective = RVec(2);
    p.objective << -2.0, -1.0;
    p.constraints.push_back(nonneg({1.0, {}, {{0, -1.0}, {1, -1.0}}}));
    const SolveResult r = solve_conic(p, scalars_only(2));
    REQUIRE(r.status == SolveStatus::optimal);
    CHECK(r.objective == Approx(-2.0).margin(1e-7));
    CHECK(r.point.s(0) == Approx(1.0).margin(1e-6));
    CHECK(r.gap <= 1e-8 * 2.0);
}

TEST_CASE("log-hypograph row", "[solver]")
{
    // maximize x subject to x <= log(y), y <= 2
    ConicProgram p;
    p.scalars = {{-50.0, 50.0}, {0.0, 10.0}};
    p.objective = RVec(2);
    p.objective << -1.0, 0.0;
    p.constraints.push_back({ConeKind::log_hypograph, {0.0, {}, {{0, 1.0}}}, {0.0, {}, {{1, 1.0}}}});
    p.constraints.push_back(nonneg({2.0, {}, {{1, -1.0}}}));
    const SolveResult r = solve_conic(p, scalars_only(2));
    REQUIRE(r.status == SolveStatus::optimal);
    CHECK(r.point.s(0) == Approx(std::log(2.0)).margin(1e-7));
    for (const auto &c : p.constraints)
        CHECK(constraint_value(p, c, r.point) >= -1e-12);
}

TEST_CASE("PSD block: maximal quadratic form under a trace budget", "[solver]")
{
    // maximize t subject to d^H P d >= t, tr(P) <= 3, P >= 0; optimum 3 ||d||^2
    leoisac::test::Gen g(51);
    const CVec d = g.cvec(4);
    ConicProgram p;
    p.blocks.push_back({CMat::Identity(4, 4), {d}});
    p.scalars = {{-100.0, 100.0}};
    p.objective = RVec::Constant(1, -1.0);
    p.constraints.push_back(nonneg({0.0, {{0, 0.0, {{0, 1.0}}}}, {{0, -1.0}}}));
    p.constraints.push_back(nonneg({3.0, {{0, -1.0, {}}}, {}}));
    ConicPoint guess{{CMat::Identity(4, 4) * 0.1}, RVec::Zero(1)};
    const SolveResult r = solve_conic(p, guess);
    REQUIRE(r.status == SolveStatus::optimal);
    // Near-rank-one blocks limit the barrier method to about 1e-7 relative accuracy
    CHECK(r.point.s(0) == Approx(3.0 * d.squaredNorm()).epsilon(1e-6));
    const CMat P = lift_block(p.blocks[0], r.point.X[0]);
    CHECK(P.trace().real() == Approx(3.0).epsilon(1e-7));
    const Eigen::SelfAdjointEigenSolver<CMat> es(P);
    CHECK(es.eigenvalues().maxCoeff() / P.trace().real() >= 0.9999);
}

TEST_CASE("reduced basis round trip", "[solver]")
{
    leoisac::test::Gen g(52);
    const Eigen::HouseholderQR<CMat> qr(g.cmat(6, 2));
    PsdBlock b{qr.householderQ() * CMat::Identity(6, 2), {}};
    const CMat Y = g.cmat(2, 2);
    const CMat X = Y * Y.adjoint();
    CHECK((reduce_block(b, lift_block(b, X)) - X).norm() <= 1e-12 * X.norm());
}

TEST_CASE("infeasible program is reported", "[solver]")
{
    ConicProgram p;
    p.scalars = {{-10.0, 10.0}};
    p.objective = RVec::Constant(1, 1.0);
    p.constraints.push_back(nonneg({1.0, {}, {{0, -1.0}}}));
    p.constraints.push_back(nonneg({-2.0, {}, {{0, 1.0}}}));
    CHECK(solve_conic(p, scalars_only(1)).status == SolveStatus::infeasible);
}

TEST_CASE("malformed programs are rejected", "[solver]")
{
    ConicProgram p;
    p.scalars = {{0.0, 1.0}};
    p.objective = RVec::Zero(2);
    CHECK_THROWS(p.validate());
}
