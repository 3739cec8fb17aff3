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

#include "leoisac/geometry.hpp"
#include "support.hpp"

#include <catch_amalgamated.hpp>

using namespace leoisac;
using leoisac::test::Gen;
using Catch::Approx;

namespace
{
    // Element phase from the propagation delay of an element at (nx d, ny d, 0), d = lambda / 2
    CVec delay_oracle(const UpaSpec &upa, const AnglePair &ang, double f_c)
    {
        const double lambda = kSpeedOfLight / f_c, d = lambda / 2.0;
        const Vec3 u(std::sin(ang.phi) * std::cos(ang.theta), std::sin(ang.phi) * std::sin(ang.theta), std::cos(ang.phi));
        CVec a(upa.size());
        for (int ix = 0; ix < upa.nx; ++ix)
            for (int iy = 0; iy < upa.ny; ++iy)
            {
                const double dtau = Vec3(ix * d, iy * d, 0.0).dot(u) / kSpeedOfLight;
                a(ix * upa.ny + iy) = std::exp(cdouble(0.0, -2.0 * kPi * f_c * dtau));
            }
        return a;
    }

    CVec axis_vector(int n, double spatial)
    {
        CVec v(n);
        for (int i = 0; i < n; ++i)
            v(i) = std::exp(cdouble(0.0, -kPi * i * spatial));
        return v;
    }

    CVec kron(const CVec &a, const CVec &b)
    {
        CVec out(a.size() * b.size());
        for (Eigen::Index i = 0; i < a.size(); ++i)
            out.segment(i * b.size(), b.size()) = a(i) * b;
        return out;
    }
}

TEST_CASE("steering vector at broadside is all ones", "[geometry]")
{
    const CVec a = steering_vector(UpaSpec(2, 2), {0.0, 0.0});
    REQUIRE(a.size() == 4);
    for (int i = 0; i < 4; ++i)
        CHECK(std::abs(a(i) - cdouble(1.0, 0.0)) < 1e-15);
}

TEST_CASE("steering vector of a 1x2 array at theta = phi = pi/2", "[geometry]")
{
    const CVec a = steering_vector(UpaSpec(1, 2), {kPi / 2.0, kPi / 2.0});
    CHECK(std::abs(a(0) - cdouble(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(a(1) - cdouble(-1.0, 0.0)) < 1e-12);
}

TEST_CASE("steering vector matches the element delay oracle", "[geometry]")
{
    Gen g(11);
    for (int t = 0; t < 50; ++t)
    {
        const AnglePair ang = g.angle();
        const CVec a = steering_vector(UpaSpec(4, 4), ang);
        const CVec o = delay_oracle(UpaSpec(4, 4), ang, 2e9);
        CHECK((a - o).norm() <= 1e-12 * o.norm());
    }
}

TEST_CASE("steering vector norm and Kronecker structure", "[geometry][property]")
{
    Gen g(12);
    for (int t = 0; t < 200; ++t)
    {
        const UpaSpec upa = g.upa();
        const AnglePair ang = g.angle();
        const CVec a = steering_vector(upa, ang);
        CHECK(a.squaredNorm() == Approx(double(upa.size())).epsilon(1e-12));
        for (Eigen::Index i = 0; i < a.size(); ++i)
            CHECK(std::abs(std::abs(a(i)) - 1.0) < 1e-12);
        const CVec k = kron(axis_vector(upa.nx, std::sin(ang.phi) * std::cos(ang.theta)),
                            axis_vector(upa.ny, std::sin(ang.phi) * std::sin(ang.theta)));
        CHECK((a - k).norm() <= 1e-12 * std::sqrt(double(upa.size())));
    }
}

TEST_CASE("steering derivatives: special cases", "[geometry]")
{
    const auto d0 = steering_derivatives(UpaSpec(4, 4), {0.7, 0.0});
    CHECK(d0.d_theta.norm() == 0.0);
    const auto d1 = steering_derivatives(UpaSpec(1, 1), {0.3, 0.4});
    CHECK(d1.d_theta.norm() == 0.0);
    CHECK(d1.d_phi.norm() == 0.0);
}

TEST_CASE("steering derivatives match central differences", "[geometry][property]")
{
    Gen g(13);
    const double h = 1e-6;
    for (int t = 0; t < 200; ++t)
    {
        const UpaSpec upa = g.upa(8);
        AnglePair ang = g.angle();
        ang.phi = std::clamp(ang.phi, 2e-6, kPi / 2.0 - 2e-6);
        const auto d = steering_derivatives(upa, ang);
        const CVec ft = (steering_vector(upa, {ang.theta + h, ang.phi}) - steering_vector(upa, {ang.theta - h, ang.phi})) / (2 * h);
        const CVec fp = (steering_vector(upa, {ang.theta, ang.phi + h}) - steering_vector(upa, {ang.theta, ang.phi - h})) / (2 * h);
        // Absolute floor for derivatives that vanish (single row or column arrays)
        CHECK((d.d_theta - ft).norm() <= 1e-6 * std::max(ft.norm(), 1.0));
        CHECK((d.d_phi - fp).norm() <= 1e-6 * std::max(fp.norm(), 1.0));
    }
}

TEST_CASE("angles_from_positions at the reference geometry", "[geometry]")
{
    const Vec3 sat(30e3, -30e3, 340e3), tar(3e3, 3e3, 5e3);
    const AnglePair a = angles_from_positions(sat, tar, ArrayFrame::satellite_looking_down);
    const Vec3 d = tar - sat;
    CHECK(a.phi == Approx(std::acos(335.0 / std::sqrt(27.0 * 27 + 33.0 * 33 + 335.0 * 335))).epsilon(1e-14));
    // x_tar < x_sat, y_tar >= y_sat: azimuth in the second quadrant
    CHECK(a.theta == Approx(kPi + std::atan(d.y() / d.x())).epsilon(1e-14));
    CHECK(a.theta > kPi / 2.0);
    CHECK(a.theta < kPi);
}

TEST_CASE("angles_from_positions: nadir, axis cases and degenerate input", "[geometry]")
{
    const Vec3 sat(1e3, 2e3, 300e3);
    const AnglePair nadir = angles_from_positions(sat, Vec3(1e3, 2e3, 0.0), ArrayFrame::satellite_looking_down);
    CHECK(nadir.phi == 0.0);
    CHECK(nadir.theta == 0.0);
    CHECK(angles_from_positions(sat, Vec3(1e3, 5e3, 0.0), ArrayFrame::satellite_looking_down).theta == Approx(kPi / 2));
    CHECK(angles_from_positions(sat, Vec3(1e3, -5e3, 0.0), ArrayFrame::satellite_looking_down).theta == Approx(-kPi / 2));
    CHECK(angles_from_positions(sat, Vec3(-5e3, 2e3, 0.0), ArrayFrame::satellite_looking_down).theta == Approx(kPi));
    CHECK(angles_from_positions(sat, Vec3(5e3, 2e3, 0.0), ArrayFrame::satellite_looking_down).theta == Approx(0.0));
    const AnglePair up = angles_from_positions(Vec3::Zero(), Vec3(0.0, 0.0, 5e3), ArrayFrame::receiver_looking_up);
    CHECK(up.phi == 0.0);
    CHECK_THROWS_AS(angles_from_positions(sat, sat, ArrayFrame::satellite_looking_down), GeometryError);
}

TEST_CASE("angles_from_positions inverts direction_from_angles", "[geometry][property]")
{
    Gen g(14);
    for (int t = 0; t < 500; ++t)
    {
        AnglePair ang = g.angle();
        ang.phi = std::max(ang.phi, 1e-3);
        const Vec3 p = g.uniform(100.0, 1e5) * direction_from_angles(ang);
        const AnglePair back = angles_from_positions(Vec3::Zero(), p, ArrayFrame::receiver_looking_up);
        CHECK(std::abs(back.phi - ang.phi) < 1e-9);
        CHECK(std::abs(std::remainder(back.theta - ang.theta, 2 * kPi)) < 1e-9);
    }
}

TEST_CASE("bistatic angle examples", "[geometry]")
{
    CHECK(bistatic_angle(Vec3(0, 0, 340e3), Vec3(0, 0, 5e3), Vec3::Zero()) == Approx(kPi));
    // Rays to the satellite (+z) and to the receiver (+x) are orthogonal
    CHECK(bistatic_angle(Vec3(10e3, 0, 340e3), Vec3(10e3, 0, 0), Vec3(20e3, 0, 0)) == Approx(kPi / 2));
    CHECK_THROWS_AS(bistatic_angle(Vec3(0, 0, 1), Vec3(0, 0, 1), Vec3::Zero()), GeometryError);
}

TEST_CASE("bistatic angle agrees with the law of cosines and is symmetric", "[geometry][property]")
{
    const Vec3 sat(30e3, -30e3, 340e3), tar(3e3, 3e3, 5e3), rx = Vec3::Zero();
    const double rt = (tar - sat).norm(), rr = tar.norm(), rl = sat.norm();
    CHECK(bistatic_angle(sat, tar, rx) == Approx(std::acos((rt * rt + rr * rr - rl * rl) / (2 * rt * rr))).epsilon(1e-12));
    Gen g(15);
    for (int t = 0; t < 200; ++t)
    {
        const Vec3 a = g.point(-1e5, 1e5), b = g.point(-1e5, 1e5), c = g.point(-1e5, 1e5);
        const double beta = bistatic_angle(a, b, c);
        CHECK(beta >= 0.0);
        CHECK(beta <= kPi);
        CHECK(beta == bistatic_angle(c, b, a));
    }
}

TEST_CASE("ellipsoid inversion recovers the reference target", "[geometry]")
{
    const Vec3 sat(30e3, -30e3, 340e3), tar(3e3, 3e3, 5e3);
    const Vec3 dir = tar.normalized();
    const auto fix = invert_bistatic_ellipsoid(sat, dir, bistatic_range(sat, tar));
    CHECK((fix.target - tar).norm() <= 1e-9 * 1e3);
    CHECK(fix.r_rx == Approx(tar.norm()).epsilon(1e-12));
}

TEST_CASE("ellipsoid inversion errors and the colinear limit", "[geometry]")
{
    const Vec3 sat(30e3, -30e3, 340e3);
    const double los = sat.norm();
    CHECK_THROWS_WITH(invert_bistatic_ellipsoid(sat, Vec3(0, 0, 1), los), Catch::Matchers::ContainsSubstring("inside-baseline"));
    // Arrival along the line of sight, target beyond the satellite
    const double range = 1.5 * los;
    const auto fix = invert_bistatic_ellipsoid(sat, sat.normalized(), range);
    CHECK(fix.r_rx == Approx((range + los) / 2.0).epsilon(1e-12));
}

TEST_CASE("geometry round trip over random scenes", "[geometry][property]")
{
    Gen g(16);
    int checked = 0;
    while (checked < 1000)
    {
        const Vec3 sat(g.uniform(-2e5, 2e5), g.uniform(-2e5, 2e5), g.uniform(3e5, 6e5));
        const Vec3 tar(g.uniform(-5e4, 5e4), g.uniform(-5e4, 5e4), g.uniform(100.0, 2e4));
        const double range = bistatic_range(sat, tar);
        if (range <= sat.norm() * (1 + 1e-9))
            continue;
        const auto aoa = angles_from_positions(Vec3::Zero(), tar, ArrayFrame::receiver_looking_up);
        const auto fix = invert_bistatic_ellipsoid(sat, direction_from_angles(aoa), range);
        CHECK((fix.target - tar).norm() <= 1e-9 * tar.norm());
        CHECK(std::abs(fix.r_rx + (fix.target - sat).norm() - range) <= 1e-12 * range);
        const auto aod = angles_from_positions(sat, tar, ArrayFrame::satellite_looking_down);
        const auto aod2 = angles_from_positions(sat, fix.target, ArrayFrame::satellite_looking_down);
        CHECK(std::abs(aod.phi - aod2.phi) <= 1e-9);
        CHECK(std::abs(std::remainder(aod.theta - aod2.theta, 2 * kPi)) <= 1e-9);
        ++checked;
    }
}
