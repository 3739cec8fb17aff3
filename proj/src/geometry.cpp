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

#include <algorithm>
#include <cmath>

namespace leoisac
{
    UpaSpec::UpaSpec(int nx_, int ny_) : nx(nx_), ny(ny_)
    {
        if (nx <= 0 || ny <= 0)
            throw std::invalid_argument("UpaSpec: element counts must be positive");
    }

    namespace
    {
        // Per-axis phase increments of the half-wavelength UPA
        struct AxisPhase
        {
            double ux, uy;
        };

        AxisPhase axis_phase(const AnglePair &ang)
        {
            const double s = std::sin(ang.phi);
            return {kPi * s * std::cos(ang.theta), kPi * s * std::sin(ang.theta)};
        }
    }

    CVec steering_vector(const UpaSpec &upa, const AnglePair &ang)
    {
        const auto [ux, uy] = axis_phase(ang);
        CVec a(upa.size());
        for (int ix = 0; ix < upa.nx; ++ix)
            for (int iy = 0; iy < upa.ny; ++iy)
                a(ix * upa.ny + iy) = std::polar(1.0, -(ix * ux + iy * uy));
        return a;
    }

    SteeringDerivatives steering_derivatives(const UpaSpec &upa, const AnglePair &ang)
    {
        const double sp = std::sin(ang.phi), cp = std::cos(ang.phi);
        const double st = std::sin(ang.theta), ct = std::cos(ang.theta);
        const CVec a = steering_vector(upa, ang);
        SteeringDerivatives d{CVec(upa.size()), CVec(upa.size())};
        const cdouble mj(0.0, -kPi);
        for (int ix = 0; ix < upa.nx; ++ix)
            for (int iy = 0; iy < upa.ny; ++iy)
            {
                const int n = ix * upa.ny + iy;
                d.d_theta(n) = a(n) * mj * (sp * (-ix * st + iy * ct));
                d.d_phi(n) = a(n) * mj * (cp * (ix * ct + iy * st));
            }
        return d;
    }

    AnglePair angles_from_positions(const Vec3 &from, const Vec3 &to, ArrayFrame frame)
    {
        const Vec3 d = to - from;
        const double range = d.norm();
        if (!(range > 0.0))
            throw GeometryError("angles_from_positions: coincident points");

        double theta = 0.0;
        if (d.x() > 0.0)
            theta = std::atan(d.y() / d.x());
        else if (d.x() < 0.0)
            theta = d.y() >= 0.0 ? std::atan(d.y() / d.x()) + kPi : std::atan(d.y() / d.x()) - kPi;
        else if (d.y() > 0.0)
            theta = kPi / 2;
        else if (d.y() < 0.0)
            theta = -kPi / 2;

        const double dz = frame == ArrayFrame::satellite_looking_down ? from.z() - to.z() : d.z();
        const double phi = std::acos(std::clamp(dz / range, -1.0, 1.0));
        return {theta, phi};
    }

    Vec3 direction_from_angles(const AnglePair &ang)
    {
        const double s = std::sin(ang.phi);
        return {s * std::cos(ang.theta), s * std::sin(ang.theta), std::cos(ang.phi)};
    }

    double bistatic_angle(const Vec3 &sat, const Vec3 &tar, const Vec3 &rx)
    {
        const Vec3 u = sat - tar, v = rx - tar;
        if (!(u.norm() > 0.0) || !(v.norm() > 0.0))
            throw GeometryError("bistatic_angle: coincident points");
        return std::atan2(u.cross(v).norm(), u.dot(v));
    }

    double bistatic_range(const Vec3 &sat, const Vec3 &tar, const Vec3 &rx)
    {
        return (sat - tar).norm() + (rx - tar).norm();
    }

    EllipsoidFix invert_bistatic_ellipsoid(const Vec3 &sat, const Vec3 &aoa_dir, double bistatic_range,
                                           const Vec3 &rx)
    {
        if (std::abs(aoa_dir.norm() - 1.0) > 1e-9)
            throw GeometryError("invert_bistatic_ellipsoid: arrival direction must be a unit vector");
        const Vec3 baseline = sat - rx;
        const double r_los = baseline.norm();
        if (!(r_los > 0.0))
            throw GeometryError("invert_bistatic_ellipsoid: satellite coincides with receiver");
        if (!(bistatic_range > r_los))
            throw GeometryError("inside-baseline");

        const double cos_eta = std::clamp(baseline.dot(aoa_dir) / r_los, -1.0, 1.0);
        const double den = 2.0 * (bistatic_range - r_los * cos_eta);
        if (!(den > 0.0))
            throw GeometryError("degenerate colinear geometry");

        const double r_rx = (bistatic_range * bistatic_range - r_los * r_los) / den;
        return {rx + r_rx * aoa_dir, r_rx};
    }
}
