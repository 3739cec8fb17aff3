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

#ifndef LEOISAC_GEOMETRY_HPP
#define LEOISAC_GEOMETRY_HPP

#include <Eigen/Dense>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace leoisac
{
    using cdouble = std::complex<double>;
    using Vec3 = Eigen::Vector3d; // Cartesian position or direction, meters
    using CVec = Eigen::VectorXcd;
    using CMat = Eigen::MatrixXcd;
    using RMat = Eigen::MatrixXd;
    using RVec = Eigen::VectorXd;

    inline constexpr double kPi = std::numbers::pi;
    inline constexpr double kSpeedOfLight = 3.0e8; // m/s, value used throughout the link budgets
    inline constexpr double kBoltzmann = 1.38e-23; // J/K

    // Thrown for geometries the formulas cannot represent (coincident points, degenerate ellipsoids)
    class GeometryError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // Uniform planar array with half-wavelength spacing on both axes
    struct UpaSpec
    {
        int nx = 1;
        int ny = 1;

        UpaSpec() = default;
        UpaSpec(int nx_, int ny_);
        int size() const { return nx * ny; }
        bool operator==(const UpaSpec &) const = default;
    };

    // Azimuth theta in (-pi, pi], off-boresight angle phi in [0, pi/2]
    struct AnglePair
    {
        double theta = 0.0;
        double phi = 0.0;
        bool operator==(const AnglePair &) const = default;
    };

    // Satellite arrays look down (boresight -z); the ground receiver array looks up (boresight +z)
    enum class ArrayFrame
    {
        satellite_looking_down,
        receiver_looking_up
    };

    // Array response a(theta, phi) = a_x kron a_y. Element (nx, ny), 0-based, sits at index nx * ny_count + ny
    // and carries exp(-j*pi*(nx*sin(phi)cos(theta) + ny*sin(phi)sin(theta))).
    CVec steering_vector(const UpaSpec &upa, const AnglePair &ang);

    struct SteeringDerivatives
    {
        CVec d_theta; // d a / d theta
        CVec d_phi;   // d a / d phi
    };

    // Analytic partial derivatives of steering_vector
    SteeringDerivatives steering_derivatives(const UpaSpec &upa, const AnglePair &ang);

    // Azimuth / off-boresight pair of the ray from -> to.
    // The azimuth follows the five-case arctangent table (0 when the points share x and y).
    // Off-boresight is acos(-dz/|d|) looking down and acos(dz/|d|) looking up.
    AnglePair angles_from_positions(const Vec3 &from, const Vec3 &to, ArrayFrame frame);

    // Unit vector [sin(phi)cos(theta), sin(phi)sin(theta), cos(phi)] of an upward-looking arrival pair
    Vec3 direction_from_angles(const AnglePair &ang);

    // Angle at the target between the rays towards the satellite and the receiver, in [0, pi]
    double bistatic_angle(const Vec3 &sat, const Vec3 &tar, const Vec3 &rx);

    struct EllipsoidFix
    {
        Vec3 target;     // reconstructed target position, meters
        double r_rx = 0; // receiver-to-target distance, meters
    };

    // Intersects the arrival ray (from the receiver along aoa_dir) with the constant bistatic-range
    // ellipsoid whose foci are the receiver and the satellite.
    // Throws GeometryError("inside-baseline") if bistatic_range <= |sat - rx|.
    EllipsoidFix invert_bistatic_ellipsoid(const Vec3 &sat, const Vec3 &aoa_dir, double bistatic_range,
                                           const Vec3 &rx = Vec3::Zero());

    // Sum of target-to-satellite and target-to-receiver distances
    double bistatic_range(const Vec3 &sat, const Vec3 &tar, const Vec3 &rx = Vec3::Zero());

    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
    inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
}

#endif
