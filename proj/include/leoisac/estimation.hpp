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

#ifndef LEOISAC_ESTIMATION_HPP
#define LEOISAC_ESTIMATION_HPP

#include "leoisac/waveform.hpp"

#include <vector>

namespace leoisac
{
    // Search grid for AOA estimation; axes in radians, strictly increasing
    struct AngleGrid
    {
        std::vector<double> theta;
        std::vector<double> phi;

        // theta in (-pi, pi] and phi in [0, pi/2] with one step on both axes
        static AngleGrid hemisphere(double step_rad);
        // Inclusive uniform axes starting at the lower bounds
        static AngleGrid uniform(double theta_lo, double theta_hi, double phi_lo, double phi_hi, double step_rad);

        void validate() const;
        double theta_step() const;
        double phi_step() const;
        AnglePair at(int i_theta, int i_phi) const { return {theta[i_theta], phi[i_phi]}; }
        // Indices of the grid point closest to `ang` on each axis
        std::pair<int, int> nearest(const AnglePair &ang) const;
    };

    // (1 / (L + tau_max)) Y Y^H
    CMat sample_covariance(const EchoFrame &echo);
    CMat sample_covariance(const CMat &Y);

    struct MusicResult
    {
        RMat spectrum; // theta x phi, 1 / (b^H U_n U_n^H b)
        int i_theta = 0;
        int i_phi = 0;
        AnglePair peak;
        double peak_value = 0;
        double median = 0;
        double peak_to_sidelobe_db = 0; // peak over the largest value outside the half-power main lobe
    };

    // Pseudo-spectrum over the grid. The noise projector is evaluated as I - U_s U_s^H, which equals
    // U_n U_n^H for the orthonormal eigenbasis. Eigenvalues tied across the signal/noise split share the
    // signal dimensions equally (R = sigma^2 I gives a flat spectrum). Ties go to the smallest (theta, phi) index.
    MusicResult music_spectrum(const CMat &R, const UpaSpec &rx, const AngleGrid &grid, int signal_dim = 1);

    // b^H U_n U_n^H b with U_n formed from the N_Rx - signal_dim minor eigenvectors, ties split as above
    double music_residual(const CMat &R, const UpaSpec &rx, const AnglePair &ang, int signal_dim = 1);

    struct MatchedFilterSetup
    {
        Vec3 sat = Vec3::Zero();
        Vec3 rx = Vec3::Zero();
        UpaSpec tx;
        double T_s = 1e-7;
        long long window_start = 0;  // samples; hypothesis tau has bistatic range c (window_start + tau) T_s
        std::vector<int> taus;       // delay hypotheses within the window
        std::vector<double> dopplers; // Hz
        double detection_threshold = 20.0;

        void validate() const;
    };

    struct EstimationReport
    {
        AnglePair aoa_hat;
        int tau_hat = 0;
        double v_hat = 0;
        AnglePair aod_hat;
        Vec3 position_hat = Vec3::Zero();
        double r_rx = 0;
        double bistatic_range = 0;
        double peak_to_median = 0;
        bool failed = false;  // peak_to_median below the detection threshold
        RMat surface;         // |y^H y_ref| per (tau, v); -inf for hypotheses without a valid geometry
        int invalid_cells = 0;
    };

    // Bistatic range of delay hypothesis tau
    double window_bistatic_range(long long window_start, int tau, double T_s);

    // Joint delay / Doppler / AOD search. Each tau fixes a target on the arrival ray through the bistatic
    // ellipsoid, hence an AOD and the reference a(AOD)^H [X V(v), 0] J(tau).
    // Throws GeometryError("no admissible geometry") if no tau maps to a valid target.
    EstimationReport matched_filter_joint(const CMat &X, const Eigen::RowVectorXcd &y, const AnglePair &aoa_hat,
                                          const MatchedFilterSetup &setup);
}

#endif
