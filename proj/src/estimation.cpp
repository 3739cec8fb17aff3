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

#include "leoisac/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace leoisac
{
    namespace
    {
        std::vector<double> axis(double lo, double hi, double step)
        {
            if (!(step > 0.0) || !(hi >= lo))
                throw std::invalid_argument("AngleGrid: bad axis bounds or step");
            std::vector<double> v;
            const long n = std::lround(std::floor((hi - lo) / step + 1e-9));
            for (long i = 0; i <= n; ++i)
                v.push_back(lo + double(i) * step);
            return v;
        }

        double median_of(std::vector<double> v)
        {
            if (v.empty())
                return 0.0;
            const size_t mid = v.size() / 2;
            std::nth_element(v.begin(), v.begin() + mid, v.end());
            double m = v[mid];
            if (v.size() % 2 == 0)
                m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + mid));
            return m;
        }

        Eigen::SelfAdjointEigenSolver<CMat> eig(const CMat &R) { return Eigen::SelfAdjointEigenSolver<CMat>(0.5 * (R + R.adjoint())); }

        // W with W W^H the signal-subspace projector. Eigenvalues tied with the smallest signal eigenvalue share
        // the remaining signal dimensions equally, so the result does not depend on the solver's basis choice.
        CMat signal_factor(const CMat &R, int signal_dim)
        {
            const auto es = eig(R);
            const RVec &lam = es.eigenvalues();
            const int n = int(lam.size()), split = n - signal_dim;
            const double tol = 1e-9 * std::max(std::abs(lam(n - 1)), std::numeric_limits<double>::min());
            int lo = split, hi = split;
            while (lo > 0 && std::abs(lam(lo - 1) - lam(split)) <= tol)
                --lo;
            while (hi + 1 < n && std::abs(lam(hi + 1) - lam(split)) <= tol)
                ++hi;
            const int tied = hi - lo + 1, above = n - 1 - hi;
            const double w = std::sqrt(double(signal_dim - above) / double(tied));
            CMat W(n, above + tied);
            W.leftCols(above) = es.eigenvectors().rightCols(above);
            W.rightCols(tied) = w * es.eigenvectors().middleCols(lo, tied);
            return W;
        }
    }

    AngleGrid AngleGrid::hemisphere(double step_rad)
    {
        AngleGrid g;
        const long n = std::lround(2.0 * kPi / step_rad);
        if (n < 1 || std::abs(double(n) * step_rad - 2.0 * kPi) > 1e-9)
            throw std::invalid_argument("AngleGrid: step must divide 2 pi");
        for (long i = 1; i <= n; ++i)
            g.theta.push_back(-kPi + double(i) * step_rad);
        g.phi = axis(0.0, kPi / 2.0, step_rad);
        return g;
    }

    AngleGrid AngleGrid::uniform(double theta_lo, double theta_hi, double phi_lo, double phi_hi, double step_rad)
    {
        AngleGrid g;
        g.theta = axis(theta_lo, theta_hi, step_rad);
        g.phi = axis(phi_lo, phi_hi, step_rad);
        return g;
    }

    void AngleGrid::validate() const
    {
        auto check = [](const std::vector<double> &v) {
            if (v.empty())
                throw std::invalid_argument("AngleGrid: empty axis");
            for (size_t i = 1; i < v.size(); ++i)
                if (!(v[i] > v[i - 1]))
                    throw std::invalid_argument("AngleGrid: axes must be strictly increasing");
        };
        check(theta);
        check(phi);
    }

    double AngleGrid::theta_step() const { return theta.size() > 1 ? theta[1] - theta[0] : 0.0; }
    double AngleGrid::phi_step() const { return phi.size() > 1 ? phi[1] - phi[0] : 0.0; }

    std::pair<int, int> AngleGrid::nearest(const AnglePair &ang) const
    {
        auto near = [](const std::vector<double> &v, double x) {
            int best = 0;
            for (int i = 1; i < int(v.size()); ++i)
                if (std::abs(v[i] - x) < std::abs(v[best] - x))
                    best = i;
            return best;
        };
        return {near(theta, ang.theta), near(phi, ang.phi)};
    }

    CMat sample_covariance(const CMat &Y)
    {
        if (Y.cols() < 1)
            throw std::invalid_argument("sample_covariance: need at least one column");
        CMat R = Y * Y.adjoint() / double(Y.cols());
        return 0.5 * (R + R.adjoint());
    }

    CMat sample_covariance(const EchoFrame &echo) { return sample_covariance(echo.Y); }

    double music_residual(const CMat &R, const UpaSpec &rx, const AnglePair &ang, int signal_dim)
    {
        const int n = int(R.rows());
        if (signal_dim < 1 || signal_dim >= n || rx.size() != n)
            throw std::invalid_argument("music_residual: bad dimensions");
        const CMat W = signal_factor(R, signal_dim);
        const CVec b = steering_vector(rx, ang);
        return std::max(b.squaredNorm() - (W.adjoint() * b).squaredNorm(), 0.0);
    }

    MusicResult music_spectrum(const CMat &R, const UpaSpec &rx, const AngleGrid &grid, int signal_dim)
    {
        grid.validate();
        const int n = int(R.rows());
        if (signal_dim < 1 || signal_dim >= n || rx.size() != n)
            throw std::invalid_argument("music_spectrum: bad dimensions");
        const CMat Us = signal_factor(R, signal_dim);

        const int nt = int(grid.theta.size()), np = int(grid.phi.size());
        MusicResult res;
        res.spectrum.resize(nt, np);
        res.peak_value = -1.0;
        for (int i = 0; i < nt; ++i)
            for (int j = 0; j < np; ++j)
            {
                const CVec b = steering_vector(rx, grid.at(i, j));
                const double resid = std::max(b.squaredNorm() - (Us.adjoint() * b).squaredNorm(), 0.0);
                const double val = resid > 0.0 ? 1.0 / resid : std::numeric_limits<double>::max();
                res.spectrum(i, j) = val;
                if (val > res.peak_value)
                {
                    res.peak_value = val;
                    res.i_theta = i;
                    res.i_phi = j;
                }
            }
        res.peak = grid.at(res.i_theta, res.i_phi);
        res.median = median_of(std::vector<double>(res.spectrum.data(), res.spectrum.data() + res.spectrum.size()));

        // Largest value outside the half-power main lobe of the peak direction
        const CVec bp = steering_vector(rx, res.peak);
        const double n2 = bp.squaredNorm() * bp.squaredNorm();
        double side = 0.0;
        for (int i = 0; i < nt; ++i)
            for (int j = 0; j < np; ++j)
            {
                const double corr = std::norm(steering_vector(rx, grid.at(i, j)).dot(bp)) / n2;
                if (corr < 0.5)
                    side = std::max(side, res.spectrum(i, j));
            }
        res.peak_to_sidelobe_db = side > 0.0 ? linear_to_db(res.peak_value / side) : std::numeric_limits<double>::infinity();
        return res;
    }

    void MatchedFilterSetup::validate() const
    {
        if (taus.empty() || dopplers.empty())
            throw std::invalid_argument("MatchedFilterSetup: empty delay or Doppler grid");
        if (!(T_s > 0.0))
            throw std::invalid_argument("MatchedFilterSetup: T_s must be positive");
        for (int t : taus)
            if (t < 0)
                throw std::invalid_argument("MatchedFilterSetup: negative delay hypothesis");
    }

    double window_bistatic_range(long long window_start, int tau, double T_s)
    {
        return kSpeedOfLight * double(window_start + tau) * T_s;
    }

    EstimationReport matched_filter_joint(const CMat &X, const Eigen::RowVectorXcd &y, const AnglePair &aoa_hat,
                                          const MatchedFilterSetup &setup)
    {
        setup.validate();
        if (X.rows() != setup.tx.size())
            throw std::invalid_argument("matched_filter_joint: X rows must equal the transmit array size");
        const int L = int(X.cols());
        const int nt = int(setup.taus.size()), nv = int(setup.dopplers.size());
        const int tmax = *std::max_element(setup.taus.begin(), setup.taus.end());
        if (y.size() < L + tmax)
            throw std::invalid_argument("matched_filter_joint: combined signal shorter than L + max tau");

        const Vec3 dir = direction_from_angles(aoa_hat);

        // Doppler phasors exp(-j 2 pi v (l + 1) T_s)
        CMat phas(nv, L);
        for (int k = 0; k < nv; ++k)
            for (int l = 0; l < L; ++l)
                phas(k, l) = std::polar(1.0, -2.0 * kPi * setup.dopplers[k] * double(l + 1) * setup.T_s);

        EstimationReport rep;
        rep.aoa_hat = aoa_hat;
        rep.surface = RMat::Constant(nt, nv, -std::numeric_limits<double>::infinity());
        std::vector<EllipsoidFix> fix(nt);
        std::vector<AnglePair> aod(nt);
        std::vector<bool> valid(nt, false);
        double best = -1.0;
        int bt = -1, bv = -1;
        std::vector<double> vals;
        for (int i = 0; i < nt; ++i)
        {
            const int tau = setup.taus[i];
            try
            {
                fix[i] = invert_bistatic_ellipsoid(setup.sat, dir, window_bistatic_range(setup.window_start, tau, setup.T_s),
                                                   setup.rx);
                aod[i] = angles_from_positions(setup.sat, fix[i].target, ArrayFrame::satellite_looking_down);
                valid[i] = true;
            }
            catch (const GeometryError &)
            {
                rep.invalid_cells += nv;
                continue;
            }
            const CVec a = steering_vector(setup.tx, aod[i]);
            const Eigen::RowVectorXcd s = a.adjoint() * X;
            // z_l = y[l + tau] conj(a^H x_l); the Doppler term is applied per hypothesis
            const Eigen::RowVectorXcd z = y.segment(tau, L).cwiseProduct(s.conjugate());
            const CVec corr = phas * z.transpose();
            for (int k = 0; k < nv; ++k)
            {
                const double v = std::abs(corr(k));
                rep.surface(i, k) = v;
                vals.push_back(v);
                if (v > best)
                {
                    best = v;
                    bt = i;
                    bv = k;
                }
            }
        }
        if (bt < 0)
            throw GeometryError("no admissible geometry");

        rep.tau_hat = setup.taus[bt];
        rep.v_hat = setup.dopplers[bv];
        rep.aod_hat = aod[bt];
        rep.position_hat = fix[bt].target;
        rep.r_rx = fix[bt].r_rx;
        rep.bistatic_range = window_bistatic_range(setup.window_start, rep.tau_hat, setup.T_s);
        const double med = median_of(vals);
        rep.peak_to_median = med > 0.0 ? best / med : std::numeric_limits<double>::infinity();
        rep.failed = rep.peak_to_median < setup.detection_threshold;
        return rep;
    }
}
