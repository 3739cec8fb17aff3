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

#ifndef LEOISAC_RATES_HPP
#define LEOISAC_RATES_HPP

#include "leoisac/geometry.hpp"

#include <string>
#include <vector>

namespace leoisac
{
    enum class MultipleAccess
    {
        rsma,
        sdma
    };

    // One cell of the transmission-mode matrix (RSMA/SDMA x radar-sequence usage)
    struct ModeConfig
    {
        MultipleAccess multiple_access = MultipleAccess::rsma;
        bool radar_sequence = true; // dedicated radar column p_R present
        bool sic_of_radar = true;   // users cancel s_R before decoding (delta_SIC = 0)
        bool comm_only = false;     // no radar column and no CRB constraints

        bool has_common() const { return multiple_access == MultipleAccess::rsma; }
        bool has_radar() const { return radar_sequence && !comm_only; }
        bool enforces_crb() const { return !comm_only; }
        double delta_sic() const { return has_radar() && !sic_of_radar ? 1.0 : 0.0; }

        // Canonical names: {rsma,sdma}-{comm-only,isac-sic,isac-nosic,isac-nors}
        std::string name() const;
        static ModeConfig parse(const std::string &name);
        static std::vector<ModeConfig> all_modes();
        bool operator==(const ModeConfig &other) const { return name() == other.name(); }
    };

    // N_Tx x (K+2) dual-functional precoder [p_1 .. p_K, p_c, p_R]
    struct PrecoderMatrix
    {
        CMat P;

        PrecoderMatrix() = default;
        PrecoderMatrix(int n_tx, int k_users) : P(CMat::Zero(n_tx, k_users + 2)) {}
        explicit PrecoderMatrix(CMat m);

        int users() const { return int(P.cols()) - 2; }
        int antennas() const { return int(P.rows()); }
        auto priv(int k) { return P.col(k); }
        auto priv(int k) const { return P.col(k); }
        auto common() { return P.col(P.cols() - 2); }
        auto common() const { return P.col(P.cols() - 2); }
        auto radar() { return P.col(P.cols() - 1); }
        auto radar() const { return P.col(P.cols() - 1); }

        // Zeroes the columns a mode does not use
        void apply_mode(const ModeConfig &mode);
        double total_power() const { return P.squaredNorm(); }
    };

    struct CommonRateAlloc
    {
        RVec C; // per-user share of the common rate, bits/s/Hz
    };

    // Per-user common and private rates, bits/s/Hz
    struct RatePair
    {
        RVec common;
        RVec priv;
    };

    // Rates for instantaneous channels h_k (length-K list), noise power sigma_c2
    RatePair instantaneous_rates(const std::vector<CVec> &h, const PrecoderMatrix &P, double delta_sic,
                                 double sigma_c2);

    // Ergodic upper bounds from steering vectors a_k and rho_k = sigma_c^2 / gamma_k
    RatePair ergodic_bounds(const std::vector<CVec> &a, const RVec &rho, const PrecoderMatrix &P, double delta_sic);

    // min_k (R_p,k + C_k). Throws std::invalid_argument if C is negative or sum(C) exceeds min_k R_c,k.
    double min_total_rate(const RatePair &bounds, const CommonRateAlloc &alloc, double tolerance = 1e-12);

    struct Beampatterns
    {
        RMat radar;   // rows: theta grid, cols: phi grid
        RMat common;
        RMat priv;
    };

    // Transmit beampatterns |p^H a(theta, phi)|^2 / ||P||_F^2 on a theta x phi grid
    Beampatterns beampatterns(const PrecoderMatrix &P, const UpaSpec &upa, const std::vector<double> &thetas,
                              const std::vector<double> &phis);

    struct PowerShares
    {
        RVec priv;   // ||p_k||^2 / ||P||_F^2
        double common = 0;
        double radar = 0;
    };

    PowerShares power_shares(const PrecoderMatrix &P);
}

#endif
