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

#include "leoisac/rates.hpp"

#include <cmath>
#include <stdexcept>

namespace leoisac
{
    std::string ModeConfig::name() const
    {
        std::string s = has_common() ? "rsma-" : "sdma-";
        if (comm_only)
            return s + "comm-only";
        if (!radar_sequence)
            return s + "isac-nors";
        return s + (sic_of_radar ? "isac-sic" : "isac-nosic");
    }

    ModeConfig ModeConfig::parse(const std::string &name)
    {
        for (const auto &m : all_modes())
            if (m.name() == name)
                return m;
        throw std::invalid_argument("unknown transmission mode '" + name + "'");
    }

    std::vector<ModeConfig> ModeConfig::all_modes()
    {
        std::vector<ModeConfig> out;
        for (auto ma : {MultipleAccess::rsma, MultipleAccess::sdma})
        {
            out.push_back({ma, false, false, true});
            out.push_back({ma, true, true, false});
            out.push_back({ma, true, false, false});
            out.push_back({ma, false, false, false});
        }
        return out;
    }

    PrecoderMatrix::PrecoderMatrix(CMat m) : P(std::move(m))
    {
        if (P.cols() < 3)
            throw std::invalid_argument("PrecoderMatrix: need at least one private column plus p_c and p_R");
    }

    void PrecoderMatrix::apply_mode(const ModeConfig &mode)
    {
        if (!mode.has_common())
            common().setZero();
        if (!mode.has_radar())
            radar().setZero();
    }

    namespace
    {
        void check_dims(std::size_t k, const PrecoderMatrix &P)
        {
            if (int(k) != P.users())
                throw std::invalid_argument("rates: user count does not match precoder columns");
        }

        // Shared SINR bookkeeping: gains(k, j) = |v_k^H p_j|^2, noise_k added to every denominator
        RatePair rates_from_gains(const RMat &gains, const RVec &noise, double delta_sic)
        {
            const int K = int(gains.rows());
            RatePair r{RVec(K), RVec(K)};
            for (int k = 0; k < K; ++k)
            {
                const double priv_sum = gains.row(k).head(K).sum();
                const double radar = delta_sic * gains(k, K + 1);
                const double common_den = priv_sum + radar + noise(k);
                const double priv_den = priv_sum - gains(k, k) + radar + noise(k);
                r.common(k) = std::log2(1.0 + gains(k, K) / common_den);
                r.priv(k) = std::log2(1.0 + gains(k, k) / priv_den);
            }
            return r;
        }
    }

    RatePair instantaneous_rates(const std::vector<CVec> &h, const PrecoderMatrix &P, double delta_sic,
                                 double sigma_c2)
    {
        check_dims(h.size(), P);
        const int K = P.users();
        RMat gains(K, K + 2);
        for (int k = 0; k < K; ++k)
            gains.row(k) = (h[k].adjoint() * P.P).cwiseAbs2();
        return rates_from_gains(gains, RVec::Constant(K, sigma_c2), delta_sic);
    }

    RatePair ergodic_bounds(const std::vector<CVec> &a, const RVec &rho, const PrecoderMatrix &P, double delta_sic)
    {
        check_dims(a.size(), P);
        if (rho.size() != P.users() || (rho.array() <= 0.0).any())
            throw std::invalid_argument("ergodic_bounds: rho must be positive, one per user");
        const int K = P.users();
        RMat gains(K, K + 2);
        for (int k = 0; k < K; ++k)
            gains.row(k) = (a[k].adjoint() * P.P).cwiseAbs2();
        return rates_from_gains(gains, rho, delta_sic);
    }

    double min_total_rate(const RatePair &bounds, const CommonRateAlloc &alloc, double tolerance)
    {
        const RVec &C = alloc.C;
        if (C.size() != bounds.priv.size())
            throw std::invalid_argument("min_total_rate: allocation size mismatch");
        if ((C.array() < 0.0).any())
            throw std::invalid_argument("min_total_rate: negative common-rate portion");
        const double budget = bounds.common.size() ? bounds.common.minCoeff() : 0.0;
        if (C.sum() > budget + tolerance * std::max(1.0, std::abs(budget)))
            throw std::invalid_argument("min_total_rate: common-rate portions exceed the decodable common rate");
        return (bounds.priv + C).minCoeff();
    }

    Beampatterns beampatterns(const PrecoderMatrix &P, const UpaSpec &upa, const std::vector<double> &thetas,
                              const std::vector<double> &phis)
    {
        if (thetas.empty() || phis.empty())
            throw std::invalid_argument("beampatterns: empty grid");
        if (upa.size() != P.antennas())
            throw std::invalid_argument("beampatterns: array size does not match precoder rows");
        const int K = P.users();
        const double fro = P.total_power();
        const Eigen::Index nt = Eigen::Index(thetas.size()), np = Eigen::Index(phis.size());
        Beampatterns bp{RMat::Zero(nt, np), RMat::Zero(nt, np), RMat::Zero(nt, np)};
        if (fro <= 0.0)
            return bp;
        for (Eigen::Index i = 0; i < nt; ++i)
            for (Eigen::Index j = 0; j < np; ++j)
            {
                const CVec a = steering_vector(upa, {thetas[i], phis[j]});
                const RVec g = (a.adjoint() * P.P).cwiseAbs2().transpose();
                bp.priv(i, j) = g.head(K).sum() / fro;
                bp.common(i, j) = g(K) / fro;
                bp.radar(i, j) = g(K + 1) / fro;
            }
        return bp;
    }

    PowerShares power_shares(const PrecoderMatrix &P)
    {
        const int K = P.users();
        const double fro = P.total_power();
        PowerShares s{RVec::Zero(K)};
        if (fro <= 0.0)
            return s;
        for (int k = 0; k < K; ++k)
            s.priv(k) = P.priv(k).squaredNorm() / fro;
        s.common = P.common().squaredNorm() / fro;
        s.radar = P.radar().squaredNorm() / fro;
        return s;
    }
}
