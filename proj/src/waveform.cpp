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

#include "leoisac/waveform.hpp"

#include <random>

namespace leoisac
{
    SymbolFrame generate_streams(int K, int L, std::uint64_t seed, const ModeConfig &mode)
    {
        if (K < 1)
            throw std::invalid_argument("generate_streams: K must be at least 1");
        if (L < K + 2)
            throw std::invalid_argument("generate_streams: L must be at least K + 2");
        SymbolFrame f;
        f.seed = seed;
        f.S = CMat::Zero(K + 2, L);

        std::mt19937_64 rng(seed);
        std::normal_distribution<double> n(0.0, std::sqrt(0.5));
        for (int k = 0; k < K + 1; ++k)
            for (int l = 0; l < L; ++l)
            {
                const double re = n(rng), im = n(rng);
                f.S(k, l) = cdouble(re, im);
            }

        // The radar sequence has its own stream so it does not depend on K
        std::mt19937_64 rr(seed ^ 0x9e3779b97f4a7c15ULL);
        std::uniform_real_distribution<double> ph(-kPi, kPi);
        for (int l = 0; l < L; ++l)
            f.S(K + 1, l) = std::polar(1.0, ph(rr));

        if (!mode.has_common())
            f.S.row(K).setZero();
        if (!mode.has_radar())
            f.S.row(K + 1).setZero();
        return f;
    }

    CMat orthogonal_streams(int rows, int L)
    {
        if (rows < 1 || rows > L)
            throw std::invalid_argument("orthogonal_streams: need 1 <= rows <= L");
        CMat S(rows, L);
        for (int i = 0; i < rows; ++i)
            for (int l = 0; l < L; ++l)
                S(i, l) = std::polar(1.0, 2.0 * kPi * double((long long)i * l % L) / double(L));
        return S;
    }

    CMat precode(const PrecoderMatrix &P, const SymbolFrame &frame)
    {
        if (P.P.cols() != frame.S.rows())
            throw std::invalid_argument("precode: precoder columns must match stream rows");
        return P.P * frame.S;
    }

    CMat apply_doppler(const CMat &X, double v, double T_s)
    {
        CMat out = X;
        for (int l = 0; l < X.cols(); ++l)
            out.col(l) *= std::polar(1.0, 2.0 * kPi * v * double(l + 1) * T_s);
        return out;
    }

    CMat shift_frame(const CMat &M, int tau, int cols)
    {
        if (tau < 0 || cols < 0)
            throw std::invalid_argument("shift_frame: negative shift or width");
        CMat out = CMat::Zero(M.rows(), cols);
        const int n = std::max(0, std::min<int>(int(M.cols()), cols - tau));
        if (n > 0)
            out.middleCols(tau, n) = M.leftCols(n);
        return out;
    }

    EchoFrame synthesize_echo(const CMat &X, const RadarLink &link, const UpaSpec &tx, const UpaSpec &rx, int tau,
                              double v, double T_s, int tau_max, double sigma_r2, std::uint64_t seed)
    {
        if (X.rows() != tx.size())
            throw std::invalid_argument("synthesize_echo: X rows must equal the transmit array size");
        if (tau_max < 1 || tau < 1 || tau > tau_max)
            throw std::invalid_argument("synthesize_echo: tau out of range");
        if (!(T_s > 0.0) || !(std::abs(v) * T_s < 0.5))
            throw std::invalid_argument("synthesize_echo: Doppler must satisfy |v| T_s < 0.5");
        if (sigma_r2 < 0.0)
            throw std::invalid_argument("synthesize_echo: negative noise power");

        const int L = int(X.cols());
        const CVec a = steering_vector(tx, link.aod);
        const CVec b = steering_vector(rx, link.aoa);
        const Eigen::RowVectorXcd s = a.adjoint() * apply_doppler(X, v, T_s);
        const Eigen::RowVectorXcd shifted = shift_frame(s, tau, L + tau_max);

        EchoFrame e;
        e.L = L;
        e.tau_max = tau_max;
        e.tau_tar = tau;
        e.v_tar = v;
        e.Y = link.alpha * b * shifted;
        if (sigma_r2 > 0.0)
        {
            std::mt19937_64 rng(seed);
            std::normal_distribution<double> n(0.0, std::sqrt(sigma_r2 / 2.0));
            for (int c = 0; c < e.Y.cols(); ++c)
                for (int r = 0; r < e.Y.rows(); ++r)
                {
                    const double re = n(rng), im = n(rng);
                    e.Y(r, c) += cdouble(re, im);
                }
        }
        return e;
    }

    Eigen::RowVectorXcd receive_combine(const EchoFrame &echo, const CVec &b_hat)
    {
        if (!(b_hat.norm() > 0.0))
            throw std::invalid_argument("receive_combine: zero combiner");
        if (b_hat.size() != echo.Y.rows())
            throw std::invalid_argument("receive_combine: combiner length mismatch");
        return b_hat.adjoint() * echo.Y;
    }
}
