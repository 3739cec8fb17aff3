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

#ifndef LEOISAC_WAVEFORM_HPP
#define LEOISAC_WAVEFORM_HPP

#include "leoisac/channel.hpp"
#include "leoisac/rates.hpp"

#include <cstdint>

namespace leoisac
{
    // Rows [s_1 .. s_K, s_c, s_R], L columns
    struct SymbolFrame
    {
        CMat S;
        std::uint64_t seed = 0;
    };

    // Communication rows i.i.d. CN(0, 1); s_R a unit-modulus pseudo-random phase sequence fixed by the seed.
    // Rows of streams the mode does not use are zero.
    SymbolFrame generate_streams(int K, int L, std::uint64_t seed, const ModeConfig &mode);

    // rows x L frame with rows exp(j 2 pi i l / L), so S S^H = L I exactly (requires rows <= L)
    CMat orthogonal_streams(int rows, int L);

    // X = P S
    CMat precode(const PrecoderMatrix &P, const SymbolFrame &frame);

    // X V(v): column l (0-based) multiplied by exp(j 2 pi v (l + 1) T_s)
    CMat apply_doppler(const CMat &X, double v, double T_s);

    // [M, 0] J(tau): columns moved right by tau into a frame of `cols` columns, overflow dropped
    CMat shift_frame(const CMat &M, int tau, int cols);

    struct EchoFrame
    {
        CMat Y;         // N_Rx x (L + tau_max)
        int L = 0;
        int tau_max = 0;
        int tau_tar = 0;  // true delay, samples within the window
        double v_tar = 0; // true Doppler, Hz
    };

    // Y = alpha b a^H [X V(v), 0] J(tau) + Z with Z i.i.d. CN(0, sigma_r2)
    EchoFrame synthesize_echo(const CMat &X, const RadarLink &link, const UpaSpec &tx, const UpaSpec &rx, int tau,
                              double v, double T_s, int tau_max, double sigma_r2, std::uint64_t seed);

    // y^H = b_hat^H Y
    Eigen::RowVectorXcd receive_combine(const EchoFrame &echo, const CVec &b_hat);
}

#endif
