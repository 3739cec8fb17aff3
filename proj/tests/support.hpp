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

#ifndef LEOISAC_TESTS_SUPPORT_HPP
#define LEOISAC_TESTS_SUPPORT_HPP

#include "leoisac/geometry.hpp"

#include <cmath>
#include <random>

namespace leoisac::test
{
    // Seeded generator for property tests
    class Gen
    {
    public:
        explicit Gen(std::uint64_t seed) : rng_(seed) {}

        double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
        int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
        double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
        cdouble cnormal() { return {normal() * M_SQRT1_2, normal() * M_SQRT1_2}; }

        AnglePair angle() { return {uniform(-kPi + 1e-9, kPi), uniform(0.0, kPi / 2.0)}; }
        UpaSpec upa(int max_side = 6) { return UpaSpec(integer(1, max_side), integer(1, max_side)); }
        Vec3 point(double lo, double hi) { return {uniform(lo, hi), uniform(lo, hi), uniform(lo, hi)}; }

        CVec cvec(int n)
        {
            CVec v(n);
            for (int i = 0; i < n; ++i)
                v(i) = cnormal();
            return v;
        }

        CMat cmat(int r, int c)
        {
            CMat m(r, c);
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < c; ++j)
                    m(i, j) = cnormal();
            return m;
        }

        std::mt19937_64 &engine() { return rng_; }

    private:
        std::mt19937_64 rng_;
    };

    inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }
}

#endif
