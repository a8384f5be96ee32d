// SPDX-License-Identifier: Apache-2.0
//
// irsbf: cooperative passive beamforming for double-IRS assisted uplinks
// Copyright (C) 2026 The irsbf authors
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

#include "irsbf/types.hpp"

namespace irsbf
{
    bool ReflectPattern::is_unit_modulus(double rel_tol) const
    {
        for (const CVec *v : {&theta1, &theta2})
            for (const cx &c : *v)
                if (!std::isfinite(c.real()) || !std::isfinite(c.imag()) || std::abs(std::abs(c) - 1.0) > rel_tol)
                    return false;
        return true;
    }

    CVec unit_phasor(const arma::vec &phase)
    {
        CVec out(phase.n_elem);
        for (uword i = 0; i < phase.n_elem; ++i)
            out(i) = std::polar(1.0, phase(i));
        return out;
    }

    CVec project_unit_modulus(const CVec &v)
    {
        CVec out(v.n_elem);
        for (uword i = 0; i < v.n_elem; ++i)
        {
            const double a = std::abs(v(i));
            out(i) = a > 0.0 ? v(i) / a : cx(1.0, 0.0);
        }
        return out;
    }

    CVec random_phases(uword n, Rng &rng)
    {
        std::uniform_real_distribution<double> uni(0.0, 2.0 * kPi);
        CVec out(n);
        for (uword i = 0; i < n; ++i)
            out(i) = std::polar(1.0, uni(rng));
        return out;
    }

    CMat crandn(uword rows, uword cols, Rng &rng)
    {
        std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
        CMat out(rows, cols);
        // Column-major fill keeps the draw order independent of armadillo internals.
        for (uword c = 0; c < cols; ++c)
            for (uword r = 0; r < rows; ++r)
            {
                const double re = nd(rng);
                const double im = nd(rng);
                out(r, c) = cx(re, im);
            }
        return out;
    }

    std::uint64_t mix_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b)
    {
        auto splitmix = [](std::uint64_t z)
        {
            z += 0x9E3779B97F4A7C15ULL;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
            return z ^ (z >> 31);
        };
        return splitmix(splitmix(splitmix(master) ^ a) ^ (b * 0xD1B54A32D192ED03ULL));
    }
}
