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

#include "irsbf/channels.hpp"

#include <cmath>

namespace irsbf
{
    ArrayLayout ArrayLayout::ula(uword n, double orientation, double spacing)
    {
        ArrayLayout l;
        l.kind = ArrayKind::ULA;
        l.rows = 1;
        l.cols = n;
        l.spacing = spacing;
        l.orientation = orientation;
        return l;
    }

    ArrayLayout ArrayLayout::ura(uword rows, uword cols, double orientation, double spacing)
    {
        ArrayLayout l;
        l.kind = ArrayKind::URA;
        l.rows = rows;
        l.cols = cols;
        l.spacing = spacing;
        l.orientation = orientation;
        return l;
    }

    ArrayLayout ArrayLayout::ura_for(uword m, double orientation, double spacing)
    {
        uword rows = 1;
        for (uword r = 1; r * r <= m; ++r)
            if (m % r == 0)
                rows = r;
        return ura(rows, m == 0 ? 0 : m / rows, orientation, spacing);
    }

    static void check_array_args(uword n, double spacing)
    {
        if (n < 1)
            throw std::invalid_argument("array_response: array needs at least one element.");
        if (!(spacing > 0.0))
            throw std::invalid_argument("array_response: element spacing must be positive.");
    }

    CVec ula_response(uword n, double angle, double spacing)
    {
        check_array_args(n, spacing);
        const double k = 2.0 * kPi * spacing * std::sin(angle);
        CVec a(n);
        for (uword m = 0; m < n; ++m)
            a(m) = std::polar(1.0, k * double(m));
        a(0) = cx(1.0, 0.0);
        return a;
    }

    CVec ura_response(uword rows, uword cols, double azimuth, double elevation, double spacing)
    {
        check_array_args(rows * cols, spacing);
        const double uh = std::sin(azimuth) * std::cos(elevation);
        const double uz = std::sin(elevation);
        CVec a(rows * cols);
        for (uword r = 0; r < rows; ++r)
            for (uword c = 0; c < cols; ++c)
                a(r * cols + c) = std::polar(1.0, 2.0 * kPi * spacing * (double(c) * uh + double(r) * uz));
        a(0) = cx(1.0, 0.0);
        return a;
    }

    CVec array_response(const ArrayLayout &layout, double azimuth, double elevation)
    {
        if (layout.kind == ArrayKind::ULA)
            return ula_response(layout.cols, azimuth, layout.spacing);
        return ura_response(layout.rows, layout.cols, azimuth, elevation, layout.spacing);
    }

    CVec array_response(const ArrayLayout &layout, const arma::vec3 &direction)
    {
        const double nrm = arma::norm(direction);
        if (!(nrm > 0.0))
            throw std::domain_error("array_response: direction must be non-zero.");
        const arma::vec3 u = direction / nrm;
        const arma::vec3 h{std::cos(layout.orientation), std::sin(layout.orientation), 0.0};
        const double uh = arma::dot(u, h);
        const double uz = u(2);

        const uword rows = layout.kind == ArrayKind::ULA ? 1 : layout.rows;
        check_array_args(rows * layout.cols, layout.spacing);
        CVec a(rows * layout.cols);
        for (uword r = 0; r < rows; ++r)
            for (uword c = 0; c < layout.cols; ++c)
            {
                const double z = layout.kind == ArrayKind::ULA ? 0.0 : double(r) * uz;
                a(r * layout.cols + c) = std::polar(1.0, 2.0 * kPi * layout.spacing * (double(c) * uh + z));
            }
        a(0) = cx(1.0, 0.0);
        return a;
    }

    SteeringSampler front_halfspace_sampler(const ArrayLayout &layout)
    {
        return [layout](Rng &rng)
        {
            std::uniform_real_distribution<double> ang(-kPi / 2.0, kPi / 2.0);
            const double az = ang(rng);
            const double el = layout.kind == ArrayKind::URA ? ang(rng) : 0.0;
            return array_response(layout, az, el);
        };
    }

    SteeringSampler random_phase_sampler(uword n)
    {
        return [n](Rng &rng)
        { return random_phases(n, rng); };
    }
}
