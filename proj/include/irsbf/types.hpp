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

#ifndef IRSBF_TYPES_HPP
#define IRSBF_TYPES_HPP

#include <armadillo>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace irsbf
{
    using cx = std::complex<double>;
    using CVec = arma::cx_vec;
    using CMat = arma::cx_mat;
    using uword = arma::uword;

    // All randomness flows through an explicitly seeded engine; armadillo's global RNG is never used.
    using Rng = std::mt19937_64;

    constexpr double kPi = 3.14159265358979323846;

    // Raised when ZF is requested on a channel without full column rank.
    class RankDeficientError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Unit-modulus reflection coefficients. A single-IRS pattern is stored with an empty theta1,
    // i.e. the single surface is treated as IRS 2 of a system with M1 = 0.
    struct ReflectPattern
    {
        CVec theta1;
        CVec theta2;

        static ReflectPattern single(const CVec &theta) { return {CVec(), theta}; }

        uword m1() const { return theta1.n_elem; }
        uword m2() const { return theta2.n_elem; }

        // Stacked [theta1; theta2].
        CVec stacked() const { return arma::join_cols(theta1, theta2); }

        bool is_unit_modulus(double rel_tol = 1e-9) const;
    };

    // exp(j * arg) applied elementwise.
    CVec unit_phasor(const arma::vec &phase);

    // Projects every entry onto the unit circle; zero entries map to 1.
    CVec project_unit_modulus(const CVec &v);

    // Uniform random phases on [0, 2pi).
    CVec random_phases(uword n, Rng &rng);

    // Standard circularly-symmetric complex Gaussian samples, E|x|^2 = 1.
    CMat crandn(uword rows, uword cols, Rng &rng);

    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
    inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
    inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

    // splitmix64 finalizer, used to derive independent per-draw seeds from a master seed.
    std::uint64_t mix_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);
}

#endif
