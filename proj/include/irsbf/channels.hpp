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

#ifndef IRSBF_CHANNELS_HPP
#define IRSBF_CHANNELS_HPP

#include "irsbf/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace irsbf
{
    // ---------------------------------------------------------------------------------------------
    // Array responses
    //
    // Phase convention: a_m = exp(+j 2 pi d (p_m . u)), with p_m the element offset from the first
    // element in units of the spacing d (wavelengths) and u the unit vector from the array toward
    // the remote end. The first entry is always exactly 1.
    //
    // ULA elements lie along the array's horizontal axis h = (cos psi, sin psi, 0).
    // URA elements lie in the vertical plane spanned by h and z; element (r, c) has index r * cols + c,
    // offset c along h and r along z. Local angles are measured from the array normal:
    //   u.h = sin(az) cos(el),  u.z = sin(el).

    enum class ArrayKind
    {
        ULA,
        URA
    };

    struct ArrayLayout
    {
        ArrayKind kind = ArrayKind::ULA;
        uword rows = 1;           // URA only
        uword cols = 1;           // number of elements for a ULA
        double spacing = 0.5;     // wavelengths
        double orientation = 0.0; // azimuth of the horizontal array axis w.r.t. the x-axis (rad)

        uword size() const { return kind == ArrayKind::ULA ? cols : rows * cols; }

        static ArrayLayout ula(uword n, double orientation = 0.0, double spacing = 0.5);
        static ArrayLayout ura(uword rows, uword cols, double orientation = 0.0, double spacing = 0.5);

        // Near-square URA holding m elements (rows <= cols, rows the largest divisor <= sqrt(m)).
        static ArrayLayout ura_for(uword m, double orientation = 0.0, double spacing = 0.5);
    };

    CVec ula_response(uword n, double angle, double spacing = 0.5);
    CVec ura_response(uword rows, uword cols, double azimuth, double elevation, double spacing = 0.5);

    // Angle-based response for either layout (elevation ignored for a ULA).
    CVec array_response(const ArrayLayout &layout, double azimuth, double elevation);

    // Response toward a global unit direction.
    CVec array_response(const ArrayLayout &layout, const arma::vec3 &direction);

    // ---------------------------------------------------------------------------------------------
    // Link primitives

    // gamma0 / d^alpha in linear scale.
    double path_loss_linear(double distance, double exponent, double ref_loss_db);

    // sqrt(gain) (sqrt(k/(1+k)) LoS + sqrt(1/(1+k)) NLoS), NLoS ~ CN(0, 1) i.i.d.
    CMat rician_link(const CMat &los, double kappa, double path_gain, Rng &rng);

    using SteeringSampler = std::function<CVec(Rng &)>;

    // sum_l rho_l a_rx(l) a_tx(l)^H with |rho_l| = sqrt(path_gain / L) and uniform random phases.
    CMat geometric_link(uword scatterers, const SteeringSampler &rx, const SteeringSampler &tx,
                        double path_gain, Rng &rng);

    // Steering sampler with (az, el) drawn uniformly over the front half-space of the array.
    SteeringSampler front_halfspace_sampler(const ArrayLayout &layout);

    // Unit-modulus vector of i.i.d. uniform phases; models a cluster of separated single-antenna users.
    SteeringSampler random_phase_sampler(uword n);

    // Numerical rank: singular values below rel_tol * sigma_max count as zero.
    uword numerical_rank(const CMat &A, double rel_tol = 1e-8);

    // ---------------------------------------------------------------------------------------------
    // Scenario

    enum class FadingModel
    {
        Rician,
        Geometric
    };

    struct LinkParams
    {
        double exponent = 3.0;    // path-loss exponent
        double kappa = 10.0;      // Rician factor, linear
        uword scatterers = 1;     // geometric model paths (per user for user links)
    };

    struct SystemScenario
    {
        arma::vec3 bs{1.0, 0.0, 2.0};
        arma::vec3 irs2{0.0, 0.5, 1.0};
        arma::vec3 irs1{0.0, 49.5, 1.0};
        arma::vec3 users{1.0, 50.0, 0.0};
        double user_radius = 2.0; // users drawn uniformly in a horizontal disk; a single user sits at the center

        uword n_antennas = 5;
        uword m1 = 16;
        uword m2 = 16;
        uword n_users = 1;

        double ref_loss_db = -30.0;
        double aperture_gain = 25.0; // power gain per IRS endpoint of a link (one subsurface = 5x5 elements)
        FadingModel model = FadingModel::Rician;

        LinkParams user_irs1{2.2, 10.0, 1};
        LinkParams user_irs2{3.0, 0.1, 1};
        LinkParams inter_irs{3.0, 0.1, 4};
        LinkParams irs1_bs{3.0, 0.1, 4};
        LinkParams irs2_bs{2.2, 10.0, 2};

        double bs_orientation = 0.0;
        double irs1_orientation = kPi / 4.0;
        double irs2_orientation = 3.0 * kPi / 4.0;
        double spacing = 0.5; // wavelengths, for every array

        std::vector<double> powers{dbm_to_watt(15.0)}; // watts, one per user (a single entry is broadcast)
        double noise = dbm_to_watt(-64.0);            // watts
        double wavelength = 0.05;                     // meters
        std::uint64_t seed = 1;

        uword m() const { return m1 + m2; }
        arma::vec power_vector() const;

        // Throws std::invalid_argument / std::domain_error on violations.
        void validate() const;
    };

    // Single-user defaults (N = 5, M1 = M2 = 16, Rician links).
    SystemScenario single_user_defaults();

    // Multi-user defaults (N = 40, M1 = M2 = 16, K = 5, geometric links with rank(G2) = 2, rank(G1) = rank(D) = 4).
    SystemScenario multi_user_defaults();

    // ---------------------------------------------------------------------------------------------
    // Channel sets

    struct ChannelSet
    {
        uword n_antennas = 0;
        uword m1 = 0;
        uword m2 = 0;
        uword n_users = 0;

        // Raw links; empty when only cascaded CSI is known (A1 baseline).
        CMat U1; // M1 x K
        CMat U2; // M2 x K
        CMat D;  // M2 x M1
        CMat G1; // N x M1
        CMat G2; // N x M2

        // Cascaded channels per user.
        std::vector<CMat> R1;       // N x M1, G1 diag(u1k)
        std::vector<CMat> R2;       // N x M2, G2 diag(u2k)
        std::vector<arma::cx_cube> Q; // N x M2 x M1, slice m = G2 diag(D(:, m) u1k(m))

        bool has_raw_links() const { return raw_links_; }
        uword m() const { return m1 + m2; }

        // Builds the cascaded channels from raw links.
        static ChannelSet from_links(const CMat &U1, const CMat &U2, const CMat &D, const CMat &G1, const CMat &G2);

        // Cascaded-only set with no double-reflection link.
        static ChannelSet from_cascaded(std::vector<CMat> R1, std::vector<CMat> R2);

        // Keeps users in idx (in order).
        ChannelSet select_users(const arma::uvec &idx) const;

        bool all_finite() const;

    private:
        bool raw_links_ = false;
    };

    // Node positions used for one realization.
    std::vector<arma::vec3> draw_user_positions(const SystemScenario &s, Rng &rng);

    ChannelSet build_double_irs_scenario(const SystemScenario &s, Rng &rng);
    ChannelSet build_double_irs_scenario(const SystemScenario &s);

    // A1 pairing: baseline cascaded channel [R1, R2] for a single-user set.
    ChannelSet build_single_irs_baseline_A1(const ChannelSet &dbl);

    struct BaselineRanks
    {
        uword g_bar = 0; // rank of the IRS -> BS link
        uword u_bar = 0; // rank of the users -> IRS link
    };

    // A2 pairing: single IRS with M = M1 + M2 subsurfaces at the IRS 2 position, geometric links
    // whose ranks equal the requested values.
    ChannelSet build_single_irs_baseline_A2(const SystemScenario &s, const BaselineRanks &ranks, Rng &rng);

    // Ranks matching the double-IRS set per A2 (rank G2 and rank U2).
    BaselineRanks matched_baseline_ranks(const ChannelSet &dbl);
}

#endif
