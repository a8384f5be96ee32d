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
#include <string>

namespace irsbf
{
    double path_loss_linear(double distance, double exponent, double ref_loss_db)
    {
        if (!(distance > 0.0) || !std::isfinite(distance))
            throw std::domain_error("path_loss_linear: distance must be positive and finite.");
        return db_to_linear(ref_loss_db) / std::pow(distance, exponent);
    }

    CMat rician_link(const CMat &los, double kappa, double path_gain, Rng &rng)
    {
        if (!(kappa >= 0.0))
            throw std::domain_error("rician_link: Rician factor must be non-negative.");
        if (!(path_gain >= 0.0))
            throw std::domain_error("rician_link: path gain must be non-negative.");
        for (const cx &v : los)
            if (std::abs(std::abs(v) - 1.0) > 1e-9)
                throw std::invalid_argument("rician_link: LoS component must have unit-modulus entries.");

        CMat nlos = crandn(los.n_rows, los.n_cols, rng);
        if (std::isinf(kappa))
            return std::sqrt(path_gain) * los;
        const double w_los = std::sqrt(kappa / (1.0 + kappa));
        const double w_nlos = std::sqrt(1.0 / (1.0 + kappa));
        return std::sqrt(path_gain) * (w_los * los + w_nlos * nlos);
    }

    CMat geometric_link(uword scatterers, const SteeringSampler &rx, const SteeringSampler &tx,
                        double path_gain, Rng &rng)
    {
        if (scatterers < 1)
            throw std::domain_error("geometric_link: at least one scatterer is required.");
        if (!(path_gain >= 0.0))
            throw std::domain_error("geometric_link: path gain must be non-negative.");

        const double rho = std::sqrt(path_gain / double(scatterers));
        std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
        CMat H;
        for (uword l = 0; l < scatterers; ++l)
        {
            const cx g = std::polar(rho, phase(rng));
            const CVec ar = rx(rng);
            const CVec at = tx(rng);
            if (l == 0)
                H.zeros(ar.n_elem, at.n_elem);
            H += g * ar * at.t();
        }
        return H;
    }

    uword numerical_rank(const CMat &A, double rel_tol)
    {
        if (A.n_elem == 0)
            return 0;
        const arma::vec s = arma::svd(A);
        if (s.n_elem == 0 || !(s(0) > 0.0))
            return 0;
        return arma::uword(arma::accu(s > rel_tol * s(0)));
    }

    // ---------------------------------------------------------------------------------------------

    arma::vec SystemScenario::power_vector() const
    {
        if (powers.size() == 1)
            return arma::vec(n_users, arma::fill::value(powers[0]));
        if (powers.size() != n_users)
            throw std::invalid_argument("SystemScenario: powers must have one entry or one per user.");
        return arma::vec(powers);
    }

    static void check_link(const LinkParams &p, const char *name, bool geometric)
    {
        if (!(p.kappa >= 0.0))
            throw std::domain_error(std::string("SystemScenario: Rician factor of link '") + name + "' must be >= 0.");
        if (!std::isfinite(p.exponent) || p.exponent < 0.0)
            throw std::domain_error(std::string("SystemScenario: path-loss exponent of link '") + name + "' must be >= 0.");
        if (geometric && p.scatterers < 1)
            throw std::domain_error(std::string("SystemScenario: link '") + name + "' needs at least one scatterer.");
    }

    void SystemScenario::validate() const
    {
        if (n_antennas < 1)
            throw std::invalid_argument("SystemScenario: N must be >= 1.");
        if (n_users < 1)
            throw std::invalid_argument("SystemScenario: K must be >= 1.");
        if (m1 + m2 < 1)
            throw std::invalid_argument("SystemScenario: at least one subsurface is required.");
        if (powers.empty())
            throw std::invalid_argument("SystemScenario: user powers missing.");
        for (double p : powers)
            if (!(p > 0.0) || !std::isfinite(p))
                throw std::domain_error("SystemScenario: user powers must be strictly positive.");
        (void)power_vector();
        if (!(noise > 0.0) || !std::isfinite(noise))
            throw std::domain_error("SystemScenario: noise power must be strictly positive.");
        if (!(wavelength > 0.0) || !(spacing > 0.0))
            throw std::domain_error("SystemScenario: wavelength and spacing must be positive.");
        if (!(aperture_gain > 0.0))
            throw std::domain_error("SystemScenario: aperture gain must be positive.");
        if (!(user_radius >= 0.0))
            throw std::domain_error("SystemScenario: user radius must be non-negative.");
        if (!std::isfinite(ref_loss_db))
            throw std::domain_error("SystemScenario: reference path loss must be finite.");
        for (const arma::vec3 *p : {&bs, &irs1, &irs2, &users})
            if (!p->is_finite())
                throw std::domain_error("SystemScenario: node positions must be finite.");
        const bool geo = model == FadingModel::Geometric;
        check_link(user_irs1, "user_irs1", geo);
        check_link(user_irs2, "user_irs2", geo);
        check_link(inter_irs, "inter_irs", geo);
        check_link(irs1_bs, "irs1_bs", geo);
        check_link(irs2_bs, "irs2_bs", geo);
    }

    SystemScenario single_user_defaults()
    {
        return SystemScenario{};
    }

    SystemScenario multi_user_defaults()
    {
        SystemScenario s;
        s.model = FadingModel::Geometric;
        s.n_antennas = 40;
        s.n_users = 5;
        s.m1 = 16;
        s.m2 = 16;
        s.user_irs1 = {2.2, 10.0, 1};
        s.user_irs2 = {3.0, 10.0, 1};
        s.inter_irs = {3.0, 10.0, 4};
        s.irs1_bs = {3.0, 10.0, 4};
        s.irs2_bs = {2.2, 10.0, 2};
        s.powers = {dbm_to_watt(20.0)};
        return s;
    }

    // ---------------------------------------------------------------------------------------------

    ChannelSet ChannelSet::from_links(const CMat &U1, const CMat &U2, const CMat &D, const CMat &G1, const CMat &G2)
    {
        const uword K = U1.n_cols;
        const uword M1 = U1.n_rows;
        const uword M2 = U2.n_rows;
        const uword N = std::max(G1.n_rows, G2.n_rows);
        if (U2.n_cols != K)
            throw std::invalid_argument("ChannelSet: U1 and U2 must have one column per user.");
        if (D.n_rows != M2 || D.n_cols != M1)
            throw std::invalid_argument("ChannelSet: D must be M2 x M1.");
        if (G1.n_cols != M1 || G2.n_cols != M2 || (M1 > 0 && G1.n_rows != N) || (M2 > 0 && G2.n_rows != N))
            throw std::invalid_argument("ChannelSet: G1 must be N x M1 and G2 must be N x M2.");
        if (K < 1 || N < 1)
            throw std::invalid_argument("ChannelSet: need at least one user and one antenna.");

        ChannelSet c;
        c.n_antennas = N;
        c.m1 = M1;
        c.m2 = M2;
        c.n_users = K;
        c.U1 = U1;
        c.U2 = U2;
        c.D = D;
        c.G1 = M1 > 0 ? G1 : CMat(N, 0);
        c.G2 = M2 > 0 ? G2 : CMat(N, 0);
        c.raw_links_ = true;

        c.R1.resize(K);
        c.R2.resize(K);
        c.Q.resize(K);
        for (uword k = 0; k < K; ++k)
        {
            c.R1[k] = c.G1 * arma::diagmat(U1.col(k));
            c.R2[k] = c.G2 * arma::diagmat(U2.col(k));
            c.Q[k].set_size(N, M2, M1);
            for (uword m = 0; m < M1; ++m)
                c.Q[k].slice(m) = c.G2 * arma::diagmat(D.col(m) * U1(m, k));
        }
        return c;
    }

    ChannelSet ChannelSet::from_cascaded(std::vector<CMat> R1, std::vector<CMat> R2)
    {
        if (R1.size() != R2.size() || R1.empty())
            throw std::invalid_argument("ChannelSet: R1 and R2 must list the same, non-zero number of users.");
        ChannelSet c;
        c.n_users = R1.size();
        c.n_antennas = std::max(R1[0].n_rows, R2[0].n_rows);
        c.m1 = R1[0].n_cols;
        c.m2 = R2[0].n_cols;
        for (uword k = 0; k < c.n_users; ++k)
        {
            if (R1[k].n_cols != c.m1 || R2[k].n_cols != c.m2)
                throw std::invalid_argument("ChannelSet: inconsistent cascaded channel sizes.");
            if (R1[k].n_rows == 0)
                R1[k].set_size(c.n_antennas, c.m1);
            if (R2[k].n_rows == 0)
                R2[k].set_size(c.n_antennas, c.m2);
            if (R1[k].n_rows != c.n_antennas || R2[k].n_rows != c.n_antennas)
                throw std::invalid_argument("ChannelSet: inconsistent antenna count.");
        }
        c.R1 = std::move(R1);
        c.R2 = std::move(R2);
        c.Q.assign(c.n_users, arma::cx_cube(c.n_antennas, c.m2, c.m1, arma::fill::zeros));
        return c;
    }

    ChannelSet ChannelSet::select_users(const arma::uvec &idx) const
    {
        ChannelSet c = *this;
        c.n_users = idx.n_elem;
        c.R1.clear();
        c.R2.clear();
        c.Q.clear();
        for (uword i : idx)
        {
            if (i >= n_users)
                throw std::invalid_argument("ChannelSet::select_users: user index out of range.");
            c.R1.push_back(R1[i]);
            c.R2.push_back(R2[i]);
            c.Q.push_back(Q[i]);
        }
        if (raw_links_)
        {
            c.U1 = U1.cols(idx);
            c.U2 = U2.cols(idx);
        }
        return c;
    }

    bool ChannelSet::all_finite() const
    {
        if (!U1.is_finite() || !U2.is_finite() || !D.is_finite() || !G1.is_finite() || !G2.is_finite())
            return false;
        for (uword k = 0; k < n_users; ++k)
            if (!R1[k].is_finite() || !R2[k].is_finite() || !Q[k].is_finite())
                return false;
        return true;
    }

    // ---------------------------------------------------------------------------------------------

    std::vector<arma::vec3> draw_user_positions(const SystemScenario &s, Rng &rng)
    {
        std::vector<arma::vec3> pos(s.n_users, s.users);
        if (s.n_users == 1 || s.user_radius == 0.0)
            return pos;
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        for (auto &p : pos)
        {
            const double r = s.user_radius * std::sqrt(uni(rng));
            const double phi = 2.0 * kPi * uni(rng);
            p(0) += r * std::cos(phi);
            p(1) += r * std::sin(phi);
        }
        return pos;
    }

    static double link_distance(const arma::vec3 &a, const arma::vec3 &b)
    {
        const double d = arma::norm(a - b);
        if (!(d > 1e-9))
            throw std::domain_error("build_double_irs_scenario: coincident nodes give a degenerate geometry.");
        return d;
    }

    namespace
    {
        struct Arrays
        {
            ArrayLayout bs, irs1, irs2;
        };

        Arrays make_arrays(const SystemScenario &s, uword m1, uword m2)
        {
            return {ArrayLayout::ula(s.n_antennas, s.bs_orientation, s.spacing),
                    ArrayLayout::ura_for(m1, s.irs1_orientation, s.spacing),
                    ArrayLayout::ura_for(m2, s.irs2_orientation, s.spacing)};
        }

        SteeringSampler single_antenna()
        {
            return [](Rng &)
            { return CVec(1, arma::fill::ones); };
        }

        // LoS outer product for a link from array tx at p_tx to array rx at p_rx.
        CMat los_matrix(const ArrayLayout &rx, const arma::vec3 &p_rx, const ArrayLayout &tx, const arma::vec3 &p_tx)
        {
            const CVec a_rx = array_response(rx, arma::vec3(p_tx - p_rx));
            const CVec a_tx = array_response(tx, arma::vec3(p_rx - p_tx));
            return a_rx * a_tx.st();
        }

        // User -> IRS link, one column per user.
        CMat user_link(const SystemScenario &s, const ArrayLayout &irs, const arma::vec3 &p_irs,
                       const std::vector<arma::vec3> &users, const LinkParams &lp, double gain_mult, Rng &rng)
        {
            const uword m = irs.size();
            CMat U(m, users.size());
            if (m == 0)
                return U;
            for (uword k = 0; k < users.size(); ++k)
            {
                const double g = path_loss_linear(link_distance(users[k], p_irs), lp.exponent, s.ref_loss_db) * gain_mult;
                if (s.model == FadingModel::Rician)
                {
                    const CMat los = array_response(irs, arma::vec3(users[k] - p_irs));
                    U.col(k) = rician_link(los, lp.kappa, g, rng);
                }
                else
                    U.col(k) = geometric_link(lp.scatterers, front_halfspace_sampler(irs), single_antenna(), g, rng);
            }
            return U;
        }

        CMat array_link(const SystemScenario &s, const ArrayLayout &rx, const arma::vec3 &p_rx,
                        const ArrayLayout &tx, const arma::vec3 &p_tx, const LinkParams &lp, double gain_mult,
                        Rng &rng)
        {
            if (rx.size() == 0 || tx.size() == 0)
                return CMat(rx.size(), tx.size());
            const double g = path_loss_linear(link_distance(p_rx, p_tx), lp.exponent, s.ref_loss_db) * gain_mult;
            if (s.model == FadingModel::Rician)
                return rician_link(los_matrix(rx, p_rx, tx, p_tx), lp.kappa, g, rng);
            return geometric_link(lp.scatterers, front_halfspace_sampler(rx), front_halfspace_sampler(tx), g, rng);
        }
    }

    ChannelSet build_double_irs_scenario(const SystemScenario &s, Rng &rng)
    {
        s.validate();
        // Node-level geometry must be non-degenerate even for empty subsurface splits.
        link_distance(s.users, s.irs1);
        link_distance(s.users, s.irs2);
        link_distance(s.irs1, s.irs2);
        link_distance(s.irs1, s.bs);
        link_distance(s.irs2, s.bs);

        const Arrays arr = make_arrays(s, s.m1, s.m2);
        const double ag = s.aperture_gain;
        const auto users = draw_user_positions(s, rng);

        CMat U1 = user_link(s, arr.irs1, s.irs1, users, s.user_irs1, ag, rng);
        CMat U2 = user_link(s, arr.irs2, s.irs2, users, s.user_irs2, ag, rng);
        CMat D = array_link(s, arr.irs2, s.irs2, arr.irs1, s.irs1, s.inter_irs, ag * ag, rng);
        CMat G1 = array_link(s, arr.bs, s.bs, arr.irs1, s.irs1, s.irs1_bs, ag, rng);
        CMat G2 = array_link(s, arr.bs, s.bs, arr.irs2, s.irs2, s.irs2_bs, ag, rng);
        return ChannelSet::from_links(U1, U2, D, G1, G2);
    }

    ChannelSet build_double_irs_scenario(const SystemScenario &s)
    {
        Rng rng(s.seed);
        return build_double_irs_scenario(s, rng);
    }

    ChannelSet build_single_irs_baseline_A1(const ChannelSet &dbl)
    {
        if (dbl.n_users != 1)
            throw std::invalid_argument("build_single_irs_baseline_A1: requires a single-user channel set.");
        CMat Rbar = arma::join_rows(dbl.R1[0], dbl.R2[0]);
        return ChannelSet::from_cascaded({CMat(dbl.n_antennas, 0)}, {Rbar});
    }

    ChannelSet build_single_irs_baseline_A2(const SystemScenario &s, const BaselineRanks &ranks, Rng &rng)
    {
        s.validate();
        const uword N = s.n_antennas;
        const uword M = s.m();
        const uword K = s.n_users;
        if (ranks.g_bar < 1 || ranks.g_bar > std::min(N, M))
            throw std::domain_error("build_single_irs_baseline_A2: infeasible rank request for the IRS -> BS link.");
        if (ranks.u_bar < 1 || ranks.u_bar > std::min(M, K))
            throw std::domain_error("build_single_irs_baseline_A2: infeasible rank request for the users -> IRS link.");

        const ArrayLayout bs = ArrayLayout::ula(N, s.bs_orientation, s.spacing);
        const ArrayLayout irs = ArrayLayout::ura_for(M, s.irs2_orientation, s.spacing);
        const double ag = s.aperture_gain;
        const auto users = draw_user_positions(s, rng);

        CMat Ubar;
        if (ranks.u_bar == K)
        {
            SystemScenario geo = s;
            geo.model = FadingModel::Geometric;
            Ubar = user_link(geo, irs, s.irs2, users, s.user_irs2, ag, rng);
        }
        else
        {
            // Users share u_bar scatterers: rank-deficient by construction.
            const double g = path_loss_linear(link_distance(s.users, s.irs2), s.user_irs2.exponent, s.ref_loss_db) * ag;
            Ubar = geometric_link(ranks.u_bar, front_halfspace_sampler(irs), random_phase_sampler(K), g, rng);
        }
        const double g_bs = path_loss_linear(link_distance(s.irs2, s.bs), s.irs2_bs.exponent, s.ref_loss_db) * ag;
        CMat Gbar = geometric_link(ranks.g_bar, front_halfspace_sampler(bs), front_halfspace_sampler(irs), g_bs, rng);

        return ChannelSet::from_links(CMat(0, K), Ubar, CMat(M, 0), CMat(N, 0), Gbar);
    }

    BaselineRanks matched_baseline_ranks(const ChannelSet &dbl)
    {
        if (!dbl.has_raw_links())
            throw std::invalid_argument("matched_baseline_ranks: raw links are required.");
        return {numerical_rank(dbl.G2), numerical_rank(dbl.U2)};
    }
}
