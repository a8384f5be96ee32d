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

#include "irsbf/system.hpp"

#include <map>
#include <sstream>

namespace irsbf
{
    void SinrContext::validate(uword n_users) const
    {
        if (powers.n_elem != n_users)
            throw std::invalid_argument("SinrContext: one power per user is required.");
        for (double p : powers)
            if (!(p > 0.0) || !std::isfinite(p))
                throw std::domain_error("SinrContext: powers must be strictly positive.");
        if (!(noise > 0.0) || !std::isfinite(noise))
            throw std::domain_error("SinrContext: noise power must be strictly positive.");
    }

    SinrContext SinrContext::equal_power(uword n_users, double power, double noise)
    {
        return {arma::vec(n_users, arma::fill::value(power)), noise};
    }

    void check_pattern(const ChannelSet &chs, const ReflectPattern &pat)
    {
        if (pat.m1() != chs.m1 || pat.m2() != chs.m2)
            throw std::invalid_argument("reflect pattern dimensions do not match the channel set.");
        if (!pat.is_unit_modulus())
            throw std::invalid_argument("reflect pattern entries must have unit modulus.");
    }

    CMat stacked_double_reflection(const ChannelSet &chs, uword k, const CVec &theta2)
    {
        const arma::cx_cube &Q = chs.Q[k];
        CMat out(chs.n_antennas, chs.m1);
        for (uword m = 0; m < chs.m1; ++m)
            out.col(m) = Q.slice(m) * theta2;
        return out;
    }

    CMat weighted_double_reflection(const ChannelSet &chs, uword k, const CVec &theta1)
    {
        const arma::cx_cube &Q = chs.Q[k];
        if (chs.m1 == 0 || chs.m2 == 0)
            return CMat(chs.n_antennas, chs.m2, arma::fill::zeros);
        // Slices are contiguous, so the cube reads as an (N*M2) x M1 matrix.
        const CMat flat(const_cast<cx *>(Q.memptr()), chs.n_antennas * chs.m2, chs.m1, false, true);
        CVec v = flat * theta1;
        return CMat(v.memptr(), chs.n_antennas, chs.m2);
    }

    CVec user_channel(const ChannelSet &chs, uword k, const ReflectPattern &pat)
    {
        CVec h = chs.R2[k] * pat.theta2;
        if (chs.m1 > 0)
            h += (stacked_double_reflection(chs, k, pat.theta2) + chs.R1[k]) * pat.theta1;
        return h;
    }

    EffectiveChannel effective_channel(const ChannelSet &chs, const ReflectPattern &pat)
    {
        check_pattern(chs, pat);
        EffectiveChannel e;
        e.Hd.zeros(chs.n_antennas, chs.n_users);
        e.Hs.zeros(chs.n_antennas, chs.n_users);
        for (uword k = 0; k < chs.n_users; ++k)
        {
            e.Hs.col(k) = chs.R2[k] * pat.theta2;
            if (chs.m1 > 0)
            {
                e.Hs.col(k) += chs.R1[k] * pat.theta1;
                e.Hd.col(k) = stacked_double_reflection(chs, k, pat.theta2) * pat.theta1;
            }
        }
        e.H = e.Hd + e.Hs;
        return e;
    }

    CMat effective_channel_from_links(const ChannelSet &chs, const ReflectPattern &pat)
    {
        if (!chs.has_raw_links())
            throw std::invalid_argument("effective_channel_from_links: raw links are required.");
        check_pattern(chs, pat);
        const CMat P2 = arma::diagmat(pat.theta2);
        const CMat P1 = arma::diagmat(pat.theta1);
        CMat H = chs.G2 * P2 * chs.U2;
        if (chs.m1 > 0)
            H += chs.G2 * P2 * chs.D * P1 * chs.U1 + chs.G1 * P1 * chs.U1;
        return H;
    }

    arma::vec sinr_per_user(const CMat &H, const CMat &W, const SinrContext &ctx)
    {
        const uword K = H.n_cols;
        if (W.n_rows != H.n_rows || W.n_cols != K)
            throw std::invalid_argument("sinr_per_user: W must match the N x K channel matrix.");
        ctx.validate(K);
        const CMat G = W.t() * H; // G(k, j) = w_k^H h_j
        arma::vec out(K);
        for (uword k = 0; k < K; ++k)
        {
            const double wn = arma::norm(W.col(k));
            if (!(wn > 0.0))
                throw std::domain_error("sinr_per_user: receive vector must be non-zero.");
            double interference = ctx.noise * wn * wn;
            for (uword j = 0; j < K; ++j)
                if (j != k)
                    interference += ctx.powers(j) * std::norm(G(k, j));
            out(k) = ctx.powers(k) * std::norm(G(k, k)) / interference;
        }
        return out;
    }

    double max_min_rate(const arma::vec &sinrs)
    {
        if (sinrs.is_empty())
            throw std::invalid_argument("max_min_rate: empty SINR vector.");
        const double m = sinrs.min();
        if (!(m >= 0.0))
            throw std::invalid_argument("max_min_rate: SINRs must be non-negative.");
        return std::log2(1.0 + m);
    }

    double zf_min_sinr_formula(const CMat &H, double power, double noise)
    {
        if (numerical_rank(H) < H.n_cols)
            throw RankDeficientError("zf_min_sinr_formula: H has no left pseudo-inverse (rank < K).");
        CMat gram_inv;
        if (!arma::inv_sympd(gram_inv, CMat(H.t() * H)))
            throw RankDeficientError("zf_min_sinr_formula: H^H H is not invertible.");
        const arma::vec d = arma::real(gram_inv.diag());
        return power / (noise * d.max());
    }

    // ---------------------------------------------------------------------------------------------

    static void finish_report(RankReport &r, uword N, uword K)
    {
        r.bound = std::min(r.rank_g1, r.rank_u1);
        r.hs_additive = std::min(r.rank_g2, r.rank_u2) + r.bound;
        r.hs_additive_capped = std::min({r.hs_additive, N, K});
        r.hd_predicted = std::min({r.rank_g2, r.rank_d, r.rank_u1});
        const long gain = long(r.rank_h) - long(r.rank_h_bar);
        r.raw_inequality_holds = gain >= long(r.bound);
        const long room = long(std::min(N, K)) - long(r.rank_h_bar);
        r.clipped_inequality_holds = gain >= std::min(long(r.bound), room);
    }

    static RankReport link_ranks(const ChannelSet &dbl, const ChannelSet &baseline)
    {
        if (!dbl.has_raw_links())
            throw std::invalid_argument("rank_gain_report: the double-IRS set needs raw links.");
        if (baseline.m() != dbl.m() || baseline.m1 != 0 || baseline.n_users != dbl.n_users ||
            baseline.n_antennas != dbl.n_antennas)
            throw std::invalid_argument("rank_gain_report: baseline must be a single IRS with M1 + M2 subsurfaces.");
        RankReport r;
        r.rank_u1 = numerical_rank(dbl.U1);
        r.rank_u2 = numerical_rank(dbl.U2);
        r.rank_d = numerical_rank(dbl.D);
        r.rank_g1 = numerical_rank(dbl.G1);
        r.rank_g2 = numerical_rank(dbl.G2);
        if (baseline.has_raw_links())
        {
            r.rank_g_bar = numerical_rank(baseline.G2);
            r.rank_u_bar = numerical_rank(baseline.U2);
        }
        return r;
    }

    RankReport rank_gain_report(const ChannelSet &dbl, const ChannelSet &baseline, const ReflectPattern &pat)
    {
        RankReport r = link_ranks(dbl, baseline);
        const EffectiveChannel e = effective_channel(dbl, pat);
        const EffectiveChannel eb = effective_channel(baseline, ReflectPattern::single(pat.stacked()));
        r.rank_h = numerical_rank(e.H);
        r.rank_hd = numerical_rank(e.Hd);
        r.rank_hs = numerical_rank(e.Hs);
        r.rank_h_bar = numerical_rank(eb.H);
        finish_report(r, dbl.n_antennas, dbl.n_users);
        return r;
    }

    RankReport rank_gain_report(const ChannelSet &dbl, const ChannelSet &baseline, Rng &rng, unsigned draws)
    {
        if (draws < 1)
            throw std::invalid_argument("rank_gain_report: at least one draw is required.");
        RankReport r = link_ranks(dbl, baseline);
        std::map<uword, unsigned> h, hb, hd, hs;
        for (unsigned i = 0; i < draws; ++i)
        {
            ReflectPattern pat{random_phases(dbl.m1, rng), random_phases(dbl.m2, rng)};
            const RankReport one = rank_gain_report(dbl, baseline, pat);
            ++h[one.rank_h];
            ++hb[one.rank_h_bar];
            ++hd[one.rank_hd];
            ++hs[one.rank_hs];
        }
        auto mode = [](const std::map<uword, unsigned> &votes)
        {
            uword best = 0;
            unsigned count = 0;
            for (const auto &[value, n] : votes)
                if (n > count)
                {
                    best = value;
                    count = n;
                }
            return best;
        };
        r.rank_h = mode(h);
        r.rank_h_bar = mode(hb);
        r.rank_hd = mode(hd);
        r.rank_hs = mode(hs);
        finish_report(r, dbl.n_antennas, dbl.n_users);
        return r;
    }

    std::string to_csv_header(const RankReport &)
    {
        return "rank_h,rank_h_bar,rank_hd,rank_hs,rank_u1,rank_u2,rank_d,rank_g1,rank_g2,rank_g_bar,rank_u_bar,"
               "bound,hs_additive,hs_additive_capped,hd_predicted,raw_inequality_holds,clipped_inequality_holds";
    }

    std::string to_csv_row(const RankReport &r)
    {
        std::ostringstream os;
        os << r.rank_h << ',' << r.rank_h_bar << ',' << r.rank_hd << ',' << r.rank_hs << ',' << r.rank_u1 << ','
           << r.rank_u2 << ',' << r.rank_d << ',' << r.rank_g1 << ',' << r.rank_g2 << ',' << r.rank_g_bar << ','
           << r.rank_u_bar << ',' << r.bound << ',' << r.hs_additive << ',' << r.hs_additive_capped << ','
           << r.hd_predicted << ',' << int(r.raw_inequality_holds) << ',' << int(r.clipped_inequality_holds);
        return os.str();
    }
}
