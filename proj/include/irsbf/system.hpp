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

#ifndef IRSBF_SYSTEM_HPP
#define IRSBF_SYSTEM_HPP

#include "irsbf/channels.hpp"

#include <string>

namespace irsbf
{
    // H = Hd + Hs, one column per user.
    struct EffectiveChannel
    {
        CMat H;
        CMat Hd; // double-reflection part
        CMat Hs; // single-reflection part
    };

    struct SinrContext
    {
        arma::vec powers; // watts, one per user
        double noise = 1.0;

        void validate(uword n_users) const;
        static SinrContext equal_power(uword n_users, double power, double noise);
    };

    // Throws std::invalid_argument if the pattern does not match the channel set or is not unit-modulus.
    void check_pattern(const ChannelSet &chs, const ReflectPattern &pat);

    // [Q_1 theta2, ..., Q_M1 theta2] for user k (N x M1).
    CMat stacked_double_reflection(const ChannelSet &chs, uword k, const CVec &theta2);

    // sum_m theta1_m Q_m for user k (N x M2).
    CMat weighted_double_reflection(const ChannelSet &chs, uword k, const CVec &theta1);

    // h_k from the cascaded channels.
    CVec user_channel(const ChannelSet &chs, uword k, const ReflectPattern &pat);

    EffectiveChannel effective_channel(const ChannelSet &chs, const ReflectPattern &pat);

    // Same channel evaluated through the raw links, G2 Phi2 D Phi1 u1k + G2 Phi2 u2k + G1 Phi1 u1k.
    CMat effective_channel_from_links(const ChannelSet &chs, const ReflectPattern &pat);

    // gamma_k = P_k |w_k^H h_k|^2 / (sum_{j != k} P_j |w_k^H h_j|^2 + sigma^2 ||w_k||^2).
    arma::vec sinr_per_user(const CMat &H, const CMat &W, const SinrContext &ctx);

    double max_min_rate(const arma::vec &sinrs);

    // min_k P / (sigma^2 [(H^H H)^-1]_kk). Throws RankDeficientError when rank(H) < K.
    double zf_min_sinr_formula(const CMat &H, double power, double noise);

    struct RankReport
    {
        uword rank_h = 0;
        uword rank_h_bar = 0;
        uword rank_hd = 0;
        uword rank_hs = 0;

        uword rank_u1 = 0, rank_u2 = 0, rank_d = 0, rank_g1 = 0, rank_g2 = 0;
        uword rank_g_bar = 0, rank_u_bar = 0;

        uword bound = 0;           // min(rank G1, rank U1)
        uword hs_additive = 0;     // min(rank G2, rank U2) + min(rank G1, rank U1), uncapped
        uword hs_additive_capped = 0; // the same capped at min(N, K)
        uword hd_predicted = 0;    // min(rank G2, rank D, rank U1)

        bool raw_inequality_holds = false;     // rank H - rank Hbar >= bound
        bool clipped_inequality_holds = false; // rank H - rank Hbar >= min(bound, min(N, K) - rank Hbar)
    };

    // Ranks for one reflect pattern applied to both systems (the baseline uses pat.stacked()).
    RankReport rank_gain_report(const ChannelSet &dbl, const ChannelSet &baseline, const ReflectPattern &pat);

    // Majority vote over `draws` random unit-modulus patterns.
    RankReport rank_gain_report(const ChannelSet &dbl, const ChannelSet &baseline, Rng &rng, unsigned draws = 10);

    std::string to_csv_header(const RankReport &);
    std::string to_csv_row(const RankReport &r);
}

#endif
