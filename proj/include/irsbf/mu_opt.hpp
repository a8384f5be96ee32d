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

#ifndef IRSBF_MU_OPT_HPP
#define IRSBF_MU_OPT_HPP

#include "irsbf/sdp.hpp"
#include "irsbf/system.hpp"

#include <string>
#include <vector>

namespace irsbf
{
    enum class RxMode
    {
        ZF,
        MMSE,
        MRC,
        Fixed
    };

    const char *to_string(RxMode m);
    RxMode parse_rx_mode(const std::string &s);

    struct ReceiveBeamformers
    {
        CMat W; // N x K, column k = w_k
        RxMode mode = RxMode::Fixed;
        bool zf_fallback = false; // ZF was requested but H was rank deficient, MMSE used instead
    };

    // W = H (P H^H H)^-1 with P = diag(sqrt(P_k)), so W^H H = P^-1. Throws RankDeficientError if rank(H) < K.
    ReceiveBeamformers zf_receivers(const CMat &H, const arma::vec &powers);

    // W = (H P P H^H + sigma^2 I)^-1 H P.
    ReceiveBeamformers mmse_receivers(const CMat &H, const arma::vec &powers, double noise);

    // W = H.
    ReceiveBeamformers mrc_receivers(const CMat &H);

    // Dispatch on mode (Fixed is rejected); ZF on a rank-deficient H falls back to MMSE and sets the flag.
    ReceiveBeamformers compute_receivers(const CMat &H, const SinrContext &ctx, RxMode mode);

    double min_sinr(const ChannelSet &chs, const ReflectPattern &pat, const CMat &W, const SinrContext &ctx);

    // Max-min instance over theta2 for fixed theta1 and W:
    //   q_kj = sqrt(P_j) (sum_m theta1_m Q_jm + R2_j)^H w_k,  qbar_kj = sqrt(P_j) w_k^H R1_j theta1,
    //   sigma_k^2 = sigma^2 ||w_k||^2.
    MaxMinSdpInstance build_p31_instance(const ChannelSet &chs, const CVec &theta1, const CMat &W,
                                         const SinrContext &ctx);

    // Max-min instance over theta1 for fixed theta2 and W:
    //   p_kj = sqrt(P_j) ([Q_j1 theta2, ..., Q_jM1 theta2] + R1_j)^H w_k,  pbar_kj = sqrt(P_j) w_k^H R2_j theta2.
    MaxMinSdpInstance build_p34_instance(const ChannelSet &chs, const CVec &theta2, const CMat &W,
                                         const SinrContext &ctx);

    struct MuOptions
    {
        unsigned I1 = 4;
        double xi = 1e-3;          // fractional-increase stopping threshold
        double eps = 0.1;          // bisection accuracy (absolute, SINR units)
        unsigned candidates = 100; // Gaussian randomization draws
        RxMode rx = RxMode::MMSE;
        SdpOptions sdp;
    };

    struct MuStepRecord
    {
        unsigned iteration = 0;
        std::string block;            // "theta2", "theta1" or "W"
        double before = 0.0;          // min-SINR before the step
        double candidate = 0.0;       // min-SINR of the proposed update
        double delta_star = 0.0;      // bisection result (theta blocks)
        double eps = 0.0;
        bool saturated = false;
        bool accepted = false;
        unsigned bisection_steps = 0;
        unsigned failures = 0;        // feasibility checks ending in numerical failure
    };

    struct MuSolveState
    {
        ReflectPattern theta;
        ReceiveBeamformers rx;
        double min_sinr = 0.0;
        std::vector<double> trace; // min-SINR at start and after every outer iteration
        std::vector<MuStepRecord> steps;
        unsigned iterations = 0;
        bool converged = false;
    };

    // Algorithm 1: per outer iteration theta2, theta1, then W; every block update is kept
    // only if the exact min-SINR does not decrease.
    MuSolveState algorithm1(const ChannelSet &chs, const MuSolveState &init, const SinrContext &ctx,
                            const MuOptions &opt, Rng &rng);

    struct MultiStartResult
    {
        MuSolveState best;
        unsigned best_start = 0;
        std::vector<MuSolveState> runs; // one per start, DFT pairs first
    };

    // Algorithm 1 from every DFT codebook pair and `random_starts` random patterns; keeps the best run.
    MultiStartResult algorithm1_multistart(const ChannelSet &chs, const SinrContext &ctx, const MuOptions &opt,
                                           Rng &rng, unsigned random_starts);

    // Columns F(:, n) with F(m, n) = exp(-j 2 pi m n / M).
    CMat dft_codebook(uword M);

    // Exhaustive joint search over DFT codebook pairs; MRC when K = 1, otherwise `mode`.
    MuSolveState dft_codebook_search(const ChannelSet &chs, const SinrContext &ctx, RxMode mode);

    // Min-SINR trace must never decrease.
    bool trace_non_decreasing(const std::vector<double> &trace, double abs_tol = 0.0);
}

#endif
