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

#ifndef IRSBF_SU_OPT_HPP
#define IRSBF_SU_OPT_HPP

#include "irsbf/sdp.hpp"
#include "irsbf/system.hpp"

#include <vector>

namespace irsbf
{
    // Single-user (K = 1) joint receive / cooperative reflect beamforming.
    //
    // Objective |w^H h|^2 with unit-norm w, h = sum_m Q_m theta2 theta1_m + R2 theta2 + R1 theta1.
    // SNR = P/sigma^2 * objective.

    struct SuSolveState
    {
        CVec w; // unit norm
        ReflectPattern theta;
        double snr = 0.0;
        unsigned iterations = 0;
        bool converged = false;
        std::vector<double> trace; // objective after the initial state and after every sub-step
    };

    // |w^H h|^2 / ||w||^2.
    double su_objective(const ChannelSet &chs, const ReflectPattern &pat, const CVec &w);

    // b = (sum_m theta1_m Q_m + R2)^H w and b0 = w^H R1 theta1.
    void theta2_coefficients(const ChannelSet &chs, const CVec &theta1, const CVec &w, CVec &b, cx &b0);

    // c = (Qbar + R1)^H w and c0 = w^H R2 theta2, Qbar = [Q_1 theta2, ..., Q_M1 theta2].
    void theta1_coefficients(const ChannelSet &chs, const CVec &theta2, const CVec &w, CVec &c, cx &c0);

    // theta2 = exp(j(arg b0 + arg b)); arg b0 := 0 when b0 = 0.
    CVec opt_theta2_closed_form(const ChannelSet &chs, const CVec &theta1, const CVec &w);

    // theta1 = exp(j(arg c0 + arg c)); arg c0 := 0 when c0 = 0.
    CVec opt_theta1_closed_form(const ChannelSet &chs, const CVec &theta2, const CVec &w);

    // h / ||h||. Throws std::domain_error when h = 0.
    CVec mrc_receive(const ChannelSet &chs, const ReflectPattern &pat);

    // Starts from init.w and init.theta; cycles theta2, theta1, w until the relative objective gain
    // of a full cycle is below tol or I0 cycles were run.
    SuSolveState ao_single_user(const ChannelSet &chs, const SuSolveState &init, double power, double noise,
                                unsigned I0 = 100, double tol = 1e-8);

    // Random unit-modulus start with the matching MRC receiver.
    SuSolveState random_su_state(const ChannelSet &chs, double power, double noise, Rng &rng);

    struct SingleIrsSolution
    {
        CVec w;     // unit norm
        CVec theta; // length M
        double snr = 0.0;
        unsigned best_restart = 0;
    };

    // AO between w = Rbar theta / ||Rbar theta|| and theta = exp(j arg(Rbar^H w)), best of `restarts`
    // random starts. The baseline must have M1 = 0 and K = 1.
    SingleIrsSolution single_irs_opt(const ChannelSet &baseline, double power, double noise, Rng &rng,
                                     unsigned I0 = 100, double tol = 1e-8, unsigned restarts = 20);

    struct SuInit
    {
        SuSolveState state;
        cx a1, a2;
        double phi = 0.0;
    };

    // Double-IRS start built from a single-IRS solution under A1 (Rbar = [R1, R2]):
    //   a1 = wbar^H sum_m Q_m theta*_(M1+1:M) theta*_m,  a2 = wbar^H Rbar theta*,  phi = arg(a2 / a1),
    //   theta1 = e^{j phi} theta*_(1:M1),  theta2 = e^{j phi} theta*_(M1+1:M),  w = wbar.
    // phi = 0 when a1 = 0.
    SuInit init_from_single_irs(const ChannelSet &chs, const SingleIrsSolution &sol, double power, double noise);

    struct SuSdrOptions
    {
        unsigned rounds = 10;
        unsigned candidates = 100;
        double tol = 1e-6;
        IpmOptions ipm;
    };

    struct SuSdrResult
    {
        ReflectPattern theta;
        CVec w;             // MRC at theta
        double snr = 0.0;   // feasible
        double bound = 0.0; // relaxation bound of the last block solved, as SNR
        unsigned rounds = 0;
        bool ok = true;     // false if any block solve did not converge
    };

    // Alternating SDR over theta2 then theta1 on the MRC objective ||h||^2, each block a max-quadratic-form
    // SDP followed by Gaussian randomization. A block update is kept only if ||h||^2 does not drop.
    SuSdrResult sdr_benchmark_su(const ChannelSet &chs, const ReflectPattern &init, double power, double noise,
                                 Rng &rng, const SuSdrOptions &opt = {});
}

#endif
