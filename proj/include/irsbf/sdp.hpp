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

#ifndef IRSBF_SDP_HPP
#define IRSBF_SDP_HPP

#include "irsbf/sdp_ipm.hpp"

#include <string>
#include <vector>

namespace irsbf
{
    // Max-min SINR over one unit-modulus vector theta (length M'):
    //   SINR_k(theta) = |q_kk^H theta + qbar_kk|^2 / (sum_{j != k} |q_kj^H theta + qbar_kj|^2 + sigma_k^2).
    //
    // Homogenized with theta~ = [theta; t], |t| = 1:
    //   |q^H theta + qbar|^2 = theta~^H B theta~ + |qbar|^2,  B = [q q^H, qbar q; conj(qbar) q^H, 0],
    // with theta = conj(t) theta~(0:M'-1).
    struct MaxMinSdpInstance
    {
        std::vector<CMat> q; // q[k] is M' x K, column j = q_kj
        CMat qbar;           // K x K, qbar(k, j)
        arma::vec noise;     // sigma_k^2

        uword n_users() const { return q.size(); }
        uword dim() const { return q.empty() ? 0 : q.front().n_rows; }

        void validate() const;

        // (M'+1) x (M'+1) Hermitian B_kj.
        CMat B(uword k, uword j) const;

        // Exact SINRs at a unit-modulus theta.
        arma::vec sinr(const CVec &theta) const;

        // Relaxed SINRs (tr(B_kk Psi) + |qbar_kk|^2) / (sum_{j != k} ... + sigma_k^2).
        arma::vec relaxed_sinr(const CMat &Psi) const;
    };

    enum class SdpStatus
    {
        Feasible,
        Infeasible,
        NumericalFailure
    };

    const char *to_string(SdpStatus s);

    struct SdpOptions
    {
        IpmOptions ipm;
        double slack = 1e-6; // relative constraint violation still counted as feasible
    };

    struct PsdSolution
    {
        CMat Psi;            // diag exactly 1 when Feasible
        SdpStatus status = SdpStatus::NumericalFailure;
        arma::vec margins;   // scaled constraint margins at Psi
        double upper = 0.0;  // certified bound on the best scaled margin
        unsigned iterations = 0;
    };

    // Is there a Psi with diag 1, Psi PSD and every relaxed SINR >= delta?
    // Feasible needs a Psi with every scaled margin >= -slack; Infeasible needs a dual certificate that
    // the best scaled margin is < 0 (the unrelaxed constraints cannot hold). Anything else, e.g. a stall
    // before either is reached, is NumericalFailure.
    PsdSolution feasibility_check(const MaxMinSdpInstance &inst, double delta, const SdpOptions &opt = {});

    // min_k (||q_kk||_1 + |qbar_kk|)^2 / sigma_k^2, an upper bound on every relaxed min-SINR.
    double matched_filter_upper_bound(const MaxMinSdpInstance &inst);

    struct BisectionResult
    {
        double delta = 0.0;     // largest delta certified feasible
        CMat Psi;               // from that check
        bool saturated = false; // delta_hi itself was feasible
        unsigned steps = 0;     // midpoint checks
        unsigned failures = 0;  // checks ending in NumericalFailure (treated as infeasible)
        unsigned ipm_iterations = 0;
    };

    // Absolute tolerance eps: stops once delta_hi - delta_lo <= eps.
    // Throws std::invalid_argument on a bad bracket or if delta_lo is not feasible.
    BisectionResult bisection_maxmin(const MaxMinSdpInstance &inst, double delta_lo, double delta_hi, double eps,
                                     const SdpOptions &opt = {});

    struct RandomizationResult
    {
        CVec theta_tilde; // unit-modulus, length M'+1
        CVec theta;       // conj(t) theta_tilde(0:M'-1)
        arma::vec sinrs;
        double min_sinr = 0.0;
        unsigned best_index = 0;
    };

    // R candidates xi = U Lambda^(1/2) r, r ~ CN(0, I); theta~ = exp(j arg xi). Keeps the best exact min-SINR.
    RandomizationResult gaussian_randomization(const CMat &Psi, const MaxMinSdpInstance &inst, unsigned R, Rng &rng);

    // Unit-modulus candidates drawn from Psi, as used by gaussian_randomization.
    CVec randomization_candidate(const CMat &sqrt_factor, Rng &rng);

    // U Lambda^(1/2) with negative eigenvalues clipped.
    CMat psd_sqrt_factor(const CMat &Psi);

    // max theta~^H C theta~ over |theta~_i| = 1, relaxed: returns Psi and a certified upper bound on tr(C Psi).
    struct QuadraticFormSdr
    {
        CMat Psi;
        double value = 0.0; // tr(C Psi) at Psi
        double upper = 0.0; // certified bound
        IpmStatus status = IpmStatus::Stalled;
    };

    QuadraticFormSdr maximize_quadratic_form(const CMat &C, const IpmOptions &opt = {});
}

#endif
