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

#ifndef IRSBF_SDP_IPM_HPP
#define IRSBF_SDP_IPM_HPP

#include "irsbf/types.hpp"

#include <limits>
#include <vector>

namespace irsbf
{
    // maximize  min_k ( tr(A_k Psi) - c_k )
    // s.t.      Psi_aa = 1,  Psi Hermitian PSD (n x n).
    //
    // Solved as a real SDP over the embedding [Re -Im; Im Re] with a primal-dual interior-point
    // method (HKM direction, Mehrotra predictor-corrector). The caller is expected to scale the
    // rows so that margins are O(1).
    struct MarginProblem
    {
        std::vector<CMat> A; // Hermitian, n x n
        arma::vec c;

        uword dim() const { return A.empty() ? 0 : A.front().n_rows; }
        void validate() const;

        // Per-row margins tr(A_k Psi) - c_k.
        arma::vec margins(const CMat &Psi) const;
    };

    struct IpmOptions
    {
        unsigned max_iter = 100;
        double tol = 1e-9;          // relative gap and infeasibility
        double step_factor = 0.95;

        // Early exits used by feasibility checks: stop as soon as a diagonal-normalized Psi with
        // margin >= stop_above is found, or the dual bound on the optimal margin drops below stop_below.
        double stop_above = std::numeric_limits<double>::infinity();
        double stop_below = -std::numeric_limits<double>::infinity();
    };

    enum class IpmStatus
    {
        Converged,
        StoppedAbove,
        StoppedBelow,
        Stalled,
        IterationCap
    };

    const char *to_string(IpmStatus s);

    struct IpmResult
    {
        CMat Psi;             // best primal point, diag exactly 1
        arma::vec margins;    // at Psi
        double lower = 0.0;   // min(margins)
        double upper = 0.0;   // certified upper bound on the optimal margin
        IpmStatus status = IpmStatus::Stalled;
        unsigned iterations = 0;
    };

    IpmResult solve_max_min_margin(const MarginProblem &prob, const IpmOptions &opt = {});

    // Upper bound on the optimal margin for any multipliers lambda >= 0 (normalized internally) and beta:
    //   sum(beta) + n lambda_max(sum_k lambda_k A_k - Diag(beta)) - lambda' c.
    double margin_upper_bound(const MarginProblem &prob, const arma::vec &lambda, const arma::vec &beta);

    // Real symmetric embedding [Re -Im; Im Re] and its inverse (averaging the two copies).
    arma::mat real_embedding(const CMat &A);
    CMat complex_from_embedding(const arma::mat &X);
}

#endif
