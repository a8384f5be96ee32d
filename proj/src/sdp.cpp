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

#include "irsbf/sdp.hpp"

#include <cmath>

namespace irsbf
{
    void MaxMinSdpInstance::validate() const
    {
        const uword K = n_users();
        if (K < 1)
            throw std::invalid_argument("MaxMinSdpInstance: at least one user is required.");
        const uword m = dim();
        if (m < 1)
            throw std::invalid_argument("MaxMinSdpInstance: reflect vector must have at least one entry.");
        for (const CMat &qk : q)
            if (qk.n_rows != m || qk.n_cols != K || !qk.is_finite())
                throw std::invalid_argument("MaxMinSdpInstance: every q[k] must be a finite M' x K matrix.");
        if (qbar.n_rows != K || qbar.n_cols != K || !qbar.is_finite())
            throw std::invalid_argument("MaxMinSdpInstance: qbar must be a finite K x K matrix.");
        if (noise.n_elem != K)
            throw std::invalid_argument("MaxMinSdpInstance: one noise term per user is required.");
        for (double s : noise)
            if (!(s > 0.0) || !std::isfinite(s))
                throw std::domain_error("MaxMinSdpInstance: noise terms must be strictly positive.");
    }

    CMat MaxMinSdpInstance::B(uword k, uword j) const
    {
        const uword m = dim();
        const CVec v = q[k].col(j);
        const cx qb = qbar(k, j);
        CMat out(m + 1, m + 1, arma::fill::zeros);
        out.submat(0, 0, m - 1, m - 1) = v * v.t();
        out.submat(0, m, m - 1, m) = qb * v;
        out.submat(m, 0, m, m - 1) = std::conj(qb) * v.t();
        return out;
    }

    arma::vec MaxMinSdpInstance::sinr(const CVec &theta) const
    {
        const uword K = n_users();
        if (theta.n_elem != dim())
            throw std::invalid_argument("MaxMinSdpInstance::sinr: theta has the wrong length.");
        arma::vec out(K);
        for (uword k = 0; k < K; ++k)
        {
            const CVec s = q[k].t() * theta + qbar.row(k).st();
            double interference = noise(k);
            for (uword j = 0; j < K; ++j)
                if (j != k)
                    interference += std::norm(s(j));
            out(k) = std::norm(s(k)) / interference;
        }
        return out;
    }

    arma::vec MaxMinSdpInstance::relaxed_sinr(const CMat &Psi) const
    {
        const uword K = n_users();
        if (Psi.n_rows != dim() + 1 || Psi.n_cols != dim() + 1)
            throw std::invalid_argument("MaxMinSdpInstance::relaxed_sinr: Psi has the wrong size.");
        arma::vec out(K);
        for (uword k = 0; k < K; ++k)
        {
            double signal = 0.0, interference = noise(k);
            for (uword j = 0; j < K; ++j)
            {
                const double v = std::real(arma::accu(B(k, j) % Psi.st())) + std::norm(qbar(k, j));
                (j == k ? signal : interference) += v;
            }
            out(k) = signal / interference;
        }
        return out;
    }

    const char *to_string(SdpStatus s)
    {
        switch (s)
        {
        case SdpStatus::Feasible:
            return "feasible";
        case SdpStatus::Infeasible:
            return "infeasible";
        case SdpStatus::NumericalFailure:
            return "numerical-failure";
        }
        return "unknown";
    }

    PsdSolution feasibility_check(const MaxMinSdpInstance &inst, double delta, const SdpOptions &opt)
    {
        inst.validate();
        if (!(delta >= 0.0) || !std::isfinite(delta))
            throw std::invalid_argument("feasibility_check: delta must be finite and non-negative.");
        const uword K = inst.n_users(), n = inst.dim() + 1;

        MarginProblem prob;
        prob.c.set_size(K);
        for (uword k = 0; k < K; ++k)
        {
            CMat A = inst.B(k, k);
            double c = delta * inst.noise(k) - std::norm(inst.qbar(k, k));
            for (uword j = 0; j < K; ++j)
                if (j != k)
                {
                    A -= delta * inst.B(k, j);
                    c += delta * std::norm(inst.qbar(k, j));
                }
            double scale = std::max(double(n) * arma::norm(A, "fro"), std::abs(c));
            if (!(scale > 0.0))
                scale = 1.0;
            prob.A.push_back(A / scale);
            prob.c(k) = c / scale;
        }

        IpmOptions ipm = opt.ipm;
        ipm.stop_above = -opt.slack;
        ipm.stop_below = 0.0;
        const IpmResult r = solve_max_min_margin(prob, ipm);

        PsdSolution out;
        out.Psi = r.Psi;
        out.margins = r.margins;
        out.upper = r.upper;
        out.iterations = r.iterations;
        if (r.lower >= -opt.slack && !r.Psi.is_empty())
            out.status = SdpStatus::Feasible;
        else if (r.upper < 0.0)
            out.status = SdpStatus::Infeasible;
        else
            out.status = SdpStatus::NumericalFailure;
        return out;
    }

    double matched_filter_upper_bound(const MaxMinSdpInstance &inst)
    {
        inst.validate();
        double best = arma::datum::inf;
        for (uword k = 0; k < inst.n_users(); ++k)
        {
            const double a = arma::accu(arma::abs(inst.q[k].col(k))) + std::abs(inst.qbar(k, k));
            best = std::min(best, a * a / inst.noise(k));
        }
        return best;
    }

    BisectionResult bisection_maxmin(const MaxMinSdpInstance &inst, double delta_lo, double delta_hi, double eps,
                                     const SdpOptions &opt)
    {
        if (!(delta_lo >= 0.0) || !std::isfinite(delta_hi) || !(delta_hi >= delta_lo))
            throw std::invalid_argument("bisection_maxmin: need 0 <= delta_lo <= delta_hi < inf.");
        if (!(eps > 0.0))
            throw std::invalid_argument("bisection_maxmin: eps must be positive.");

        BisectionResult out;
        auto check = [&](double d)
        {
            PsdSolution s = feasibility_check(inst, d, opt);
            out.ipm_iterations += s.iterations;
            if (s.status == SdpStatus::NumericalFailure)
                ++out.failures;
            return s;
        };

        PsdSolution top = check(delta_hi);
        if (top.status == SdpStatus::Feasible)
        {
            out.delta = delta_hi;
            out.Psi = top.Psi;
            out.saturated = true;
            return out;
        }
        PsdSolution bottom = check(delta_lo);
        if (bottom.status != SdpStatus::Feasible)
            throw std::invalid_argument("bisection_maxmin: delta_lo is not feasible.");
        out.delta = delta_lo;
        out.Psi = bottom.Psi;

        double lo = delta_lo, hi = delta_hi;
        while (hi - lo > eps)
        {
            const double mid = 0.5 * (lo + hi);
            PsdSolution s = check(mid);
            ++out.steps;
            if (s.status == SdpStatus::Feasible)
            {
                lo = mid;
                out.delta = mid;
                out.Psi = s.Psi;
            }
            else
                hi = mid;
        }
        return out;
    }

    CMat psd_sqrt_factor(const CMat &Psi)
    {
        arma::vec ev;
        CMat U;
        if (!arma::eig_sym(ev, U, CMat(0.5 * (Psi + Psi.t()))))
            throw std::runtime_error("psd_sqrt_factor: eigendecomposition failed.");
        const arma::vec s = arma::sqrt(arma::clamp(ev, 0.0, arma::datum::inf));
        return U * arma::diagmat(arma::conv_to<CVec>::from(s));
    }

    CVec randomization_candidate(const CMat &sqrt_factor, Rng &rng)
    {
        return project_unit_modulus(sqrt_factor * CVec(crandn(sqrt_factor.n_cols, 1, rng)));
    }

    RandomizationResult gaussian_randomization(const CMat &Psi, const MaxMinSdpInstance &inst, unsigned R, Rng &rng)
    {
        if (R < 1)
            throw std::invalid_argument("gaussian_randomization: at least one candidate is required.");
        inst.validate();
        const uword m = inst.dim();
        if (Psi.n_rows != m + 1 || Psi.n_cols != m + 1)
            throw std::invalid_argument("gaussian_randomization: Psi has the wrong size.");
        const CMat F = psd_sqrt_factor(Psi);

        RandomizationResult best;
        best.min_sinr = -1.0;
        for (unsigned r = 0; r < R; ++r)
        {
            const CVec tt = randomization_candidate(F, rng);
            const CVec theta = std::conj(tt(m)) * tt.head(m);
            const arma::vec s = inst.sinr(theta);
            if (s.min() > best.min_sinr)
            {
                best.theta_tilde = tt;
                best.theta = theta;
                best.sinrs = s;
                best.min_sinr = s.min();
                best.best_index = r;
            }
        }
        return best;
    }

    QuadraticFormSdr maximize_quadratic_form(const CMat &C, const IpmOptions &opt)
    {
        const uword n = C.n_rows;
        if (n < 1 || C.n_cols != n)
            throw std::invalid_argument("maximize_quadratic_form: C must be square and non-empty.");
        double scale = double(n) * arma::norm(C, "fro");
        if (!(scale > 0.0))
            scale = 1.0;
        MarginProblem prob;
        prob.A.push_back(CMat(0.5 * (C + C.t())) / scale);
        prob.c = arma::vec{0.0};
        const IpmResult r = solve_max_min_margin(prob, opt);
        QuadraticFormSdr out;
        out.Psi = r.Psi;
        out.value = r.lower * scale;
        out.upper = r.upper * scale;
        out.status = r.status;
        return out;
    }
}
