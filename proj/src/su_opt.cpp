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

#include "irsbf/su_opt.hpp"

#include <cmath>

namespace irsbf
{
    static void require_single_user(const ChannelSet &chs, const char *who)
    {
        if (chs.n_users != 1)
            throw std::invalid_argument(std::string(who) + ": a single-user channel set is required.");
    }

    static CVec align(const CVec &v, cx ref)
    {
        const double r = std::abs(ref) > 0.0 ? std::arg(ref) : 0.0;
        CVec out(v.n_elem);
        for (uword m = 0; m < v.n_elem; ++m)
            out(m) = std::polar(1.0, r + std::arg(v(m)));
        return out;
    }

    double su_objective(const ChannelSet &chs, const ReflectPattern &pat, const CVec &w)
    {
        require_single_user(chs, "su_objective");
        const double wn = arma::norm(w);
        if (!(wn > 0.0) || w.n_elem != chs.n_antennas)
            throw std::invalid_argument("su_objective: w must be a non-zero length-N vector.");
        return std::norm(arma::cdot(w, user_channel(chs, 0, pat))) / (wn * wn);
    }

    void theta2_coefficients(const ChannelSet &chs, const CVec &theta1, const CVec &w, CVec &b, cx &b0)
    {
        require_single_user(chs, "theta2_coefficients");
        if (theta1.n_elem != chs.m1 || w.n_elem != chs.n_antennas)
            throw std::invalid_argument("theta2_coefficients: dimension mismatch.");
        b = (weighted_double_reflection(chs, 0, theta1) + chs.R2[0]).t() * w;
        b0 = chs.m1 > 0 ? arma::cdot(w, chs.R1[0] * theta1) : cx(0.0, 0.0);
    }

    void theta1_coefficients(const ChannelSet &chs, const CVec &theta2, const CVec &w, CVec &c, cx &c0)
    {
        require_single_user(chs, "theta1_coefficients");
        if (theta2.n_elem != chs.m2 || w.n_elem != chs.n_antennas)
            throw std::invalid_argument("theta1_coefficients: dimension mismatch.");
        c = (stacked_double_reflection(chs, 0, theta2) + chs.R1[0]).t() * w;
        c0 = chs.m2 > 0 ? arma::cdot(w, chs.R2[0] * theta2) : cx(0.0, 0.0);
    }

    CVec opt_theta2_closed_form(const ChannelSet &chs, const CVec &theta1, const CVec &w)
    {
        CVec b;
        cx b0;
        theta2_coefficients(chs, theta1, w, b, b0);
        return align(b, b0);
    }

    CVec opt_theta1_closed_form(const ChannelSet &chs, const CVec &theta2, const CVec &w)
    {
        CVec c;
        cx c0;
        theta1_coefficients(chs, theta2, w, c, c0);
        return align(c, c0);
    }

    CVec mrc_receive(const ChannelSet &chs, const ReflectPattern &pat)
    {
        require_single_user(chs, "mrc_receive");
        const CVec h = user_channel(chs, 0, pat);
        const double nrm = arma::norm(h);
        if (!(nrm > 0.0))
            throw std::domain_error("mrc_receive: effective channel is zero.");
        return h / nrm;
    }

    SuSolveState ao_single_user(const ChannelSet &chs, const SuSolveState &init, double power, double noise,
                                unsigned I0, double tol)
    {
        require_single_user(chs, "ao_single_user");
        check_pattern(chs, init.theta);
        const double wn = arma::norm(init.w);
        if (init.w.n_elem != chs.n_antennas || !(wn > 0.0))
            throw std::invalid_argument("ao_single_user: initial w must be a non-zero length-N vector.");

        SuSolveState s;
        s.theta = init.theta;
        s.w = init.w / wn;
        double obj = su_objective(chs, s.theta, s.w);
        s.trace.push_back(obj);

        for (unsigned it = 1; it <= I0; ++it)
        {
            const double prev = obj;
            if (chs.m2 > 0)
            {
                s.theta.theta2 = opt_theta2_closed_form(chs, s.theta.theta1, s.w);
                s.trace.push_back(obj = su_objective(chs, s.theta, s.w));
            }
            if (chs.m1 > 0)
            {
                s.theta.theta1 = opt_theta1_closed_form(chs, s.theta.theta2, s.w);
                s.trace.push_back(obj = su_objective(chs, s.theta, s.w));
            }
            const CVec h = user_channel(chs, 0, s.theta);
            if (arma::norm(h) > 0.0)
                s.w = h / arma::norm(h);
            s.trace.push_back(obj = su_objective(chs, s.theta, s.w));
            s.iterations = it;
            if (obj - prev <= tol * prev)
            {
                s.converged = true;
                break;
            }
        }
        s.snr = power / noise * obj;
        return s;
    }

    SuSolveState random_su_state(const ChannelSet &chs, double power, double noise, Rng &rng)
    {
        SuSolveState s;
        s.theta.theta1 = random_phases(chs.m1, rng);
        s.theta.theta2 = random_phases(chs.m2, rng);
        s.w = mrc_receive(chs, s.theta);
        const double obj = su_objective(chs, s.theta, s.w);
        s.trace.push_back(obj);
        s.snr = power / noise * obj;
        return s;
    }

    SingleIrsSolution single_irs_opt(const ChannelSet &baseline, double power, double noise, Rng &rng, unsigned I0,
                                     double tol, unsigned restarts)
    {
        require_single_user(baseline, "single_irs_opt");
        if (baseline.m1 != 0)
            throw std::invalid_argument("single_irs_opt: baseline must be a single IRS (M1 = 0).");
        if (restarts < 1)
            throw std::invalid_argument("single_irs_opt: at least one restart is required.");
        const CMat &R = baseline.R2[0];

        SingleIrsSolution best;
        double best_obj = -1.0;
        for (unsigned r = 0; r < restarts; ++r)
        {
            CVec theta = random_phases(baseline.m2, rng);
            double obj = std::pow(arma::norm(R * theta), 2);
            for (unsigned it = 0; it < I0; ++it)
            {
                const CVec h = R * theta;
                const double nrm = arma::norm(h);
                if (!(nrm > 0.0))
                    break;
                theta = align(R.t() * (h / nrm), cx(1.0, 0.0));
                const double next = std::pow(arma::norm(R * theta), 2);
                const bool done = next - obj <= tol * obj;
                obj = std::max(obj, next);
                if (done)
                    break;
            }
            if (obj > best_obj)
            {
                best_obj = obj;
                best.theta = theta;
                best.best_restart = r;
            }
        }
        const CVec h = R * best.theta;
        const double nrm = arma::norm(h);
        best.w = nrm > 0.0 ? CVec(h / nrm) : CVec(baseline.n_antennas, arma::fill::zeros);
        if (!(nrm > 0.0))
            best.w(0) = 1.0;
        best.snr = power / noise * nrm * nrm;
        return best;
    }

    SuInit init_from_single_irs(const ChannelSet &chs, const SingleIrsSolution &sol, double power, double noise)
    {
        require_single_user(chs, "init_from_single_irs");
        if (sol.theta.n_elem != chs.m() || sol.w.n_elem != chs.n_antennas)
            throw std::invalid_argument("init_from_single_irs: solution does not match the channel set.");
        const CVec t1 = sol.theta.head(chs.m1), t2 = sol.theta.tail(chs.m2);
        const CVec w = sol.w / arma::norm(sol.w);

        SuInit out;
        out.a1 = chs.m1 > 0 ? arma::cdot(w, stacked_double_reflection(chs, 0, t2) * t1) : cx(0.0, 0.0);
        out.a2 = arma::cdot(w, chs.R2[0] * t2);
        if (chs.m1 > 0)
            out.a2 += arma::cdot(w, chs.R1[0] * t1);
        out.phi = std::abs(out.a1) > 0.0 ? std::arg(out.a2 / out.a1) : 0.0;

        const cx e = std::polar(1.0, out.phi);
        out.state.theta = {CVec(e * t1), CVec(e * t2)};
        out.state.w = w;
        const double obj = su_objective(chs, out.state.theta, w);
        out.state.trace.push_back(obj);
        out.state.snr = power / noise * obj;
        return out;
    }

    // ---------------------------------------------------------------------------------------------

    namespace
    {
        struct BlockResult
        {
            CVec theta;
            double value = 0.0;
            double upper = 0.0;
            bool ok = true;
        };

        // max ||A theta + a||^2 over unit-modulus theta, via SDR + randomization.
        BlockResult sdr_block(const CMat &A, const CVec &a, unsigned candidates, const IpmOptions &ipm, Rng &rng)
        {
            const uword m = A.n_cols;
            CMat C(m + 1, m + 1);
            C.submat(0, 0, m - 1, m - 1) = A.t() * A;
            C.submat(0, m, m - 1, m) = A.t() * a;
            C.submat(m, 0, m, m - 1) = a.t() * A;
            C(m, m) = arma::cdot(a, a);

            const QuadraticFormSdr sdr = maximize_quadratic_form(C, ipm);
            BlockResult out;
            out.upper = sdr.upper;
            out.ok = sdr.status == IpmStatus::Converged;
            out.value = -1.0;
            if (sdr.Psi.is_empty())
            {
                out.ok = false;
                return out;
            }
            const CMat F = psd_sqrt_factor(sdr.Psi);
            for (unsigned r = 0; r < candidates; ++r)
            {
                const CVec tt = randomization_candidate(F, rng);
                const CVec theta = std::conj(tt(m)) * tt.head(m);
                const double v = std::pow(arma::norm(A * theta + a), 2);
                if (v > out.value)
                {
                    out.value = v;
                    out.theta = theta;
                }
            }
            return out;
        }
    }

    SuSdrResult sdr_benchmark_su(const ChannelSet &chs, const ReflectPattern &init, double power, double noise,
                                 Rng &rng, const SuSdrOptions &opt)
    {
        require_single_user(chs, "sdr_benchmark_su");
        check_pattern(chs, init);
        SuSdrResult out;
        out.theta = init;
        auto energy = [&](const ReflectPattern &p)
        { return std::pow(arma::norm(user_channel(chs, 0, p)), 2); };
        double cur = energy(out.theta);
        double bound = arma::datum::inf;

        for (unsigned round = 1; round <= opt.rounds; ++round)
        {
            const double prev = cur;
            if (chs.m2 > 0)
            {
                const CMat A = weighted_double_reflection(chs, 0, out.theta.theta1) + chs.R2[0];
                const CVec a = chs.m1 > 0 ? CVec(chs.R1[0] * out.theta.theta1) : CVec(chs.n_antennas, arma::fill::zeros);
                const BlockResult b = sdr_block(A, a, opt.candidates, opt.ipm, rng);
                out.ok = out.ok && b.ok;
                bound = b.upper;
                if (b.value >= cur)
                {
                    out.theta.theta2 = b.theta;
                    cur = energy(out.theta);
                }
            }
            if (chs.m1 > 0)
            {
                const CMat A = stacked_double_reflection(chs, 0, out.theta.theta2) + chs.R1[0];
                const CVec a = chs.R2[0] * out.theta.theta2;
                const BlockResult b = sdr_block(A, a, opt.candidates, opt.ipm, rng);
                out.ok = out.ok && b.ok;
                bound = b.upper;
                if (b.value >= cur)
                {
                    out.theta.theta1 = b.theta;
                    cur = energy(out.theta);
                }
            }
            out.rounds = round;
            if (cur - prev <= opt.tol * prev)
                break;
        }
        out.w = mrc_receive(chs, out.theta);
        out.snr = power / noise * cur;
        out.bound = power / noise * bound;
        return out;
    }
}
