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

#include "irsbf/mu_opt.hpp"

#include <cmath>

namespace irsbf
{
    double min_sinr(const ChannelSet &chs, const ReflectPattern &pat, const CMat &W, const SinrContext &ctx)
    {
        return sinr_per_user(effective_channel(chs, pat).H, W, ctx).min();
    }

    static void check_instance_args(const ChannelSet &chs, const CMat &W, const SinrContext &ctx)
    {
        if (W.n_rows != chs.n_antennas || W.n_cols != chs.n_users)
            throw std::invalid_argument("instance builder: W must be N x K.");
        ctx.validate(chs.n_users);
    }

    // Shared body: A_j is the N x M' matrix multiplying the free vector for user j, a_j the fixed part.
    template <typename FreeFn, typename FixedFn>
    static MaxMinSdpInstance build_instance(const ChannelSet &chs, uword dim, const CMat &W, const SinrContext &ctx,
                                            FreeFn free_part, FixedFn fixed_part)
    {
        const uword K = chs.n_users;
        MaxMinSdpInstance inst;
        inst.q.assign(K, CMat(dim, K));
        inst.qbar.set_size(K, K);
        inst.noise.set_size(K);
        for (uword j = 0; j < K; ++j)
        {
            const double sp = std::sqrt(ctx.powers(j));
            const CMat Aj = free_part(j);
            const CVec aj = fixed_part(j);
            for (uword k = 0; k < K; ++k)
            {
                inst.q[k].col(j) = sp * (Aj.t() * W.col(k));
                inst.qbar(k, j) = sp * arma::cdot(W.col(k), aj);
            }
        }
        for (uword k = 0; k < K; ++k)
            inst.noise(k) = ctx.noise * std::pow(arma::norm(W.col(k)), 2);
        return inst;
    }

    MaxMinSdpInstance build_p31_instance(const ChannelSet &chs, const CVec &theta1, const CMat &W,
                                         const SinrContext &ctx)
    {
        check_instance_args(chs, W, ctx);
        if (theta1.n_elem != chs.m1)
            throw std::invalid_argument("build_p31_instance: theta1 has the wrong length.");
        if (chs.m2 < 1)
            throw std::invalid_argument("build_p31_instance: IRS 2 has no subsurfaces.");
        return build_instance(
            chs, chs.m2, W, ctx, [&](uword j)
            { return CMat(weighted_double_reflection(chs, j, theta1) + chs.R2[j]); },
            [&](uword j)
            { return chs.m1 > 0 ? CVec(chs.R1[j] * theta1) : CVec(chs.n_antennas, arma::fill::zeros); });
    }

    MaxMinSdpInstance build_p34_instance(const ChannelSet &chs, const CVec &theta2, const CMat &W,
                                         const SinrContext &ctx)
    {
        check_instance_args(chs, W, ctx);
        if (theta2.n_elem != chs.m2)
            throw std::invalid_argument("build_p34_instance: theta2 has the wrong length.");
        if (chs.m1 < 1)
            throw std::invalid_argument("build_p34_instance: IRS 1 has no subsurfaces.");
        return build_instance(
            chs, chs.m1, W, ctx, [&](uword j)
            { return CMat(stacked_double_reflection(chs, j, theta2) + chs.R1[j]); },
            [&](uword j)
            { return chs.m2 > 0 ? CVec(chs.R2[j] * theta2) : CVec(chs.n_antennas, arma::fill::zeros); });
    }

    bool trace_non_decreasing(const std::vector<double> &trace, double abs_tol)
    {
        for (size_t i = 1; i < trace.size(); ++i)
            if (trace[i] < trace[i - 1] - abs_tol)
                return false;
        return true;
    }

    MuSolveState algorithm1(const ChannelSet &chs, const MuSolveState &init, const SinrContext &ctx,
                            const MuOptions &opt, Rng &rng)
    {
        check_pattern(chs, init.theta);
        check_instance_args(chs, init.rx.W, ctx);

        MuSolveState s;
        s.theta = init.theta;
        s.rx = init.rx;
        double cur = min_sinr(chs, s.theta, s.rx.W, ctx);
        s.trace.push_back(cur);

        auto theta_block = [&](unsigned it, bool irs2)
        {
            const MaxMinSdpInstance inst = irs2 ? build_p31_instance(chs, s.theta.theta1, s.rx.W, ctx)
                                                : build_p34_instance(chs, s.theta.theta2, s.rx.W, ctx);
            const double hi = matched_filter_upper_bound(inst);
            BisectionResult bis;
            try
            {
                // The current vector is a rank-one feasible point at the current value.
                bis = bisection_maxmin(inst, std::min(cur, hi), hi, opt.eps, opt.sdp);
            }
            catch (const std::invalid_argument &)
            {
                bis = bisection_maxmin(inst, 0.0, hi, opt.eps, opt.sdp);
            }
            const RandomizationResult rnd = gaussian_randomization(bis.Psi, inst, opt.candidates, rng);

            ReflectPattern cand = s.theta;
            (irs2 ? cand.theta2 : cand.theta1) = rnd.theta;
            MuStepRecord rec;
            rec.iteration = it;
            rec.block = irs2 ? "theta2" : "theta1";
            rec.before = cur;
            rec.candidate = min_sinr(chs, cand, s.rx.W, ctx);
            rec.delta_star = bis.delta;
            rec.eps = opt.eps;
            rec.saturated = bis.saturated;
            rec.bisection_steps = bis.steps;
            rec.failures = bis.failures;
            rec.accepted = rec.candidate >= cur;
            if (rec.accepted)
            {
                s.theta = cand;
                cur = rec.candidate;
            }
            s.steps.push_back(rec);
        };

        for (unsigned it = 1; it <= opt.I1; ++it)
        {
            const double prev = cur;
            if (chs.m2 > 0)
                theta_block(it, true);
            if (chs.m1 > 0)
                theta_block(it, false);

            const ReceiveBeamformers rx = compute_receivers(effective_channel(chs, s.theta).H, ctx, opt.rx);
            MuStepRecord rec;
            rec.iteration = it;
            rec.block = "W";
            rec.before = cur;
            rec.candidate = min_sinr(chs, s.theta, rx.W, ctx);
            rec.accepted = rec.candidate >= cur;
            if (rec.accepted)
            {
                s.rx = rx;
                cur = rec.candidate;
            }
            s.steps.push_back(rec);

            s.trace.push_back(cur);
            s.iterations = it;
            if (cur - prev <= opt.xi * prev)
            {
                s.converged = true;
                break;
            }
        }
        s.min_sinr = cur;
        return s;
    }

    MultiStartResult algorithm1_multistart(const ChannelSet &chs, const SinrContext &ctx, const MuOptions &opt,
                                           Rng &rng, unsigned random_starts)
    {
        const CMat F1 = dft_codebook(chs.m1), F2 = dft_codebook(chs.m2);
        std::vector<ReflectPattern> starts;
        for (uword n1 = 0; n1 < std::max<uword>(chs.m1, 1); ++n1)
            for (uword n2 = 0; n2 < std::max<uword>(chs.m2, 1); ++n2)
                starts.push_back({chs.m1 > 0 ? CVec(F1.col(n1)) : CVec(), chs.m2 > 0 ? CVec(F2.col(n2)) : CVec()});
        for (unsigned r = 0; r < random_starts; ++r)
            starts.push_back({random_phases(chs.m1, rng), random_phases(chs.m2, rng)});

        MultiStartResult out;
        out.best.min_sinr = -1.0;
        for (unsigned i = 0; i < starts.size(); ++i)
        {
            MuSolveState init;
            init.theta = starts[i];
            init.rx = compute_receivers(effective_channel(chs, starts[i]).H, ctx, opt.rx);
            out.runs.push_back(algorithm1(chs, init, ctx, opt, rng));
            if (out.runs.back().min_sinr > out.best.min_sinr)
            {
                out.best = out.runs.back();
                out.best_start = i;
            }
        }
        return out;
    }

    CMat dft_codebook(uword M)
    {
        CMat F(M, M);
        for (uword m = 0; m < M; ++m)
            for (uword n = 0; n < M; ++n)
                F(m, n) = std::polar(1.0, -2.0 * kPi * double((m * n) % M) / double(M));
        return F;
    }

    MuSolveState dft_codebook_search(const ChannelSet &chs, const SinrContext &ctx, RxMode mode)
    {
        ctx.validate(chs.n_users);
        const CMat F1 = dft_codebook(chs.m1), F2 = dft_codebook(chs.m2);
        const RxMode used = chs.n_users == 1 ? RxMode::MRC : mode;

        MuSolveState best;
        best.min_sinr = -1.0;
        for (uword n1 = 0; n1 < std::max<uword>(chs.m1, 1); ++n1)
            for (uword n2 = 0; n2 < std::max<uword>(chs.m2, 1); ++n2)
            {
                ReflectPattern pat{chs.m1 > 0 ? CVec(F1.col(n1)) : CVec(), chs.m2 > 0 ? CVec(F2.col(n2)) : CVec()};
                const CMat H = effective_channel(chs, pat).H;
                ReceiveBeamformers rx = compute_receivers(H, ctx, used);
                double v = 0.0;
                try
                {
                    v = sinr_per_user(H, rx.W, ctx).min();
                }
                catch (const std::domain_error &)
                {
                    v = 0.0; // a user with a zero channel
                }
                if (v > best.min_sinr)
                {
                    best.min_sinr = v;
                    best.theta = pat;
                    best.rx = rx;
                }
            }
        best.trace.push_back(best.min_sinr);
        return best;
    }
}
