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

namespace irsbf
{
    const char *to_string(RxMode m)
    {
        switch (m)
        {
        case RxMode::ZF:
            return "zf";
        case RxMode::MMSE:
            return "mmse";
        case RxMode::MRC:
            return "mrc";
        case RxMode::Fixed:
            return "fixed";
        }
        return "unknown";
    }

    RxMode parse_rx_mode(const std::string &s)
    {
        if (s == "zf")
            return RxMode::ZF;
        if (s == "mmse")
            return RxMode::MMSE;
        if (s == "mrc")
            return RxMode::MRC;
        throw std::invalid_argument("unknown receiver mode '" + s + "' (expected zf, mmse or mrc).");
    }

    static void check_powers(const CMat &H, const arma::vec &powers)
    {
        if (powers.n_elem != H.n_cols)
            throw std::invalid_argument("receivers: one power per user is required.");
        if (!(powers.min() > 0.0))
            throw std::domain_error("receivers: powers must be strictly positive.");
    }

    ReceiveBeamformers zf_receivers(const CMat &H, const arma::vec &powers)
    {
        check_powers(H, powers);
        if (numerical_rank(H) < H.n_cols)
            throw RankDeficientError("zf_receivers: H has rank below K.");
        const CMat gram = H.t() * H;
        CMat gi;
        if (!arma::inv_sympd(gi, gram))
            throw RankDeficientError("zf_receivers: H^H H is not invertible.");
        ReceiveBeamformers out;
        out.W = H * gi * arma::diagmat(arma::conv_to<CVec>::from(1.0 / arma::sqrt(powers)));
        out.mode = RxMode::ZF;
        return out;
    }

    ReceiveBeamformers mmse_receivers(const CMat &H, const arma::vec &powers, double noise)
    {
        check_powers(H, powers);
        if (!(noise > 0.0))
            throw std::domain_error("mmse_receivers: noise power must be positive.");
        const CMat HP = H * arma::diagmat(arma::conv_to<CVec>::from(arma::sqrt(powers)));
        CMat S = HP * HP.t();
        S.diag() += noise;
        ReceiveBeamformers out;
        out.W = arma::solve(S, HP, arma::solve_opts::likely_sympd);
        out.mode = RxMode::MMSE;
        return out;
    }

    ReceiveBeamformers mrc_receivers(const CMat &H)
    {
        ReceiveBeamformers out;
        out.W = H;
        out.mode = RxMode::MRC;
        return out;
    }

    ReceiveBeamformers compute_receivers(const CMat &H, const SinrContext &ctx, RxMode mode)
    {
        ctx.validate(H.n_cols);
        switch (mode)
        {
        case RxMode::ZF:
            try
            {
                return zf_receivers(H, ctx.powers);
            }
            catch (const RankDeficientError &)
            {
                ReceiveBeamformers out = mmse_receivers(H, ctx.powers, ctx.noise);
                out.zf_fallback = true;
                return out;
            }
        case RxMode::MMSE:
            return mmse_receivers(H, ctx.powers, ctx.noise);
        case RxMode::MRC:
            return mrc_receivers(H);
        case RxMode::Fixed:
            break;
        }
        throw std::invalid_argument("compute_receivers: a concrete receiver mode is required.");
    }
}
