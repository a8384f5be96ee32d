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

#include "catch_amalgamated.hpp"

#include "irsbf/mu_opt.hpp"

using namespace irsbf;
using Catch::Approx;

static double max_abs(const CMat &A) { return A.is_empty() ? 0.0 : arma::abs(A).max(); }

static ChannelSet random_set(uword N, uword M1, uword M2, uword K, Rng &rng)
{
    return ChannelSet::from_links(crandn(M1, K, rng), crandn(M2, K, rng), crandn(M2, M1, rng), crandn(N, M1, rng),
                                  crandn(N, M2, rng));
}

// Optimal per-user SINR: P_k h_k^H (sum_{j != k} P_j h_j h_j^H + sigma^2 I)^-1 h_k.
static double optimal_sinr(const CMat &H, const arma::vec &P, double noise, uword k)
{
    CMat S(H.n_rows, H.n_rows, arma::fill::zeros);
    S.diag().fill(noise);
    for (uword j = 0; j < H.n_cols; ++j)
        if (j != k)
            S += P(j) * H.col(j) * H.col(j).t();
    return P(k) * std::real(arma::cdot(H.col(k), arma::solve(S, CVec(H.col(k)))));
}

TEST_CASE("ZF nulls interference and matches the closed-form min-SINR")
{
    Rng rng(1);
    const CMat H = crandn(6, 3, rng);
    const arma::vec P{0.5, 1.0, 4.0};
    const ReceiveBeamformers zf = zf_receivers(H, P);
    const CMat G = zf.W.t() * H;
    CHECK(max_abs(G - CMat(arma::diagmat(arma::conv_to<CVec>::from(1.0 / arma::sqrt(P))))) < 1e-10);

    const SinrContext eq = SinrContext::equal_power(3, 2.0, 0.1);
    const ReceiveBeamformers z2 = zf_receivers(H, eq.powers);
    CHECK(sinr_per_user(H, z2.W, eq).min() == Approx(zf_min_sinr_formula(H, 2.0, 0.1)).epsilon(1e-10));
}

TEST_CASE("MMSE reaches the optimal per-user SINR")
{
    Rng rng(2);
    for (int t = 0; t < 10; ++t)
    {
        const CMat H = crandn(4, 3, rng);
        const SinrContext ctx{{0.7, 1.3, 2.0}, 0.4};
        const ReceiveBeamformers m = mmse_receivers(H, ctx.powers, ctx.noise);
        const arma::vec g = sinr_per_user(H, m.W, ctx);
        const arma::vec gz = sinr_per_user(H, zf_receivers(H, ctx.powers).W, ctx);
        const arma::vec gm = sinr_per_user(H, mrc_receivers(H).W, ctx);
        for (uword k = 0; k < 3; ++k)
        {
            CHECK(g(k) == Approx(optimal_sinr(H, ctx.powers, ctx.noise, k)).epsilon(1e-10));
            CHECK(g(k) >= gz(k) * (1.0 - 1e-10));
            CHECK(g(k) >= gm(k) * (1.0 - 1e-10));
        }
    }
}

TEST_CASE("Receiver dispatch and ZF fallback")
{
    Rng rng(3);
    const CMat Hr = crandn(4, 2, rng) * crandn(2, 3, rng);
    const SinrContext ctx = SinrContext::equal_power(3, 1.0, 1.0);
    CHECK_THROWS_AS(zf_receivers(Hr, ctx.powers), RankDeficientError);
    const ReceiveBeamformers r = compute_receivers(Hr, ctx, RxMode::ZF);
    CHECK(r.zf_fallback);
    CHECK(r.mode == RxMode::MMSE);
    CHECK_THROWS_AS(compute_receivers(Hr, ctx, RxMode::Fixed), std::invalid_argument);
    CHECK(parse_rx_mode("zf") == RxMode::ZF);
    CHECK(parse_rx_mode("mmse") == RxMode::MMSE);
    CHECK(parse_rx_mode("mrc") == RxMode::MRC);
    CHECK_THROWS_AS(parse_rx_mode("lmmse"), std::invalid_argument);
    CHECK(std::string(to_string(RxMode::MMSE)) == "mmse");
}

TEST_CASE("Block instances reproduce the exact SINRs")
{
    Rng rng(4);
    const ChannelSet c = random_set(4, 3, 2, 3, rng);
    const SinrContext ctx{{1.0, 0.5, 2.0}, 0.3};
    const ReflectPattern p{random_phases(3, rng), random_phases(2, rng)};
    const CMat W = crandn(4, 3, rng);
    const arma::vec ref = sinr_per_user(effective_channel(c, p).H, W, ctx);
    CHECK(arma::abs(build_p31_instance(c, p.theta1, W, ctx).sinr(p.theta2) - ref).max() < 1e-10 * ref.max());
    CHECK(arma::abs(build_p34_instance(c, p.theta2, W, ctx).sinr(p.theta1) - ref).max() < 1e-10 * ref.max());
}

TEST_CASE("DFT codebook and exhaustive search")
{
    const CMat F = dft_codebook(4);
    CHECK(max_abs(F.t() * F - 4.0 * CMat(4, 4, arma::fill::eye)) < 1e-12);
    CHECK(std::abs(F(1, 1) - std::polar(1.0, -2.0 * kPi / 4.0)) < 1e-14);

    Rng rng(5);
    const ChannelSet c = random_set(2, 2, 2, 2, rng);
    const SinrContext ctx = SinrContext::equal_power(2, 1.0, 0.5);
    const MuSolveState s = dft_codebook_search(c, ctx, RxMode::MMSE);
    double best = 0.0;
    const CMat F2 = dft_codebook(2);
    for (uword a = 0; a < 2; ++a)
        for (uword b = 0; b < 2; ++b)
        {
            const CMat H = effective_channel(c, {CVec(F2.col(a)), CVec(F2.col(b))}).H;
            best = std::max(best, sinr_per_user(H, mmse_receivers(H, ctx.powers, ctx.noise).W, ctx).min());
        }
    CHECK(s.min_sinr == Approx(best).epsilon(1e-12));
}

TEST_CASE("Algorithm 1 is monotone and reports a consistent state")
{
    Rng rng(6);
    for (RxMode mode : {RxMode::MMSE, RxMode::ZF})
    {
        const ChannelSet c = random_set(4, 3, 3, 3, rng);
        const SinrContext ctx = SinrContext::equal_power(3, 1.0, 0.2);
        const MuSolveState init = dft_codebook_search(c, ctx, mode);
        MuOptions o;
        o.rx = mode;
        o.I1 = 3;
        o.xi = 0.0;
        const MuSolveState s = algorithm1(c, init, ctx, o, rng);
        CHECK(trace_non_decreasing(s.trace));
        CHECK(s.min_sinr >= init.min_sinr);
        CHECK(s.min_sinr == Approx(min_sinr(c, s.theta, s.rx.W, ctx)).epsilon(1e-12));
        CHECK(s.theta.is_unit_modulus());
        for (const MuStepRecord &r : s.steps)
        {
            CHECK(r.accepted == (r.candidate >= r.before));
            if (r.block != "W")
                CHECK(r.candidate <= r.delta_star + r.eps);
        }
    }
}

TEST_CASE("Algorithm 1 handles a single-IRS channel set")
{
    Rng rng(7);
    const ChannelSet b = ChannelSet::from_cascaded({CMat(4, 0), CMat(4, 0)}, {crandn(4, 6, rng), crandn(4, 6, rng)});
    const SinrContext ctx = SinrContext::equal_power(2, 1.0, 0.5);
    const MuSolveState s = algorithm1(b, dft_codebook_search(b, ctx, RxMode::MMSE), ctx, MuOptions{}, rng);
    CHECK(trace_non_decreasing(s.trace));
    for (const MuStepRecord &r : s.steps)
        CHECK(r.block != "theta1");
}

TEST_CASE("Multi-start keeps the best run")
{
    Rng rng(8);
    const ChannelSet c = random_set(2, 2, 2, 2, rng);
    const SinrContext ctx = SinrContext::equal_power(2, 1.0, 0.5);
    MuOptions o;
    o.I1 = 2;
    const MultiStartResult r = algorithm1_multistart(c, ctx, o, rng, 3);
    REQUIRE(r.runs.size() == 4 + 3);
    for (const MuSolveState &s : r.runs)
        CHECK(r.best.min_sinr >= s.min_sinr);
    CHECK(r.best.min_sinr == r.runs[r.best_start].min_sinr);
}

TEST_CASE("Trace monotonicity helper")
{
    CHECK(trace_non_decreasing({1.0, 1.0, 2.0}));
    CHECK_FALSE(trace_non_decreasing({1.0, 0.999, 2.0}));
    CHECK(trace_non_decreasing({1.0, 0.999, 2.0}, 0.01));
    CHECK(trace_non_decreasing({}));
}
