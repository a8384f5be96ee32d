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

#include "irsbf/sdp_ipm.hpp"

#include <cmath>

namespace irsbf
{
    void MarginProblem::validate() const
    {
        if (A.empty())
            throw std::invalid_argument("MarginProblem: at least one row is required.");
        if (c.n_elem != A.size())
            throw std::invalid_argument("MarginProblem: one offset per row is required.");
        const uword n = A.front().n_rows;
        if (n < 1)
            throw std::invalid_argument("MarginProblem: empty matrix variable.");
        for (const CMat &Ak : A)
        {
            if (Ak.n_rows != n || Ak.n_cols != n)
                throw std::invalid_argument("MarginProblem: all rows must be n x n.");
            if (!Ak.is_finite())
                throw std::domain_error("MarginProblem: non-finite coefficients.");
            const double nrm = arma::norm(Ak, "fro");
            if (arma::norm(Ak - Ak.t(), "fro") > 1e-10 * std::max(nrm, 1e-300) && nrm > 0.0)
                throw std::invalid_argument("MarginProblem: row matrices must be Hermitian.");
        }
        if (!c.is_finite())
            throw std::domain_error("MarginProblem: non-finite offsets.");
    }

    arma::vec MarginProblem::margins(const CMat &Psi) const
    {
        arma::vec out(A.size());
        for (uword k = 0; k < A.size(); ++k)
            out(k) = std::real(arma::accu(A[k] % Psi.st())) - c(k);
        return out;
    }

    const char *to_string(IpmStatus s)
    {
        switch (s)
        {
        case IpmStatus::Converged:
            return "converged";
        case IpmStatus::StoppedAbove:
            return "stopped-above";
        case IpmStatus::StoppedBelow:
            return "stopped-below";
        case IpmStatus::Stalled:
            return "stalled";
        case IpmStatus::IterationCap:
            return "iteration-cap";
        }
        return "unknown";
    }

    arma::mat real_embedding(const CMat &A)
    {
        const arma::mat re = arma::real(A), im = arma::imag(A);
        return arma::join_cols(arma::join_rows(re, -im), arma::join_rows(im, re));
    }

    CMat complex_from_embedding(const arma::mat &X)
    {
        const uword n = X.n_rows / 2;
        const arma::mat X11 = X.submat(0, 0, n - 1, n - 1), X12 = X.submat(0, n, n - 1, 2 * n - 1);
        const arma::mat X21 = X.submat(n, 0, 2 * n - 1, n - 1), X22 = X.submat(n, n, 2 * n - 1, 2 * n - 1);
        return CMat(0.5 * (X11 + X22), 0.5 * (X21 - X12));
    }

    double margin_upper_bound(const MarginProblem &prob, const arma::vec &lambda, const arma::vec &beta)
    {
        arma::vec l = arma::clamp(lambda, 0.0, arma::datum::inf);
        const double sum = arma::accu(l);
        if (!(sum > 0.0) || !std::isfinite(sum))
            return arma::datum::inf;
        l /= sum;
        const uword n = prob.dim();
        CMat S(n, n, arma::fill::zeros);
        for (uword k = 0; k < prob.A.size(); ++k)
            S += l(k) * prob.A[k];
        S.diag() -= arma::conv_to<CVec>::from(beta);
        S = 0.5 * (S + S.t());
        arma::vec ev;
        if (!arma::eig_sym(ev, S))
            return arma::datum::inf;
        return arma::accu(beta) + double(n) * ev.max() - arma::dot(l, prob.c);
    }

    namespace
    {
        // Constraint layout: rows 0..n-1 are <E_a, X> = 2 with E_a = e_a e_a' + e_{a+n} e_{a+n}',
        // rows n..n+K-1 are <At_k, X> - z_k - s = c_k + shift. LP variables are (z_1..z_K, s).
        struct Embedded
        {
            uword n = 0, p = 0, K = 0, m = 0;
            std::vector<arma::mat> At;

            arma::vec op(const arma::mat &X) const
            {
                arma::vec r(m);
                for (uword a = 0; a < n; ++a)
                    r(a) = X(a, a) + X(a + n, a + n);
                for (uword k = 0; k < K; ++k)
                    r(n + k) = arma::accu(At[k] % X);
                return r;
            }

            arma::mat adj(const arma::vec &y) const
            {
                arma::mat S(p, p, arma::fill::zeros);
                for (uword k = 0; k < K; ++k)
                    S += y(n + k) * At[k];
                for (uword a = 0; a < n; ++a)
                {
                    S(a, a) += y(a);
                    S(a + n, a + n) += y(a);
                }
                return S;
            }

            arma::vec lp_op(const arma::vec &x) const
            {
                arma::vec r(m, arma::fill::zeros);
                for (uword k = 0; k < K; ++k)
                    r(n + k) = -x(k) - x(K);
                return r;
            }

            arma::vec lp_adj(const arma::vec &y) const
            {
                arma::vec r(K + 1);
                double s = 0.0;
                for (uword k = 0; k < K; ++k)
                {
                    r(k) = -y(n + k);
                    s += y(n + k);
                }
                r(K) = -s;
                return r;
            }
        };

        double psd_step(const arma::mat &X, const arma::mat &dX)
        {
            arma::mat L;
            if (!arma::chol(L, X, "lower"))
                return 0.0;
            const arma::mat Li = arma::inv(arma::trimatl(L));
            arma::mat S = Li * dX * Li.t();
            S = 0.5 * (S + S.t());
            arma::vec ev;
            if (!arma::eig_sym(ev, S))
                return 0.0;
            return ev.min() >= 0.0 ? arma::datum::inf : -1.0 / ev.min();
        }

        double lp_step(const arma::vec &x, const arma::vec &dx)
        {
            double a = arma::datum::inf;
            for (uword i = 0; i < x.n_elem; ++i)
                if (dx(i) < 0.0)
                    a = std::min(a, -x(i) / dx(i));
            return a;
        }

        bool normalized_psi(const arma::mat &X, CMat &Psi)
        {
            Psi = complex_from_embedding(X);
            const arma::vec d = arma::real(Psi.diag());
            if (!(d.min() > 0.0) || !d.is_finite())
                return false;
            const CVec s = arma::conv_to<CVec>::from(1.0 / arma::sqrt(d));
            Psi = arma::diagmat(s) * Psi * arma::diagmat(s);
            Psi = 0.5 * (Psi + Psi.t());
            Psi.diag().ones();
            return true;
        }
    }

    IpmResult solve_max_min_margin(const MarginProblem &prob, const IpmOptions &opt)
    {
        prob.validate();
        Embedded e;
        e.n = prob.dim();
        e.p = 2 * e.n;
        e.K = prob.A.size();
        e.m = e.n + e.K;
        for (const CMat &Ak : prob.A)
            e.At.push_back(0.5 * real_embedding(Ak));
        const uword n = e.n, K = e.K, nl = K + 1;

        // Margins at Psi = I fix the shift that keeps the epigraph variable s positive.
        arma::vec r0(K);
        for (uword k = 0; k < K; ++k)
            r0(k) = std::real(arma::trace(prob.A[k])) - prob.c(k);
        const double shift = r0.min() - 2.0;

        arma::vec b(e.m);
        b.head(n).fill(2.0);
        b.tail(K) = prob.c + shift;
        arma::vec cl(nl, arma::fill::zeros);
        cl(K) = -1.0;

        arma::mat X(e.p, e.p, arma::fill::eye);
        arma::vec xl(nl);
        xl.head(K) = r0 - r0.min() + 1.0;
        xl(K) = 1.0;

        arma::vec y(e.m, arma::fill::zeros);
        y.tail(K).fill(2.0 / double(K));
        {
            arma::mat S(e.p, e.p, arma::fill::zeros);
            for (uword k = 0; k < K; ++k)
                S += y(n + k) * e.At[k];
            y.head(n).fill(-(arma::eig_sym(S).max() + 1.0));
        }
        arma::mat Z = -e.adj(y);
        arma::vec zl = cl - e.lp_adj(y);

        IpmResult res;
        res.lower = -arma::datum::inf;
        res.upper = arma::datum::inf;

        auto track = [&]()
        {
            CMat Psi;
            if (normalized_psi(X, Psi))
            {
                const arma::vec mg = prob.margins(Psi);
                if (mg.min() > res.lower)
                {
                    res.lower = mg.min();
                    res.margins = mg;
                    res.Psi = Psi;
                }
            }
            const arma::vec yk = y.tail(K);
            const double Y = arma::accu(arma::clamp(yk, 0.0, arma::datum::inf));
            if (Y > 0.0)
                res.upper = std::min(res.upper, margin_upper_bound(prob, yk, -2.0 * y.head(n) / Y));
        };

        for (unsigned it = 0;; ++it)
        {
            res.iterations = it;
            track();
            if (res.lower >= opt.stop_above)
            {
                res.status = IpmStatus::StoppedAbove;
                return res;
            }
            if (res.upper < opt.stop_below)
            {
                res.status = IpmStatus::StoppedBelow;
                return res;
            }
            if (res.upper - res.lower <= opt.tol * (1.0 + std::abs(res.lower)))
            {
                res.status = IpmStatus::Converged;
                return res;
            }
            if (it >= opt.max_iter)
            {
                res.status = IpmStatus::IterationCap;
                return res;
            }

            const double mu = (arma::accu(X % Z) + arma::dot(xl, zl)) / double(e.p + nl);
            arma::mat Zi;
            if (!arma::inv_sympd(Zi, 0.5 * (Z + Z.t())))
            {
                res.status = IpmStatus::Stalled;
                return res;
            }
            Zi = 0.5 * (Zi + Zi.t());

            const arma::vec rp = b - e.op(X) - e.lp_op(xl);
            const arma::mat Rd = -e.adj(y) - Z;
            const arma::vec rdl = cl - e.lp_adj(y) - zl;
            const arma::vec D = xl / zl;

            // Schur complement of the HKM system.
            arma::mat M(e.m, e.m, arma::fill::zeros);
            const arma::mat P = X % Zi;
            for (uword a = 0; a < n; ++a)
                for (uword c = 0; c < n; ++c)
                    M(a, c) = P(a, c) + P(a, c + n) + P(a + n, c) + P(a + n, c + n);
            std::vector<arma::mat> T(K);
            for (uword k = 0; k < K; ++k)
            {
                T[k] = X * e.At[k] * Zi;
                for (uword a = 0; a < n; ++a)
                    M(a, n + k) = M(n + k, a) = T[k](a, a) + T[k](a + n, a + n);
            }
            for (uword k = 0; k < K; ++k)
                for (uword l = 0; l < K; ++l)
                    M(n + k, n + l) = arma::accu(e.At[k] % T[l]) + D(K) + (k == l ? D(k) : 0.0);
            M = 0.5 * (M + M.t());
            arma::mat R;
            if (!arma::chol(R, M))
            {
                res.status = IpmStatus::Stalled;
                return res;
            }

            const arma::vec base_rhs = rp + e.op(X * Rd * Zi) + e.lp_op(D % rdl);
            auto direction = [&](const arma::mat &G, const arma::vec &Gl, arma::mat &dX, arma::vec &dy, arma::mat &dZ,
                                 arma::vec &dxl, arma::vec &dzl)
            {
                const arma::vec rhs = base_rhs - e.op(G) - e.lp_op(Gl);
                dy = arma::solve(arma::trimatu(R), arma::solve(arma::trimatl(R.t()), rhs));
                dZ = Rd - e.adj(dy);
                dzl = rdl - e.lp_adj(dy);
                dX = G - X * dZ * Zi;
                dX = 0.5 * (dX + dX.t());
                dxl = Gl - D % dzl;
            };

            arma::mat dXa, dZa, dX, dZ;
            arma::vec dya, dxla, dzla, dy, dxl, dzl;
            direction(-X, -xl, dXa, dya, dZa, dxla, dzla);
            const double ap_a = std::min(1.0, std::min(psd_step(X, dXa), lp_step(xl, dxla)));
            const double ad_a = std::min(1.0, std::min(psd_step(Z, dZa), lp_step(zl, dzla)));
            const double mu_aff = (arma::accu((X + ap_a * dXa) % (Z + ad_a * dZa)) +
                                   arma::dot(xl + ap_a * dxla, zl + ad_a * dzla)) /
                                  double(e.p + nl);
            const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

            const arma::mat G = sigma * mu * Zi - X - dXa * dZa * Zi;
            const arma::vec Gl = (sigma * mu - xl % zl - dxla % dzla) / zl;
            direction(G, Gl, dX, dy, dZ, dxl, dzl);

            const double ap = std::min(1.0, opt.step_factor * std::min(psd_step(X, dX), lp_step(xl, dxl)));
            const double ad = std::min(1.0, opt.step_factor * std::min(psd_step(Z, dZ), lp_step(zl, dzl)));
            if (!(ap > 1e-12) && !(ad > 1e-12))
            {
                res.status = IpmStatus::Stalled;
                return res;
            }
            X += ap * dX;
            X = 0.5 * (X + X.t());
            xl += ap * dxl;
            y += ad * dy;
            Z += ad * dZ;
            Z = 0.5 * (Z + Z.t());
            zl += ad * dzl;
        }
    }
}
