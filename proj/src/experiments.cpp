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

#include "irsbf/experiments.hpp"
#include "irsbf/su_opt.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <thread>

namespace irsbf
{
    const std::vector<ExperimentInfo> &experiment_registry()
    {
        static const std::vector<ExperimentInfo> reg = {
            {"fig4-rate-vs-power", "P (dBm)",
             "single user: AO from IB and DFT starts, DFT search, SDR and the single-IRS optimum versus transmit power",
             {0, 5, 10, 15, 20, 25, 30}},
            {"fig5-rate-vs-M1-split", "M1",
             "single user: rate versus the number of IRS 1 subsurfaces at a fixed total, against the single-IRS optimum",
             {4, 8, 12, 16, 20, 24, 28}},
            {"fig6-rate-vs-totalM", "M",
             "single user: double- and single-IRS rates versus M = 2 M1 = 2 M2 for each far-link Rician factor",
             {16, 32, 64, 128}},
            {"fig7-mu-alg", "P (dBm)", "multi-user: Algorithm 1 against its DFT codebook start, per receiver",
             {10, 15, 20, 25, 30}},
            {"fig8-mu-vs-power", "P (dBm)", "multi-user: double-IRS against the single-IRS baseline versus power",
             {10, 15, 20, 25, 30}},
            {"fig9-rate-vs-K", "K", "multi-user: max-min rate versus the number of users", {1, 2, 3, 4, 5, 6}},
            {"prop1-property", "far-link kappa (dB)",
             "single user: AO from the single-IRS start never loses to the single-IRS optimum", {-10, 0, 10}},
            {"prop2-rank", "K", "multi-user: numerical ranks of H, H-bar, Hd and Hs (value column holds the mean rank)",
             {5}},
            {"oracle-suite", "M'",
             "closed-form phase updates against an exhaustive phase grid (value column holds closed/grid objective)",
             {1, 2, 3}},
        };
        return reg;
    }

    const ExperimentInfo &experiment_info(const std::string &id)
    {
        for (const auto &e : experiment_registry())
            if (e.id == id)
                return e;
        throw std::invalid_argument("unknown experiment '" + id + "'");
    }

    SystemScenario experiment_base_scenario(const std::string &id)
    {
        (void)experiment_info(id);
        if (id == "fig7-mu-alg" || id == "fig8-mu-vs-power" || id == "prop2-rank")
            return multi_user_defaults();
        if (id == "fig9-rate-vs-K")
        {
            SystemScenario s = multi_user_defaults();
            s.powers = {dbm_to_watt(30.0)};
            return s;
        }
        SystemScenario s = single_user_defaults();
        if (id == "oracle-suite")
        {
            s.n_antennas = 2;
            s.m1 = s.m2 = 2;
        }
        return s;
    }

    static bool is_id(const ExperimentSpec &s, const char *id) { return s.id == id; }

    static uword as_count(double x, const char *what)
    {
        if (!(x >= 0.0) || x != std::floor(x) || x > 1e9)
            throw std::invalid_argument(std::string("sweep value for ") + what + " must be a non-negative integer");
        return uword(x);
    }

    static void set_far_kappa(SystemScenario &s, double kappa_db)
    {
        s.user_irs2.kappa = s.inter_irs.kappa = s.irs1_bs.kappa = db_to_linear(kappa_db);
    }

    SystemScenario point_scenario(const ExperimentSpec &spec, double x)
    {
        SystemScenario s = spec.scenario;
        const std::string &id = spec.id;
        if (id == "fig4-rate-vs-power" || id == "fig7-mu-alg" || id == "fig8-mu-vs-power")
            s.powers = {dbm_to_watt(x)};
        else if (id == "fig5-rate-vs-M1-split")
        {
            const uword total = spec.scenario.m1 + spec.scenario.m2;
            const uword m1 = as_count(x, "M1");
            if (m1 < 1 || m1 >= total)
                throw std::invalid_argument("M1 must lie in [1, M - 1] with M = " + std::to_string(total));
            s.m1 = m1;
            s.m2 = total - m1;
        }
        else if (id == "fig6-rate-vs-totalM")
        {
            const uword m = as_count(x, "M");
            if (m < 2 || m % 2 != 0)
                throw std::invalid_argument("M must be even and >= 2");
            s.m1 = s.m2 = m / 2;
        }
        else if (id == "fig9-rate-vs-K" || id == "prop2-rank")
        {
            s.n_users = as_count(x, "K");
            if (s.n_users < 1)
                throw std::invalid_argument("K must be >= 1");
        }
        else if (id == "prop1-property")
            set_far_kappa(s, x);
        else if (id == "oracle-suite")
        {
            s.m1 = s.m2 = as_count(x, "M'");
            if (s.m1 < 1)
                throw std::invalid_argument("M' must be >= 1");
        }
        s.validate();
        return s;
    }

    static std::vector<RxMode> rx_modes(const ExperimentSpec &spec)
    {
        if (!spec.options.rx.empty())
            return spec.options.rx;
        if (is_id(spec, "fig8-mu-vs-power"))
            return {RxMode::MMSE};
        return {RxMode::MMSE, RxMode::ZF};
    }

    static std::string fmt(double v)
    {
        if (std::isnan(v))
            return "nan";
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.10g", v);
        return buf;
    }

    static std::string kappa_tag(double kappa_db) { return "k" + fmt(kappa_db) + "dB"; }

    std::vector<std::string> experiment_methods(const ExperimentSpec &spec)
    {
        const std::string &id = spec.id;
        if (id == "fig4-rate-vs-power")
            return {"ao-ib", "ib-init", "ao-dft", "dft", "sdr", "single-irs"};
        if (id == "fig5-rate-vs-M1-split")
            return {"ao-ib", "ib-init", "single-irs"};
        if (id == "fig6-rate-vs-totalM")
        {
            std::vector<std::string> out;
            for (double k : spec.options.kappa_db)
            {
                out.push_back("double-irs_" + kappa_tag(k));
                out.push_back("single-irs_" + kappa_tag(k));
            }
            return out;
        }
        if (id == "fig7-mu-alg")
        {
            std::vector<std::string> out;
            for (RxMode m : rx_modes(spec))
            {
                out.push_back(std::string("alg1-") + to_string(m));
                out.push_back(std::string("dft-") + to_string(m));
            }
            return out;
        }
        if (id == "fig8-mu-vs-power" || id == "fig9-rate-vs-K")
        {
            std::vector<std::string> out;
            for (RxMode m : rx_modes(spec))
            {
                out.push_back(std::string("double-") + to_string(m));
                out.push_back(std::string("single-") + to_string(m));
            }
            return out;
        }
        if (id == "prop1-property")
            return {"double-ao-ib", "single-irs"};
        if (id == "prop2-rank")
            return {"rank-h", "rank-h-bar", "rank-hd", "rank-hs"};
        if (id == "oracle-suite")
            return {"theta2-ratio", "theta1-ratio"};
        throw std::invalid_argument("unknown experiment '" + id + "'");
    }

    void ExperimentSpec::validate() const
    {
        (void)experiment_info(id);
        if (sweep.empty())
            throw std::invalid_argument("sweep must be non-empty");
        if (draws < 1)
            throw std::invalid_argument("draws must be >= 1");
        const ExperimentOptions &o = options;
        if (o.I0 < 1 || o.I1 < 1 || o.restarts < 1 || o.sdr_rounds < 1 || o.candidates < 1)
            throw std::invalid_argument("iteration, restart and candidate counts must be >= 1");
        if (!(o.eps > 0.0) || !(o.xi >= 0.0) || !(o.su_tol >= 0.0))
            throw std::invalid_argument("eps must be > 0, xi and su_tol >= 0");
        if (id == "fig6-rate-vs-totalM" && o.kappa_db.empty())
            throw std::invalid_argument("kappa_db must be non-empty");
        for (RxMode m : o.rx)
            if (m == RxMode::Fixed)
                throw std::invalid_argument("rx must be zf, mmse or mrc");
        if (o.grid_points < 2)
            throw std::invalid_argument("grid_points must be >= 2");
        for (double x : sweep)
        {
            const SystemScenario s = point_scenario(*this, x);
            if (id == "oracle-suite" && std::pow(double(o.grid_points), double(s.m1)) > 2e7)
                throw std::invalid_argument("oracle-suite grid too large for M' = " + fmt(x));
        }
    }

    // ---------------------------------------------------------------------------------------------
    // Spec parsing

    static RxMode rx_from(const JsonDocument &doc, const std::string &p)
    {
        try
        {
            return parse_rx_mode(doc.string(p));
        }
        catch (const ConfigError &)
        {
            throw;
        }
        catch (const std::exception &e)
        {
            doc.fail(p, e.what());
        }
    }

    static unsigned uint_field(const JsonDocument &doc, const std::string &p)
    {
        const std::uint64_t v = doc.unsigned_integer(p);
        if (v > std::numeric_limits<unsigned>::max())
            doc.fail(p, "value too large");
        return unsigned(v);
    }

    ExperimentSpec parse_experiment_spec(const JsonDocument &doc)
    {
        doc.only_keys("", {"experiment", "scenario", "sweep", "draws", "seed", "output", "options"});
        if (!doc.has("/experiment"))
            doc.fail("", "missing key 'experiment'");
        ExperimentSpec spec;
        spec.id = doc.string("/experiment");
        try
        {
            (void)experiment_info(spec.id);
        }
        catch (const std::exception &e)
        {
            doc.fail("/experiment", e.what());
        }
        spec.scenario = experiment_base_scenario(spec.id);
        if (doc.has("/scenario"))
            apply_scenario_json(spec.scenario, doc, "/scenario");
        if (doc.has("/sweep"))
        {
            if (!doc.at("/sweep").is_array())
                doc.fail("/sweep", "expected an array of numbers");
            spec.sweep = doc.numbers("/sweep");
            if (spec.sweep.empty())
                doc.fail("/sweep", "sweep must be non-empty");
        }
        else
            spec.sweep = experiment_info(spec.id).default_sweep;
        if (doc.has("/draws"))
        {
            spec.draws = uint_field(doc, "/draws");
            if (spec.draws < 1)
                doc.fail("/draws", "draws must be >= 1");
        }
        if (doc.has("/seed"))
            spec.seed = doc.unsigned_integer("/seed");
        if (doc.has("/output"))
            spec.output = doc.string("/output");

        if (doc.has("/options"))
        {
            const std::string o = "/options";
            doc.only_keys(o, {"rx", "kappa_db", "I0", "su_tol", "restarts", "sdr_rounds", "I1", "xi", "eps",
                              "candidates", "random_starts", "grid_points"});
            ExperimentOptions &op = spec.options;
            if (doc.has(o + "/rx"))
            {
                const json &v = doc.at(o + "/rx");
                if (v.is_string())
                    op.rx = {rx_from(doc, o + "/rx")};
                else if (v.is_array())
                    for (size_t i = 0; i < v.size(); ++i)
                        op.rx.push_back(rx_from(doc, o + "/rx/" + std::to_string(i)));
                else
                    doc.fail(o + "/rx", "expected a receiver name or an array of names");
            }
            if (doc.has(o + "/kappa_db"))
                op.kappa_db = doc.numbers(o + "/kappa_db");
            if (doc.has(o + "/I0"))
                op.I0 = uint_field(doc, o + "/I0");
            if (doc.has(o + "/su_tol"))
                op.su_tol = doc.number(o + "/su_tol");
            if (doc.has(o + "/restarts"))
                op.restarts = uint_field(doc, o + "/restarts");
            if (doc.has(o + "/sdr_rounds"))
                op.sdr_rounds = uint_field(doc, o + "/sdr_rounds");
            if (doc.has(o + "/I1"))
                op.I1 = uint_field(doc, o + "/I1");
            if (doc.has(o + "/xi"))
                op.xi = doc.number(o + "/xi");
            if (doc.has(o + "/eps"))
                op.eps = doc.number(o + "/eps");
            if (doc.has(o + "/candidates"))
                op.candidates = uint_field(doc, o + "/candidates");
            if (doc.has(o + "/random_starts"))
                op.random_starts = uint_field(doc, o + "/random_starts");
            if (doc.has(o + "/grid_points"))
                op.grid_points = uint_field(doc, o + "/grid_points");
        }

        for (size_t i = 0; i < spec.sweep.size() && doc.has("/sweep"); ++i)
        {
            try
            {
                (void)point_scenario(spec, spec.sweep[i]);
            }
            catch (const std::exception &e)
            {
                doc.fail("/sweep/" + std::to_string(i), e.what());
            }
        }
        try
        {
            spec.validate();
        }
        catch (const ConfigError &)
        {
            throw;
        }
        catch (const std::exception &e)
        {
            doc.fail(doc.has("/sweep") ? "/sweep" : "", e.what());
        }
        return spec;
    }

    ExperimentSpec load_experiment_spec(const std::string &path)
    {
        return parse_experiment_spec(load_json_document(path));
    }

    // ---------------------------------------------------------------------------------------------
    // Per-draw evaluation

    namespace
    {
        struct DrawValue
        {
            double value = std::numeric_limits<double>::quiet_NaN();
            bool ok = false;
            std::map<std::string, double> counters;
        };

        using DrawOutcome = std::vector<DrawValue>;

        double rate(double sinr) { return std::log2(1.0 + sinr); }

        struct DrawContext
        {
            const ExperimentSpec &spec;
            SystemScenario s;
            unsigned point;
            unsigned draw;

            Rng channel_rng() const { return Rng(mix_seed(spec.seed, draw)); }
            Rng solver_rng(unsigned stream) const { return Rng(mix_seed(mix_seed(spec.seed, draw, point + 1), stream)); }
        };

        template <class F>
        void guarded(DrawValue &v, F &&f)
        {
            try
            {
                f(v);
                v.ok = std::isfinite(v.value);
            }
            catch (const std::exception &)
            {
                v.ok = false;
                v.value = std::numeric_limits<double>::quiet_NaN();
            }
        }

        unsigned su_trace_violations(const std::vector<double> &trace)
        {
            unsigned n = 0;
            for (size_t i = 1; i < trace.size(); ++i)
                if (trace[i] - trace[i - 1] < -1e-10 * std::max(1.0, std::abs(trace[i - 1])))
                    ++n;
            return n;
        }

        // Single-IRS optimum, IB start and AO for one single-user realization.
        struct SuPipeline
        {
            SingleIrsSolution single;
            SuInit init;
            SuSolveState ao;
        };

        SuPipeline run_su_pipeline(const ChannelSet &chs, const SystemScenario &s, const ExperimentOptions &o, Rng &rng)
        {
            const double P = s.power_vector()(0);
            SuPipeline r;
            const ChannelSet baseline = build_single_irs_baseline_A1(chs);
            r.single = single_irs_opt(baseline, P, s.noise, rng, o.I0, o.su_tol, o.restarts);
            r.init = init_from_single_irs(chs, r.single, P, s.noise);
            r.ao = ao_single_user(chs, r.init.state, P, s.noise, o.I0, o.su_tol);
            return r;
        }

        DrawOutcome eval_su(const DrawContext &c, const std::vector<std::string> &methods)
        {
            const ExperimentOptions &o = c.spec.options;
            DrawOutcome out(methods.size());
            const double P = c.s.power_vector()(0);
            Rng crng = c.channel_rng();
            const ChannelSet chs = build_double_irs_scenario(c.s, crng);

            Rng rng = c.solver_rng(0);
            SuPipeline pipe;
            bool pipe_ok = true;
            try
            {
                pipe = run_su_pipeline(chs, c.s, o, rng);
            }
            catch (const std::exception &)
            {
                pipe_ok = false;
            }

            for (size_t i = 0; i < methods.size(); ++i)
            {
                const std::string &m = methods[i];
                guarded(out[i], [&](DrawValue &v)
                        {
                    if (m == "ao-ib" || m == "double-ao-ib")
                    {
                        if (!pipe_ok)
                            throw std::runtime_error("pipeline failed");
                        v.value = rate(pipe.ao.snr);
                        v.counters["trace_violations"] = su_trace_violations(pipe.ao.trace);
                        v.counters["below_single_irs"] = pipe.ao.snr < pipe.single.snr * (1.0 - 1e-9) ? 1.0 : 0.0;
                    }
                    else if (m == "ib-init")
                    {
                        if (!pipe_ok)
                            throw std::runtime_error("pipeline failed");
                        v.value = rate(pipe.init.state.snr);
                    }
                    else if (m == "single-irs")
                    {
                        if (!pipe_ok)
                            throw std::runtime_error("pipeline failed");
                        v.value = rate(pipe.single.snr);
                    }
                    else if (m == "dft" || m == "ao-dft")
                    {
                        const MuSolveState d = dft_codebook_search(chs, SinrContext::equal_power(1, P, c.s.noise), RxMode::MRC);
                        if (m == "dft")
                            v.value = rate(d.min_sinr);
                        else
                        {
                            SuSolveState st;
                            st.theta = d.theta;
                            st.w = mrc_receive(chs, d.theta);
                            const SuSolveState a = ao_single_user(chs, st, P, c.s.noise, o.I0, o.su_tol);
                            v.value = rate(a.snr);
                            v.counters["trace_violations"] = su_trace_violations(a.trace);
                        }
                    }
                    else if (m == "sdr")
                    {
                        if (!pipe_ok)
                            throw std::runtime_error("pipeline failed");
                        Rng srng = c.solver_rng(1);
                        SuSdrOptions so;
                        so.rounds = o.sdr_rounds;
                        so.candidates = o.candidates;
                        const SuSdrResult r = sdr_benchmark_su(chs, pipe.init.state.theta, P, c.s.noise, srng, so);
                        v.value = rate(r.snr);
                        v.counters["not_converged"] = r.ok ? 0.0 : 1.0;
                    }
                    else
                        throw std::logic_error("unknown method " + m); });
            }
            return out;
        }

        DrawOutcome eval_fig6(const DrawContext &c, const std::vector<std::string> &methods)
        {
            DrawOutcome out(methods.size());
            const auto &ks = c.spec.options.kappa_db;
            for (size_t j = 0; j < ks.size(); ++j)
            {
                SystemScenario s = c.s;
                set_far_kappa(s, ks[j]);
                DrawValue &dv = out[2 * j], &sv = out[2 * j + 1];
                try
                {
                    Rng crng = c.channel_rng();
                    const ChannelSet chs = build_double_irs_scenario(s, crng);
                    Rng rng = c.solver_rng(unsigned(j));
                    const SuPipeline pipe = run_su_pipeline(chs, s, c.spec.options, rng);
                    dv.value = rate(pipe.ao.snr);
                    dv.ok = std::isfinite(dv.value);
                    dv.counters["trace_violations"] = su_trace_violations(pipe.ao.trace);
                    sv.value = rate(pipe.single.snr);
                    sv.ok = std::isfinite(sv.value);
                }
                catch (const std::exception &)
                {
                    dv = DrawValue{};
                    sv = DrawValue{};
                }
            }
            return out;
        }

        MuOptions mu_options(const ExperimentOptions &o, RxMode rx)
        {
            MuOptions m;
            m.I1 = o.I1;
            m.xi = o.xi;
            m.eps = o.eps;
            m.candidates = o.candidates;
            m.rx = rx;
            return m;
        }

        void record_mu_run(DrawValue &v, const MuSolveState &st)
        {
            v.value = rate(st.min_sinr);
            v.counters["min_sinr"] = st.min_sinr;
            v.counters["zf_fallback"] = st.rx.zf_fallback ? 1.0 : 0.0;
            v.counters["trace_violations"] = trace_non_decreasing(st.trace) ? 0.0 : 1.0;
            double fails = 0.0, above = 0.0;
            for (const MuStepRecord &r : st.steps)
            {
                fails += r.failures;
                if (r.block != "W" && !r.saturated && r.candidate > r.delta_star + r.eps)
                    above += 1.0;
            }
            v.counters["bisection_failures"] = fails;
            v.counters["candidate_above_bound"] = above;
        }

        MuSolveState run_alg1(const ChannelSet &chs, const SinrContext &ctx, const MuSolveState &start,
                              const ExperimentOptions &o, RxMode rx, Rng &rng)
        {
            const MuOptions mo = mu_options(o, rx);
            if (o.random_starts > 0)
                return algorithm1_multistart(chs, ctx, mo, rng, o.random_starts).best;
            return algorithm1(chs, start, ctx, mo, rng);
        }

        DrawOutcome eval_mu(const DrawContext &c, const std::vector<std::string> &methods)
        {
            const ExperimentOptions &o = c.spec.options;
            const std::vector<RxMode> modes = rx_modes(c.spec);
            DrawOutcome out(methods.size());
            Rng crng = c.channel_rng();
            const ChannelSet chs = build_double_irs_scenario(c.s, crng);
            const SinrContext ctx{c.s.power_vector(), c.s.noise};
            const bool fig7 = c.spec.id == "fig7-mu-alg";

            ChannelSet single;
            bool single_ok = !fig7;
            if (!fig7)
            {
                try
                {
                    single = build_single_irs_baseline_A2(c.s, matched_baseline_ranks(chs), crng);
                }
                catch (const std::exception &)
                {
                    single_ok = false;
                }
            }

            for (size_t j = 0; j < modes.size(); ++j)
            {
                const RxMode rx = modes[j];
                DrawValue &a = out[2 * j], &b = out[2 * j + 1];
                guarded(a, [&](DrawValue &v)
                        {
                    const MuSolveState d = dft_codebook_search(chs, ctx, rx);
                    if (fig7)
                    {
                        b.value = rate(d.min_sinr);
                        b.ok = std::isfinite(b.value);
                        b.counters["min_sinr"] = d.min_sinr;
                        b.counters["zf_fallback"] = d.rx.zf_fallback ? 1.0 : 0.0;
                    }
                    Rng rng = c.solver_rng(unsigned(2 * j));
                    record_mu_run(v, run_alg1(chs, ctx, d, o, rx, rng)); });
                if (fig7)
                    continue;
                guarded(b, [&](DrawValue &v)
                        {
                    if (!single_ok)
                        throw std::runtime_error("baseline construction failed");
                    const MuSolveState d = dft_codebook_search(single, ctx, rx);
                    Rng rng = c.solver_rng(unsigned(2 * j + 1));
                    record_mu_run(v, run_alg1(single, ctx, d, o, rx, rng)); });
            }
            return out;
        }

        DrawOutcome eval_prop2(const DrawContext &c, const std::vector<std::string> &methods)
        {
            DrawOutcome out(methods.size());
            try
            {
                Rng crng = c.channel_rng();
                const ChannelSet chs = build_double_irs_scenario(c.s, crng);
                const ChannelSet single = build_single_irs_baseline_A2(c.s, matched_baseline_ranks(chs), crng);
                Rng rng = c.solver_rng(0);
                const ReflectPattern pat{random_phases(chs.m1, rng), random_phases(chs.m2, rng)};
                const RankReport r = rank_gain_report(chs, single, pat);
                const uword bar_expected = std::min({r.rank_g_bar, r.rank_u_bar, chs.n_antennas, chs.n_users});
                const double vals[4] = {double(r.rank_h), double(r.rank_h_bar), double(r.rank_hd), double(r.rank_hs)};
                for (size_t i = 0; i < 4; ++i)
                {
                    out[i].value = vals[i];
                    out[i].ok = true;
                }
                out[0].counters["at_expected"] = r.rank_h == r.hs_additive_capped ? 1.0 : 0.0;
                out[0].counters["clipped_inequality"] = r.clipped_inequality_holds ? 1.0 : 0.0;
                out[1].counters["at_expected"] = r.rank_h_bar == bar_expected ? 1.0 : 0.0;
            }
            catch (const std::exception &)
            {
                out.assign(methods.size(), DrawValue{});
            }
            return out;
        }

        // max over a G-point phase grid of |c0 + sum_i a_i exp(j 2 pi g_i / G)|^2.
        double grid_best(const CVec &a, cx c0, unsigned G)
        {
            std::vector<cx> roots(G);
            for (unsigned g = 0; g < G; ++g)
                roots[g] = std::polar(1.0, 2.0 * kPi * g / G);
            double best = 0.0;
            std::vector<cx> partial(a.n_elem + 1);
            partial[0] = c0;
            std::vector<unsigned> idx(a.n_elem, 0);
            // Odometer enumeration with running partial sums.
            size_t depth = 0;
            for (;;)
            {
                for (; depth < a.n_elem; ++depth)
                    partial[depth + 1] = partial[depth] + a(depth) * roots[idx[depth]];
                best = std::max(best, std::norm(partial[a.n_elem]));
                size_t d = a.n_elem;
                while (d > 0 && ++idx[d - 1] == G)
                {
                    idx[d - 1] = 0;
                    --d;
                }
                if (d == 0)
                    break;
                depth = d - 1;
            }
            return best;
        }

        DrawOutcome eval_oracle(const DrawContext &c, const std::vector<std::string> &methods)
        {
            DrawOutcome out(methods.size());
            try
            {
                Rng rng = c.channel_rng();
                const uword N = c.s.n_antennas, M = c.s.m1;
                const ChannelSet chs = ChannelSet::from_links(crandn(M, 1, rng), crandn(M, 1, rng), crandn(M, M, rng),
                                                              crandn(N, M, rng), crandn(N, M, rng));
                const CVec t1 = random_phases(M, rng), t2 = random_phases(M, rng);
                CVec w = crandn(N, 1, rng);
                w /= arma::norm(w);
                const unsigned G = c.spec.options.grid_points;

                // theta2 block: h = (R2 + sum_m t1_m Q_m) theta2 + R1 t1.
                CMat A2 = chs.R2[0];
                for (uword m = 0; m < M; ++m)
                    A2 += t1(m) * chs.Q[0].slice(m);
                CVec a2(M);
                for (uword i = 0; i < M; ++i)
                    a2(i) = arma::cdot(w, A2.col(i));
                const double g2 = grid_best(a2, arma::cdot(w, chs.R1[0] * t1), G);
                const double v2 = su_objective(chs, {t1, opt_theta2_closed_form(chs, t1, w)}, w);

                // theta1 block: h = ([Q_m theta2]_m + R1) theta1 + R2 t2.
                CVec a1(M);
                for (uword m = 0; m < M; ++m)
                    a1(m) = arma::cdot(w, chs.Q[0].slice(m) * t2 + chs.R1[0].col(m));
                const double g1 = grid_best(a1, arma::cdot(w, chs.R2[0] * t2), G);
                const double v1 = su_objective(chs, {opt_theta1_closed_form(chs, t2, w), t2}, w);

                out[0].value = v2 / g2;
                out[1].value = v1 / g1;
                out[0].counters["below_grid"] = v2 < g2 * (1.0 - 1e-9) ? 1.0 : 0.0;
                out[1].counters["below_grid"] = v1 < g1 * (1.0 - 1e-9) ? 1.0 : 0.0;
                out[0].ok = std::isfinite(out[0].value);
                out[1].ok = std::isfinite(out[1].value);
            }
            catch (const std::exception &)
            {
                out.assign(methods.size(), DrawValue{});
            }
            return out;
        }

        DrawOutcome eval_draw(const DrawContext &c, const std::vector<std::string> &methods)
        {
            const std::string &id = c.spec.id;
            try
            {
                if (id == "fig4-rate-vs-power" || id == "fig5-rate-vs-M1-split" || id == "prop1-property")
                    return eval_su(c, methods);
                if (id == "fig6-rate-vs-totalM")
                    return eval_fig6(c, methods);
                if (id == "fig7-mu-alg" || id == "fig8-mu-vs-power" || id == "fig9-rate-vs-K")
                    return eval_mu(c, methods);
                if (id == "prop2-rank")
                    return eval_prop2(c, methods);
                if (id == "oracle-suite")
                    return eval_oracle(c, methods);
            }
            catch (const std::exception &)
            {
            }
            return DrawOutcome(methods.size());
        }

        PointResult reduce(double x, const std::vector<std::string> &methods, const std::vector<DrawOutcome> &draws)
        {
            PointResult p;
            p.x = x;
            for (size_t i = 0; i < methods.size(); ++i)
            {
                MethodStats st;
                st.method = methods[i];
                double sum = 0.0;
                for (const DrawOutcome &d : draws)
                {
                    const DrawValue &v = d[i];
                    st.values.push_back(v.ok ? v.value : std::numeric_limits<double>::quiet_NaN());
                    if (!v.ok)
                    {
                        ++st.failures;
                        continue;
                    }
                    ++st.draws;
                    sum += v.value;
                    for (const auto &[k, c] : v.counters)
                        st.counters[k] += c;
                }
                st.mean = st.draws > 0 ? sum / st.draws : std::numeric_limits<double>::quiet_NaN();
                double ss = 0.0;
                for (double v : st.values)
                    if (!std::isnan(v))
                        ss += (v - st.mean) * (v - st.mean);
                st.stderr_ = st.draws > 1 ? std::sqrt(ss / (st.draws - 1) / st.draws) : 0.0;
                if (st.draws == 0)
                    st.stderr_ = std::numeric_limits<double>::quiet_NaN();
                p.methods.push_back(std::move(st));
            }
            return p;
        }
    }

    const MethodStats &PointResult::at(const std::string &method) const
    {
        for (const MethodStats &m : methods)
            if (m.method == method)
                return m;
        throw std::out_of_range("no method '" + method + "' at this point");
    }

    bool ExperimentResult::passed() const
    {
        return std::all_of(assertions.begin(), assertions.end(), [](const Assertion &a)
                           { return a.passed; });
    }

    // ---------------------------------------------------------------------------------------------
    // Embedded assertions

    namespace
    {
        double counter(const MethodStats &m, const char *name)
        {
            auto it = m.counters.find(name);
            return it == m.counters.end() ? 0.0 : it->second;
        }

        void add(std::vector<Assertion> &out, std::string name, bool ok, std::string detail)
        {
            out.push_back({std::move(name), ok, std::move(detail)});
        }

        std::string at_x(double x) { return " at x=" + fmt(x); }

        const PointResult *find_point(const ExperimentResult &r, double x)
        {
            for (const PointResult &p : r.points)
                if (p.x == x)
                    return &p;
            return nullptr;
        }

        double mean_sinr(const MethodStats &m)
        {
            return m.draws > 0 ? counter(m, "min_sinr") / m.draws : std::numeric_limits<double>::quiet_NaN();
        }

        void zero_counter(std::vector<Assertion> &out, const ExperimentResult &r, const char *method_prefix,
                          const char *name, const std::string &label)
        {
            double total = 0.0;
            for (const PointResult &p : r.points)
                for (const MethodStats &m : p.methods)
                    if (m.method.rfind(method_prefix, 0) == 0)
                        total += counter(m, name);
            add(out, label, total == 0.0, std::string(name) + " = " + fmt(total));
        }

        std::vector<Assertion> assertions_for(const ExperimentResult &r)
        {
            std::vector<Assertion> out;
            const std::string &id = r.spec.id;
            if (id == "fig4-rate-vs-power")
            {
                for (const PointResult &p : r.points)
                {
                    const double ao = p.at("ao-ib").mean, ib = p.at("ib-init").mean, dft = p.at("dft").mean,
                                 sdr = p.at("sdr").mean;
                    add(out, "ao-ib >= ib-init" + at_x(p.x), ao >= ib - 1e-9, fmt(ao) + " vs " + fmt(ib));
                    add(out, "ao-ib >= dft" + at_x(p.x), ao >= dft - 1e-9, fmt(ao) + " vs " + fmt(dft));
                    add(out, "ao-ib within 0.1 of sdr or above" + at_x(p.x), ao >= sdr - 0.1, fmt(ao) + " vs " + fmt(sdr));
                }
                zero_counter(out, r, "ao-", "trace_violations", "AO traces non-decreasing");
            }
            else if (id == "fig5-rate-vs-M1-split" || id == "prop1-property")
            {
                const char *dbl = id == "prop1-property" ? "double-ao-ib" : "ao-ib";
                for (const PointResult &p : r.points)
                {
                    const double a = p.at(dbl).mean, s = p.at("single-irs").mean;
                    add(out, std::string(dbl) + " >= single-irs" + at_x(p.x), a >= s, fmt(a) + " vs " + fmt(s));
                }
                zero_counter(out, r, dbl, "below_single_irs", "no draw below the single-IRS optimum");
                zero_counter(out, r, dbl, "trace_violations", "AO traces non-decreasing");
            }
            else if (id == "fig6-rate-vs-totalM")
            {
                for (double k : r.spec.options.kappa_db)
                {
                    const std::string d = "double-irs_" + kappa_tag(k), s = "single-irs_" + kappa_tag(k);
                    for (size_t i = 0; i + 1 < r.points.size(); ++i)
                    {
                        const PointResult &a = r.points[i], &b = r.points[i + 1];
                        const double gap_a = a.at(d).mean - a.at(s).mean, gap_b = b.at(d).mean - b.at(s).mean;
                        add(out, "gap grows with M, kappa " + fmt(k) + " dB, M " + fmt(a.x) + "->" + fmt(b.x),
                            gap_b >= gap_a, fmt(gap_a) + " -> " + fmt(gap_b));
                        if (k >= 10.0 && b.x == 2.0 * a.x)
                        {
                            const double gd = b.at(d).mean - a.at(d).mean, gs = b.at(s).mean - a.at(s).mean;
                            add(out, "double-IRS doubling gain 4 +- 0.7, kappa " + fmt(k) + " dB, M " + fmt(a.x) + "->" + fmt(b.x),
                                std::abs(gd - 4.0) <= 0.7, fmt(gd) + " bits/s/Hz");
                            add(out, "single-IRS doubling gain 2 +- 0.7, kappa " + fmt(k) + " dB, M " + fmt(a.x) + "->" + fmt(b.x),
                                std::abs(gs - 2.0) <= 0.7, fmt(gs) + " bits/s/Hz");
                        }
                    }
                }
            }
            else if (id == "fig7-mu-alg")
            {
                for (RxMode m : rx_modes(r.spec))
                    for (const PointResult &p : r.points)
                    {
                        const std::string tag = to_string(m);
                        const double a = p.at("alg1-" + tag).mean, d = p.at("dft-" + tag).mean;
                        add(out, "alg1-" + tag + " >= dft-" + tag + at_x(p.x), a >= d - 1e-12, fmt(a) + " vs " + fmt(d));
                    }
                zero_counter(out, r, "alg1-", "trace_violations", "Algorithm 1 traces non-decreasing");
                zero_counter(out, r, "alg1-", "candidate_above_bound", "randomized value <= delta* + eps");
            }
            else if (id == "fig8-mu-vs-power")
            {
                const PointResult *lo = find_point(r, 20.0), *hi = find_point(r, 30.0);
                for (RxMode m : rx_modes(r.spec))
                {
                    if (m != RxMode::MMSE || !lo || !hi)
                        continue;
                    const double s = mean_sinr(hi->at("single-mmse")) / mean_sinr(lo->at("single-mmse"));
                    const double d = mean_sinr(hi->at("double-mmse")) / mean_sinr(lo->at("double-mmse"));
                    add(out, "single-IRS min-SINR saturates 20->30 dBm (ratio < 1.05)", s < 1.05, "ratio " + fmt(s));
                    add(out, "double-IRS min-SINR grows 20->30 dBm (ratio > 1.5)", d > 1.5, "ratio " + fmt(d));
                }
                zero_counter(out, r, "", "trace_violations", "Algorithm 1 traces non-decreasing");
                zero_counter(out, r, "", "candidate_above_bound", "randomized value <= delta* + eps");
            }
            else if (id == "fig9-rate-vs-K")
            {
                for (RxMode m : rx_modes(r.spec))
                {
                    const std::string tag = to_string(m);
                    const PointResult *below = nullptr, *above = nullptr;
                    for (const PointResult &p : r.points)
                    {
                        if (p.x <= 2.0 && (!below || p.x > below->x))
                            below = &p;
                        if (p.x > 2.0 && (!above || p.x < above->x))
                            above = &p;
                        if (p.x > 2.0)
                        {
                            const double d = p.at("double-" + tag).mean, s = p.at("single-" + tag).mean;
                            add(out, "double-" + tag + " > single-" + tag + at_x(p.x), d > s, fmt(d) + " vs " + fmt(s));
                        }
                    }
                    if (below && above)
                    {
                        const double a = below->at("single-" + tag).mean, b = above->at("single-" + tag).mean;
                        add(out, "single-" + tag + " drops sharply past K = 2 (K " + fmt(below->x) + "->" + fmt(above->x) + ", at most half)",
                            b <= 0.5 * a, fmt(a) + " -> " + fmt(b));
                    }
                }
                zero_counter(out, r, "", "trace_violations", "Algorithm 1 traces non-decreasing");
            }
            else if (id == "prop2-rank")
            {
                for (const PointResult &p : r.points)
                {
                    const MethodStats &h = p.at("rank-h"), &hb = p.at("rank-h-bar");
                    const double n = double(r.spec.draws);
                    const double fh = counter(h, "at_expected") / n, fb = counter(hb, "at_expected") / n;
                    add(out, "rank(H) at its additive bound on >= 95% of draws" + at_x(p.x), fh >= 0.95, fmt(fh));
                    add(out, "rank(H-bar) at min(rank G-bar, K) on >= 95% of draws" + at_x(p.x), fb >= 0.95, fmt(fb));
                }
            }
            else if (id == "oracle-suite")
                zero_counter(out, r, "", "below_grid", "closed forms match or beat the phase grid");
            return out;
        }
    }

    // ---------------------------------------------------------------------------------------------

    std::string csv_header() { return "x,method,mean_rate,stderr,draws,failures\n"; }

    std::string csv_rows(const PointResult &p)
    {
        std::string out;
        for (const MethodStats &m : p.methods)
            out += fmt(p.x) + "," + m.method + "," + fmt(m.mean) + "," + fmt(m.stderr_) + "," + std::to_string(m.draws) +
                   "," + std::to_string(m.failures) + "\n";
        return out;
    }

    std::string results_csv(const ExperimentResult &r)
    {
        std::string out = csv_header();
        for (const PointResult &p : r.points)
            out += csv_rows(p);
        return out;
    }

    static void write_text(const std::string &path, const std::string &text)
    {
        const std::filesystem::path p(path);
        if (p.has_parent_path())
            std::filesystem::create_directories(p.parent_path());
        std::ofstream os(path, std::ios::binary | std::ios::trunc);
        if (!os)
            throw std::runtime_error("cannot write '" + path + "'");
        os << text;
        if (!os)
            throw std::runtime_error("write failed for '" + path + "'");
    }

    ExperimentResult run_experiment(const ExperimentSpec &spec, unsigned threads, const std::string &csv_path)
    {
        spec.validate();
        ExperimentResult res;
        res.spec = spec;
        const std::vector<std::string> methods = experiment_methods(spec);
        threads = std::max(1u, std::min(threads, spec.draws));

        std::string csv = csv_header();
        for (unsigned pi = 0; pi < spec.sweep.size(); ++pi)
        {
            const double x = spec.sweep[pi];
            const SystemScenario s = point_scenario(spec, x);
            std::vector<DrawOutcome> draws(spec.draws);
            std::atomic<unsigned> next{0};
            auto worker = [&]()
            {
                for (unsigned d = next++; d < spec.draws; d = next++)
                    draws[d] = eval_draw(DrawContext{spec, s, pi, d}, methods);
            };
            if (threads == 1)
                worker();
            else
            {
                std::vector<std::thread> pool;
                for (unsigned t = 0; t < threads; ++t)
                    pool.emplace_back(worker);
                for (auto &t : pool)
                    t.join();
            }
            res.points.push_back(reduce(x, methods, draws));
            csv += csv_rows(res.points.back());
            if (!csv_path.empty())
                write_text(csv_path, csv);
        }
        res.assertions = assertions_for(res);
        return res;
    }

    json summary_json(const ExperimentResult &r)
    {
        json points = json::array();
        for (const PointResult &p : r.points)
        {
            json ms = json::array();
            for (const MethodStats &m : p.methods)
                ms.push_back({{"method", m.method},
                              {"mean", m.mean},
                              {"stderr", m.stderr_},
                              {"draws", m.draws},
                              {"failures", m.failures},
                              {"counters", m.counters}});
            points.push_back({{"x", p.x}, {"methods", ms}});
        }
        json as = json::array();
        for (const Assertion &a : r.assertions)
            as.push_back({{"name", a.name}, {"passed", a.passed}, {"detail", a.detail}});
        return {{"experiment", r.spec.id},
                {"axis", experiment_info(r.spec.id).axis},
                {"seed", r.spec.seed},
                {"draws", r.spec.draws},
                {"sweep", r.spec.sweep},
                {"methods", experiment_methods(r.spec)},
                {"scenario", scenario_to_json(r.spec.scenario)},
                {"points", points},
                {"assertions", as},
                {"passed", r.passed()}};
    }

    std::string write_experiment_outputs(const ExperimentResult &r)
    {
        const std::filesystem::path dir(r.spec.output);
        const std::string csv = (dir / (r.spec.id + ".csv")).string();
        write_text(csv, results_csv(r));
        write_text((dir / (r.spec.id + ".summary.json")).string(), summary_json(r).dump(2) + "\n");
        return csv;
    }
}
