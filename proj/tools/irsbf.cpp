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
#include "irsbf/matrix_io.hpp"
#include "irsbf/plotdata.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <filesystem>
#include <iostream>

using namespace irsbf;

static std::string join(const std::vector<double> &v)
{
    std::string s;
    for (double x : v)
    {
        std::ostringstream os;
        os << x;
        s += (s.empty() ? "" : ",") + os.str();
    }
    return s;
}

static int cmd_run(const std::string &path, const std::optional<std::uint64_t> &seed,
                   const std::optional<unsigned> &draws, const std::optional<std::string> &out, unsigned threads,
                   bool strict)
{
    ExperimentSpec spec = load_experiment_spec(path);
    if (seed)
        spec.seed = *seed;
    if (draws)
        spec.draws = *draws;
    if (out)
        spec.output = *out;
    spec.validate();

    const auto t0 = std::chrono::steady_clock::now();
    const std::string csv = (std::filesystem::path(spec.output) / (spec.id + ".csv")).string();
    const ExperimentResult r = run_experiment(spec, threads, csv);
    write_experiment_outputs(r);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::cout << spec.id << ": " << spec.sweep.size() << " points x " << spec.draws << " draws in " << secs << " s\n";
    std::cout << "csv: " << csv << "\n";
    for (const Assertion &a : r.assertions)
        std::cout << (a.passed ? "PASS " : "FAIL ") << a.name << " (" << a.detail << ")\n";
    unsigned failures = 0;
    for (const PointResult &p : r.points)
        for (const MethodStats &m : p.methods)
            failures += m.failures;
    if (failures > 0)
        std::cout << "solver failures: " << failures << " (see the failures column)\n";
    return strict && !r.passed() ? 3 : 0;
}

static int cmd_list()
{
    for (const ExperimentInfo &e : experiment_registry())
        std::cout << e.id << "\n  sweep: " << e.axis << " [" << join(e.default_sweep) << "]\n  " << e.description << "\n";
    return 0;
}

static int cmd_validate(const std::string &path)
{
    const ExperimentSpec spec = load_experiment_spec(path);
    std::cout << path << ": ok (" << spec.id << ", " << spec.sweep.size() << " points, " << spec.draws
              << " draws, seed " << spec.seed << ")\n";
    return 0;
}

static int cmd_plotdata(const std::string &csv, const std::string &out, const std::string &prefix)
{
    for (const std::string &f : emit_plotdata(csv, out, prefix))
        std::cout << f << "\n";
    return 0;
}

static int cmd_dump(const std::string &scenario, const std::string &defaults, unsigned draw,
                    const std::string &baseline, const std::string &out)
{
    SystemScenario s = defaults == "multi" ? multi_user_defaults() : single_user_defaults();
    if (!scenario.empty())
        s = load_scenario(scenario, s);
    Rng rng(mix_seed(s.seed, draw));
    const ChannelSet chs = build_double_irs_scenario(s, rng);
    ChannelSet written = chs;
    if (baseline == "a1")
        written = build_single_irs_baseline_A1(chs);
    else if (baseline == "a2")
        written = build_single_irs_baseline_A2(s, matched_baseline_ranks(chs), rng);
    write_matrices(out, channel_set_matrices(written));
    std::cout << out << ": N=" << written.n_antennas << " M1=" << written.m1 << " M2=" << written.m2
              << " K=" << written.n_users << "\n";
    return 0;
}

int main(int argc, char **argv)
{
    CLI::App app{"Double-IRS cooperative beamforming experiments"};
    app.require_subcommand(1);

    std::string spec_path, csv_path, out_dir = "plotdata", prefix, scenario_path, defaults = "single",
                                     baseline = "none", dump_out = "channels.irsbfmat";
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> draws;
    std::optional<std::string> out;
    unsigned threads = 1, draw = 0;
    bool strict = false;

    auto *run = app.add_subcommand("run", "run an experiment spec");
    run->add_option("spec", spec_path, "experiment spec (JSON)")->required()->check(CLI::ExistingFile);
    run->add_option("--seed", seed, "master seed");
    run->add_option("--draws", draws, "Monte-Carlo draws per sweep point")->check(CLI::PositiveNumber);
    run->add_option("--out", out, "output directory");
    run->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    run->add_flag("--strict", strict, "exit with status 3 when an embedded assertion fails");

    auto *list = app.add_subcommand("list-experiments", "list experiment ids");

    auto *validate = app.add_subcommand("validate", "parse and check an experiment spec");
    validate->add_option("spec", spec_path, "experiment spec (JSON)")->required()->check(CLI::ExistingFile);

    auto *plot = app.add_subcommand("plotdata", "write one x/y/yerr series file per method");
    plot->add_option("csv", csv_path, "experiment CSV")->required()->check(CLI::ExistingFile);
    plot->add_option("--out", out_dir, "output directory");
    plot->add_option("--prefix", prefix, "file name prefix");

    auto *dump = app.add_subcommand("dump-channels", "draw one channel realization and write it as a matrix container");
    dump->add_option("--scenario", scenario_path, "scenario overrides (JSON)")->check(CLI::ExistingFile);
    dump->add_option("--defaults", defaults, "base scenario")->check(CLI::IsMember({"single", "multi"}));
    dump->add_option("--draw", draw, "draw index");
    dump->add_option("--baseline", baseline, "write a single-IRS baseline instead")
        ->check(CLI::IsMember({"none", "a1", "a2"}));
    dump->add_option("--out", dump_out, "output file");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*run)
            return cmd_run(spec_path, seed, draws, out, threads, strict);
        if (*list)
            return cmd_list();
        if (*validate)
            return cmd_validate(spec_path);
        if (*plot)
            return cmd_plotdata(csv_path, out_dir, prefix);
        if (*dump)
            return cmd_dump(scenario_path, defaults, draw, baseline, dump_out);
    }
    catch (const ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
