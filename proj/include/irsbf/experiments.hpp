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

#ifndef IRSBF_EXPERIMENTS_HPP
#define IRSBF_EXPERIMENTS_HPP

#include "irsbf/mu_opt.hpp"
#include "irsbf/scenario_io.hpp"

#include <map>
#include <string>
#include <vector>

namespace irsbf
{
    struct ExperimentInfo
    {
        std::string id;
        std::string axis; // meaning of the sweep values
        std::string description;
        std::vector<double> default_sweep;
    };

    const std::vector<ExperimentInfo> &experiment_registry();
    const ExperimentInfo &experiment_info(const std::string &id); // throws std::invalid_argument

    struct ExperimentOptions
    {
        std::vector<RxMode> rx;            // empty: experiment default
        std::vector<double> kappa_db{-10.0, 0.0, 10.0}; // fig6 kappa set (far links)
        unsigned I0 = 100;
        double su_tol = 1e-8;
        unsigned restarts = 20;      // single-IRS optimum restarts
        unsigned sdr_rounds = 10;
        unsigned I1 = 4;
        double xi = 1e-3;
        double eps = 0.1;
        unsigned candidates = 100;
        unsigned random_starts = 0;  // extra Algorithm 1 starts; > 0 switches to multi-start from all DFT pairs
        unsigned grid_points = 64;   // oracle-suite phase grid per entry
    };

    struct ExperimentSpec
    {
        std::string id;
        SystemScenario scenario; // base for the experiment plus overrides
        std::vector<double> sweep;
        unsigned draws = 100;
        std::uint64_t seed = 1;
        std::string output = "results";
        ExperimentOptions options;

        void validate() const; // std::invalid_argument
    };

    // Base scenario of an experiment before overrides.
    SystemScenario experiment_base_scenario(const std::string &id);

    // Parses and validates a spec document; errors carry file and line.
    ExperimentSpec parse_experiment_spec(const JsonDocument &doc);
    ExperimentSpec load_experiment_spec(const std::string &path);

    // Scenario of one sweep point.
    SystemScenario point_scenario(const ExperimentSpec &spec, double x);

    // Method names in output order.
    std::vector<std::string> experiment_methods(const ExperimentSpec &spec);

    struct MethodStats
    {
        std::string method;
        double mean = 0.0;
        double stderr_ = 0.0;
        unsigned draws = 0;    // successful
        unsigned failures = 0;
        std::map<std::string, double> counters; // summed per-draw extras (e.g. min_sinr, zf_fallback)
        std::vector<double> values;             // per-draw values in draw order (NaN on failure)
    };

    struct PointResult
    {
        double x = 0.0;
        std::vector<MethodStats> methods;
        const MethodStats &at(const std::string &method) const;
    };

    struct Assertion
    {
        std::string name;
        bool passed = false;
        std::string detail;
    };

    struct ExperimentResult
    {
        ExperimentSpec spec;
        std::vector<PointResult> points;
        std::vector<Assertion> assertions;
        bool passed() const;
    };

    // Per-draw seeds: channels use mix_seed(seed, draw) so every sweep point sees the same draw stream;
    // solver stream i uses mix_seed(mix_seed(seed, draw, point + 1), i). Draws run on `threads` workers and are reduced
    // in draw order. When csv_path is non-empty the CSV is rewritten after every sweep point.
    ExperimentResult run_experiment(const ExperimentSpec &spec, unsigned threads = 1, const std::string &csv_path = "");

    std::string csv_header();
    std::string csv_rows(const PointResult &p);
    std::string results_csv(const ExperimentResult &r);
    json summary_json(const ExperimentResult &r);

    // Writes <output>/<id>.csv and <output>/<id>.summary.json; returns the CSV path.
    std::string write_experiment_outputs(const ExperimentResult &r);
}

#endif
