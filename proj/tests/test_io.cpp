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

#include "irsbf/matrix_io.hpp"
#include "irsbf/scenario_io.hpp"

#include <sstream>

using namespace irsbf;
using Catch::Approx;

static double max_abs(const CMat &A) { return A.is_empty() ? 0.0 : arma::abs(A).max(); }

TEST_CASE("Matrix container round trip is exact")
{
    Rng rng(2);
    const std::vector<NamedMatrix> in = {{"A", crandn(3, 4, rng)}, {"empty", CMat(0, 2)}, {"v", crandn(5, 1, rng)}};
    std::stringstream ss;
    write_matrices(ss, in);
    const auto out = read_matrices(ss);
    REQUIRE(out.size() == 3);
    for (size_t i = 0; i < 3; ++i)
    {
        CHECK(out[i].name == in[i].name);
        CHECK(out[i].value.n_rows == in[i].value.n_rows);
        CHECK(out[i].value.n_cols == in[i].value.n_cols);
        CHECK(max_abs(out[i].value - in[i].value) == 0.0);
    }
}

TEST_CASE("Matrix container rejects corrupt input")
{
    std::stringstream bad("NOTAMATRIXFILE");
    CHECK_THROWS(read_matrices(bad));

    Rng rng(2);
    std::stringstream ss;
    write_matrices(ss, {{"A", crandn(3, 3, rng)}});
    const std::string full = ss.str();
    std::stringstream cut(full.substr(0, full.size() - 8));
    CHECK_THROWS(read_matrices(cut));
}

TEST_CASE("Channel sets and SDP instances survive serialization")
{
    const ChannelSet c = build_double_irs_scenario(multi_user_defaults());
    const ChannelSet d = channel_set_from_matrices(channel_set_matrices(c));
    CHECK(d.has_raw_links());
    CHECK(d.n_users == c.n_users);
    CHECK(max_abs(d.Q[3].slice(7) - c.Q[3].slice(7)) == 0.0);

    const ChannelSet b = build_single_irs_baseline_A1(build_double_irs_scenario(single_user_defaults()));
    const ChannelSet e = channel_set_from_matrices(channel_set_matrices(b));
    CHECK_FALSE(e.has_raw_links());
    CHECK(max_abs(e.R2[0] - b.R2[0]) == 0.0);

    Rng rng(4);
    MaxMinSdpInstance inst;
    inst.q = {crandn(3, 2, rng), crandn(3, 2, rng)};
    inst.qbar = crandn(2, 2, rng);
    inst.noise = {0.5, 2.0};
    const MaxMinSdpInstance back = instance_from_matrices(instance_matrices(inst));
    CHECK(max_abs(back.q[1] - inst.q[1]) == 0.0);
    CHECK(max_abs(back.qbar - inst.qbar) == 0.0);
    CHECK(back.noise(1) == 2.0);
}

TEST_CASE("Scenario overrides convert dB and dBm at the boundary")
{
    const std::string text = R"({
  "n_antennas": 8,
  "power_dbm": 20,
  "noise_dbm": -64,
  "far_kappa_db": 0,
  "links": { "irs2_bs": { "kappa_db": 10, "scatterers": 3 } },
  "model": "geometric",
  "seed": 18446744073709551615
})";
    SystemScenario s = single_user_defaults();
    apply_scenario_json(s, parse_json_document(text, "mem"));
    CHECK(s.n_antennas == 8);
    CHECK(s.powers.size() == 1);
    CHECK(s.powers[0] == Approx(0.1).epsilon(1e-12));
    CHECK(s.noise == Approx(std::pow(10.0, -9.4)).epsilon(1e-12));
    CHECK(s.user_irs2.kappa == Approx(1.0));
    CHECK(s.inter_irs.kappa == Approx(1.0));
    CHECK(s.irs2_bs.kappa == Approx(10.0));
    CHECK(s.irs2_bs.scatterers == 3);
    CHECK(s.model == FadingModel::Geometric);
    CHECK(s.seed == 18446744073709551615ULL);
}

TEST_CASE("Scenario JSON round trip")
{
    SystemScenario s = multi_user_defaults();
    s.user_irs1.kappa = 0.0;
    const json j = scenario_to_json(s);
    SystemScenario t = single_user_defaults();
    apply_scenario_json(t, parse_json_document(j.dump(), "mem"));
    CHECK(t.n_antennas == s.n_antennas);
    CHECK(t.n_users == s.n_users);
    CHECK(t.model == s.model);
    CHECK(t.user_irs1.kappa == 0.0);
    CHECK(t.irs2_bs.kappa == Approx(s.irs2_bs.kappa).epsilon(1e-12));
    CHECK(t.powers[0] == Approx(s.powers[0]).epsilon(1e-12));
    CHECK(t.noise == Approx(s.noise).epsilon(1e-12));
}

TEST_CASE("Config errors report line numbers")
{
    SystemScenario s;
    const std::string unknown = "{\n  \"m1\": 4,\n  \"mm2\": 4\n}";
    try
    {
        apply_scenario_json(s, parse_json_document(unknown, "cfg.json"));
        FAIL("expected a ConfigError");
    }
    catch (const ConfigError &e)
    {
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).find("cfg.json:3") != std::string::npos);
        CHECK(std::string(e.what()).find("mm2") != std::string::npos);
    }

    const std::string syntax = "{\n  \"m1\": 4,\n  \"m2\": ,\n}";
    try
    {
        parse_json_document(syntax, "cfg.json");
        FAIL("expected a ConfigError");
    }
    catch (const ConfigError &e)
    {
        CHECK(e.line() == 3);
        CHECK(e.column() > 0);
    }

    const std::string type = "{\n  \"links\": {\n    \"inter_irs\": {\n      \"exponent\": \"three\"\n    }\n  }\n}";
    try
    {
        apply_scenario_json(s, parse_json_document(type, "cfg.json"));
        FAIL("expected a ConfigError");
    }
    catch (const ConfigError &e)
    {
        CHECK(e.line() == 4);
    }

    const std::string invalid = "{\n  \"noise_dbm\": -64,\n  \"n_users\": 0\n}";
    CHECK_THROWS_AS(apply_scenario_json(s, parse_json_document(invalid, "cfg.json")), ConfigError);
}

TEST_CASE("Position scanner handles nested arrays and escaped strings")
{
    const std::string text = "{\n  \"a\": [1,\n    [2, 3]],\n  \"b\\\"x\": \"s\\\\\"\n}";
    const JsonDocument d = parse_json_document(text, "x");
    CHECK(d.line_of("/a") == 2);
    CHECK(d.line_of("/a/1") == 3);
    CHECK(d.line_of("/a/1/1") == 3);
    CHECK(d.line_of("/b\"x") == 4);
    CHECK(d.line_of("/missing") == 1);
}
