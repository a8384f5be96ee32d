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

#include "irsbf/scenario_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace irsbf
{
    static std::string where(const std::string &origin, int line, int column)
    {
        std::string s = origin.empty() ? "<config>" : origin;
        if (line > 0)
        {
            s += ":" + std::to_string(line);
            if (column > 0)
                s += ":" + std::to_string(column);
        }
        return s;
    }

    ConfigError::ConfigError(const std::string &origin, int line, int column, const std::string &msg)
        : std::runtime_error(where(origin, line, column) + ": " + msg), line_(line), column_(column)
    {
    }

    int JsonDocument::line_of(const std::string &pointer) const
    {
        // Fall back to the closest enclosing value that has a recorded position.
        std::string p = pointer;
        for (;;)
        {
            auto it = lines.find(p);
            if (it != lines.end())
                return it->second;
            if (p.empty())
                return 0;
            p = p.substr(0, p.rfind('/'));
        }
    }

    void JsonDocument::fail(const std::string &pointer, const std::string &msg) const
    {
        throw ConfigError(origin, line_of(pointer), 0, (pointer.empty() ? std::string("/") : pointer) + ": " + msg);
    }

    double JsonDocument::number(const std::string &pointer) const
    {
        const json &v = at(pointer);
        if (!v.is_number())
            fail(pointer, "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d))
            fail(pointer, "expected a finite number");
        return d;
    }

    std::uint64_t JsonDocument::unsigned_integer(const std::string &pointer) const
    {
        const json &v = at(pointer);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
            fail(pointer, "expected a non-negative integer");
        return v.get<std::uint64_t>();
    }

    std::string JsonDocument::string(const std::string &pointer) const
    {
        const json &v = at(pointer);
        if (!v.is_string())
            fail(pointer, "expected a string");
        return v.get<std::string>();
    }

    std::vector<double> JsonDocument::numbers(const std::string &pointer) const
    {
        const json &v = at(pointer);
        if (v.is_number())
            return {number(pointer)};
        if (!v.is_array())
            fail(pointer, "expected a number or an array of numbers");
        std::vector<double> out;
        for (size_t i = 0; i < v.size(); ++i)
            out.push_back(number(pointer + "/" + std::to_string(i)));
        return out;
    }

    void JsonDocument::only_keys(const std::string &pointer, const std::set<std::string> &allowed) const
    {
        const json &v = at(pointer);
        if (!v.is_object())
            fail(pointer, "expected an object");
        for (auto it = v.begin(); it != v.end(); ++it)
            if (!allowed.count(it.key()))
                fail(pointer + "/" + it.key(), "unknown key '" + it.key() + "'");
    }

    namespace
    {
        // Records the starting line of every value of a well-formed JSON text.
        class PositionScanner
        {
        public:
            explicit PositionScanner(const std::string &t) : text(t) {}

            std::map<std::string, int> run()
            {
                while (pos < text.size())
                {
                    const char c = text[pos];
                    if (c == '\n')
                    {
                        ++line;
                        ++pos;
                    }
                    else if (c == ' ' || c == '\t' || c == '\r')
                        ++pos;
                    else if (c == '{' || c == '[')
                    {
                        const std::string p = value_pointer();
                        lines[p] = line;
                        stack.push_back({c == '{', p, "", 0, true});
                        ++pos;
                    }
                    else if (c == '}' || c == ']')
                    {
                        stack.pop_back();
                        ++pos;
                    }
                    else if (c == ',')
                    {
                        if (!stack.empty())
                        {
                            if (stack.back().object)
                                stack.back().expect_key = true;
                            else
                                ++stack.back().index;
                        }
                        ++pos;
                    }
                    else if (c == ':')
                    {
                        stack.back().expect_key = false;
                        ++pos;
                    }
                    else if (c == '"')
                    {
                        const int start_line = line;
                        const std::string s = read_string();
                        if (!stack.empty() && stack.back().object && stack.back().expect_key)
                            stack.back().key = s;
                        else
                            lines[value_pointer()] = start_line;
                    }
                    else
                    {
                        lines[value_pointer()] = line;
                        while (pos < text.size() && std::string(",}] \t\r\n").find(text[pos]) == std::string::npos)
                            ++pos;
                    }
                }
                return lines;
            }

        private:
            struct Frame
            {
                bool object;
                std::string pointer;
                std::string key;
                size_t index;
                bool expect_key;
            };

            std::string value_pointer() const
            {
                if (stack.empty())
                    return "";
                const Frame &f = stack.back();
                return f.pointer + "/" + (f.object ? escape(f.key) : std::to_string(f.index));
            }

            static std::string escape(const std::string &key)
            {
                std::string out;
                for (char ch : key)
                    out += ch == '~' ? "~0" : ch == '/' ? "~1" : std::string(1, ch);
                return out;
            }

            std::string read_string()
            {
                std::string out;
                ++pos;
                while (pos < text.size() && text[pos] != '"')
                {
                    if (text[pos] == '\\' && pos + 1 < text.size())
                        ++pos;
                    if (text[pos] == '\n')
                        ++line;
                    out += text[pos++];
                }
                ++pos;
                return out;
            }

            const std::string &text;
            size_t pos = 0;
            int line = 1;
            std::vector<Frame> stack;
            std::map<std::string, int> lines;
        };
    }

    JsonDocument parse_json_document(const std::string &text, const std::string &origin)
    {
        JsonDocument doc;
        doc.origin = origin;
        try
        {
            doc.value = json::parse(text);
        }
        catch (const json::parse_error &e)
        {
            int line = 1, column = 1;
            for (size_t i = 0; i + 1 < e.byte && i < text.size(); ++i)
            {
                if (text[i] == '\n')
                {
                    ++line;
                    column = 1;
                }
                else
                    ++column;
            }
            std::string msg = e.what();
            const auto p = msg.find("syntax error");
            throw ConfigError(origin, line, column, p == std::string::npos ? msg : msg.substr(p));
        }
        doc.lines = PositionScanner(text).run();
        return doc;
    }

    JsonDocument load_json_document(const std::string &path)
    {
        std::ifstream is(path);
        if (!is)
            throw ConfigError(path, 0, 0, "cannot open file");
        std::stringstream ss;
        ss << is.rdbuf();
        return parse_json_document(ss.str(), path);
    }

    // ---------------------------------------------------------------------------------------------

    static arma::vec3 read_vec3(const JsonDocument &doc, const std::string &p)
    {
        const std::vector<double> v = doc.numbers(p);
        if (v.size() != 3 || !doc.at(p).is_array())
            doc.fail(p, "expected [x, y, z]");
        return {v[0], v[1], v[2]};
    }

    static const std::map<std::string, LinkParams SystemScenario::*> kLinks = {
        {"user_irs1", &SystemScenario::user_irs1},
        {"user_irs2", &SystemScenario::user_irs2},
        {"inter_irs", &SystemScenario::inter_irs},
        {"irs1_bs", &SystemScenario::irs1_bs},
        {"irs2_bs", &SystemScenario::irs2_bs},
    };

    static void read_link(LinkParams &l, const JsonDocument &doc, const std::string &p)
    {
        doc.only_keys(p, {"exponent", "kappa_db", "kappa", "scatterers"});
        if (doc.has(p + "/exponent"))
            l.exponent = doc.number(p + "/exponent");
        if (doc.has(p + "/kappa_db") && doc.has(p + "/kappa"))
            doc.fail(p, "give either kappa_db or kappa, not both");
        if (doc.has(p + "/kappa_db"))
            l.kappa = db_to_linear(doc.number(p + "/kappa_db"));
        if (doc.has(p + "/kappa"))
            l.kappa = doc.number(p + "/kappa");
        if (doc.has(p + "/kappa") && l.kappa < 0.0)
            doc.fail(p + "/kappa", "Rician factor must be >= 0");
        if (doc.has(p + "/exponent") && l.exponent < 0.0)
            doc.fail(p + "/exponent", "path-loss exponent must be >= 0");
        if (doc.has(p + "/scatterers"))
            l.scatterers = doc.unsigned_integer(p + "/scatterers");
    }

    void apply_scenario_json(SystemScenario &s, const JsonDocument &doc, const std::string &p)
    {
        doc.only_keys(p, {"bs", "irs1", "irs2", "users", "user_radius", "n_antennas", "m1", "m2", "n_users",
                          "ref_loss_db", "aperture_gain", "model", "links", "far_kappa_db", "orientations", "spacing",
                          "power_dbm", "noise_dbm", "wavelength", "seed"});
        auto has = [&](const char *k)
        { return doc.has(p + "/" + k); };
        auto key = [&](const char *k)
        { return p + "/" + k; };

        if (has("bs"))
            s.bs = read_vec3(doc, key("bs"));
        if (has("irs1"))
            s.irs1 = read_vec3(doc, key("irs1"));
        if (has("irs2"))
            s.irs2 = read_vec3(doc, key("irs2"));
        if (has("users"))
            s.users = read_vec3(doc, key("users"));
        if (has("user_radius"))
            s.user_radius = doc.number(key("user_radius"));
        if (has("n_antennas"))
            s.n_antennas = doc.unsigned_integer(key("n_antennas"));
        if (has("m1"))
            s.m1 = doc.unsigned_integer(key("m1"));
        if (has("m2"))
            s.m2 = doc.unsigned_integer(key("m2"));
        if (has("n_users"))
            s.n_users = doc.unsigned_integer(key("n_users"));
        if (has("ref_loss_db"))
            s.ref_loss_db = doc.number(key("ref_loss_db"));
        if (has("aperture_gain"))
            s.aperture_gain = doc.number(key("aperture_gain"));
        if (has("model"))
        {
            const std::string m = doc.string(key("model"));
            if (m == "rician")
                s.model = FadingModel::Rician;
            else if (m == "geometric")
                s.model = FadingModel::Geometric;
            else
                doc.fail(key("model"), "expected \"rician\" or \"geometric\"");
        }
        if (has("far_kappa_db"))
        {
            const double k = db_to_linear(doc.number(key("far_kappa_db")));
            s.user_irs2.kappa = s.inter_irs.kappa = s.irs1_bs.kappa = k;
        }
        if (has("links"))
        {
            doc.only_keys(key("links"), {"user_irs1", "user_irs2", "inter_irs", "irs1_bs", "irs2_bs"});
            for (const auto &[name, member] : kLinks)
                if (doc.has(key("links") + "/" + name))
                    read_link(s.*member, doc, key("links") + "/" + name);
        }
        if (has("orientations"))
        {
            const std::string o = key("orientations");
            doc.only_keys(o, {"bs", "irs1", "irs2"});
            if (doc.has(o + "/bs"))
                s.bs_orientation = doc.number(o + "/bs");
            if (doc.has(o + "/irs1"))
                s.irs1_orientation = doc.number(o + "/irs1");
            if (doc.has(o + "/irs2"))
                s.irs2_orientation = doc.number(o + "/irs2");
        }
        if (has("spacing"))
            s.spacing = doc.number(key("spacing"));
        if (has("power_dbm"))
        {
            s.powers.clear();
            for (double d : doc.numbers(key("power_dbm")))
                s.powers.push_back(dbm_to_watt(d));
        }
        if (has("noise_dbm"))
            s.noise = dbm_to_watt(doc.number(key("noise_dbm")));
        if (has("wavelength"))
            s.wavelength = doc.number(key("wavelength"));
        if (has("seed"))
            s.seed = doc.unsigned_integer(key("seed"));

        try
        {
            s.validate();
        }
        catch (const std::exception &e)
        {
            doc.fail(p, e.what());
        }
    }

    json scenario_to_json(const SystemScenario &s)
    {
        auto v3 = [](const arma::vec3 &v)
        { return json::array({v(0), v(1), v(2)}); };
        auto link = [](const LinkParams &l)
        {
            json j = {{"exponent", l.exponent}, {"scatterers", l.scatterers}};
            if (l.kappa > 0.0)
                j["kappa_db"] = linear_to_db(l.kappa);
            else
                j["kappa"] = 0.0;
            return j;
        };
        json powers = json::array();
        for (double p : s.powers)
            powers.push_back(linear_to_db(p) + 30.0);
        json links;
        for (const auto &[name, member] : kLinks)
            links[name] = link(s.*member);
        return {
            {"bs", v3(s.bs)},
            {"irs1", v3(s.irs1)},
            {"irs2", v3(s.irs2)},
            {"users", v3(s.users)},
            {"user_radius", s.user_radius},
            {"n_antennas", s.n_antennas},
            {"m1", s.m1},
            {"m2", s.m2},
            {"n_users", s.n_users},
            {"ref_loss_db", s.ref_loss_db},
            {"aperture_gain", s.aperture_gain},
            {"model", s.model == FadingModel::Rician ? "rician" : "geometric"},
            {"links", links},
            {"orientations", {{"bs", s.bs_orientation}, {"irs1", s.irs1_orientation}, {"irs2", s.irs2_orientation}}},
            {"spacing", s.spacing},
            {"power_dbm", powers},
            {"noise_dbm", linear_to_db(s.noise) + 30.0},
            {"wavelength", s.wavelength},
            {"seed", s.seed},
        };
    }

    SystemScenario load_scenario(const std::string &path, const SystemScenario &base)
    {
        const JsonDocument doc = load_json_document(path);
        SystemScenario s = base;
        apply_scenario_json(s, doc);
        return s;
    }
}
