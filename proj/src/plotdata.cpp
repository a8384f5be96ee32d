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

#include "irsbf/plotdata.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace irsbf
{
    static std::vector<std::string> split(const std::string &line)
    {
        std::vector<std::string> out;
        std::string cur;
        for (char c : line)
        {
            if (c == ',')
            {
                out.push_back(cur);
                cur.clear();
            }
            else
                cur += c;
        }
        out.push_back(cur);
        return out;
    }

    static double to_double(const std::string &s, size_t line, const char *what)
    {
        if (s == "nan")
            return std::numeric_limits<double>::quiet_NaN();
        double v = 0.0;
        const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size())
            throw std::runtime_error("line " + std::to_string(line) + ": bad " + what + " '" + s + "'");
        return v;
    }

    std::vector<Series> parse_results_csv(const std::string &text)
    {
        std::istringstream is(text);
        std::string line;
        size_t n = 0;
        if (!std::getline(is, line))
            throw std::runtime_error("line 1: missing header");
        ++n;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line != "x,method,mean_rate,stderr,draws,failures")
            throw std::runtime_error("line 1: unexpected header '" + line + "'");

        std::vector<Series> out;
        while (std::getline(is, line))
        {
            ++n;
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            if (line.empty())
                continue;
            const auto f = split(line);
            if (f.size() != 6)
                throw std::runtime_error("line " + std::to_string(n) + ": expected 6 fields, got " + std::to_string(f.size()));
            if (f[1].empty() || f[1].find_first_of("/\\ ") != std::string::npos)
                throw std::runtime_error("line " + std::to_string(n) + ": bad method name '" + f[1] + "'");
            const SeriesPoint p{to_double(f[0], n, "x"), to_double(f[2], n, "mean"), to_double(f[3], n, "stderr")};
            (void)to_double(f[4], n, "draw count");
            (void)to_double(f[5], n, "failure count");
            Series *s = nullptr;
            for (Series &e : out)
                if (e.method == f[1])
                    s = &e;
            if (!s)
            {
                out.push_back({f[1], {}});
                s = &out.back();
            }
            s->points.push_back(p);
        }
        if (out.empty())
            throw std::runtime_error("empty sweep: no data rows");
        return out;
    }

    std::vector<std::string> emit_plotdata(const std::string &csv_path, const std::string &out_dir,
                                           const std::string &prefix)
    {
        std::ifstream is(csv_path, std::ios::binary);
        if (!is)
            throw std::runtime_error("cannot open '" + csv_path + "'");
        std::stringstream ss;
        ss << is.rdbuf();
        std::vector<Series> series;
        try
        {
            series = parse_results_csv(ss.str());
        }
        catch (const std::exception &e)
        {
            throw std::runtime_error(csv_path + ": " + e.what());
        }

        std::filesystem::create_directories(out_dir);
        std::vector<std::string> files;
        for (const Series &s : series)
        {
            const std::string name = (prefix.empty() ? "" : prefix + "_") + s.method + ".dat";
            const std::string path = (std::filesystem::path(out_dir) / name).string();
            std::ofstream os(path, std::ios::binary | std::ios::trunc);
            if (!os)
                throw std::runtime_error("cannot write '" + path + "'");
            os << "# " << s.method << "\n# x y yerr\n";
            char buf[128];
            for (const SeriesPoint &p : s.points)
            {
                std::snprintf(buf, sizeof buf, "%.10g %.10g %.10g\n", p.x, p.y, p.yerr);
                os << buf;
            }
            files.push_back(path);
        }
        return files;
    }
}
